#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bookmaker/dataset.hpp"
#include "bookmaker/errors.hpp"

namespace bookmaker {

enum class UpdateRule { Hebb, Perceptron, Margin, SoftMargin, Winnow, Winnow2 };

enum class TargetCoding { ZeroOne, PlusMinus };

std::string rule_name(UpdateRule rule);
UpdateRule rule_from_name(const std::string& name);

/// Linear threshold model: one weight column per class over the (optionally
/// bias-augmented) feature vector. The additive rules start from zero
/// weights; the multiplicative Winnow family starts from ones and keeps every
/// weight non-negative forever.
struct LinearModel {
  Eigen::MatrixXd w;  ///< (d [+1 bias]) x k
  UpdateRule rule = UpdateRule::Perceptron;
  double lr = 1.0;         ///< learning rate, 0 freezes the model
  double margin = 0.0;     ///< margin width for the margin rule
  double promotion = 2.0;  ///< Winnow promotion factor, > 1
  bool bias_feature = false;

  int k() const { return static_cast<int>(w.cols()); }
  /// Feature count expected from callers (excludes the bias row).
  int input_dim() const { return static_cast<int>(w.rows()) - (bias_feature ? 1 : 0); }
  /// Winnow firing threshold; fixed at the weight-row count.
  double theta() const { return static_cast<double>(w.rows()); }
};

LinearModel make_model(UpdateRule rule, int d, int k, double lr = 1.0, double margin = 0.0,
                       double promotion = 2.0, bool bias_feature = false);

/// Raw per-class scores x . w (no threshold applied).
Eigen::VectorXd activate(const LinearModel& model, const Eigen::VectorXd& x);

/// Class choice. Perceptron-family models take the argmax of the raw scores
/// (ties to the lowest index). Two-class Winnow models are a single threshold
/// unit on the positive class: class 1 iff its score exceeds theta.
int predict(const LinearModel& model, const Eigen::VectorXd& x);

/// Unconditional Hebbian step: w[j][k] += lr * x_j * y_k. Returns the delta.
Eigen::MatrixXd update_hebb(LinearModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

/// Perceptron step: Hebbian delta only on output units whose prediction z_k
/// differs from the target y_k. Returns the delta.
Eigen::MatrixXd update_perceptron(LinearModel& model, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// Margin perceptron step (+/-1 coding): updates every output whose margin
/// y_k * score_k falls below the configured width. Returns the delta.
Eigen::MatrixXd update_margin(LinearModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& raw_scores);

/// Soft-margin step (+/-1 coding): the Hebbian delta is scaled by the hinge
/// ramp clamp(1 - y_k * clamp(score_k, -1, 1), 0, 1), so updates shrink
/// smoothly inside the margin and vanish outside. Returns the delta.
Eigen::MatrixXd update_soft_margin(LinearModel& model, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const Eigen::VectorXd& raw_scores);

/// Winnow step (0/1 coding, binary attributes): on a missed positive the
/// active weights are multiplied by the promotion factor; on a false positive
/// they are zeroed, irreversibly. Returns the factor matrix applied.
Eigen::MatrixXd update_winnow(LinearModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// Winnow2 step: like Winnow but false positives divide by the promotion
/// factor instead of zeroing, so a promotion and a demotion cancel exactly.
Eigen::MatrixXd update_winnow2(LinearModel& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Eigen::VectorXd& z);

struct RuleConfig {
  UpdateRule rule = UpdateRule::Perceptron;
  int epochs = 1;
  std::uint64_t seed = 0;
  double lr = 1.0;         ///< in [0, 1]; 0 freezes the model
  double margin = 0.0;
  double promotion = 2.0;  ///< > 1
  /// Target coding fed to the update rule. Defaults per rule: +/-1 for the
  /// perceptron family, 0/1 for Hebb and the Winnow family. Overriding with
  /// the wrong coding for the rule is rejected.
  TargetCoding coding = TargetCoding::ZeroOne;
  bool coding_set = false;  ///< false: derive the coding from the rule
  bool bias_feature = false;
};

struct TrainResult {
  LinearModel model;
  /// Online prediction errors per completed epoch (counted before updates).
  std::vector<int> epoch_errors;
};

/// Runs epoch passes with a seeded per-epoch shuffle. Deterministic given
/// (dataset, config). Stops early once an epoch applies no update. The
/// Winnow family requires strictly binary features.
TrainResult train(const LabeledDataset& dataset, const RuleConfig& config);

/// Flat text serialization: `rule,k,d,lr,gamma,alpha,bias` header then d rows
/// of k comma-separated weights at 17 significant digits, so round trips are
/// value-exact. Readers also accept the six-field header (no bias flag).
void save_model(const LinearModel& model, std::ostream& out);
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(std::istream& in);
LinearModel load_model(const std::string& path);

}  // namespace bookmaker
