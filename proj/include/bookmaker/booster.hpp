#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bookmaker/dataset.hpp"
#include "bookmaker/stump.hpp"

namespace bookmaker {

/// Goodness measure driving the boosting loop. Accuracy gives standard
/// AdaBoost.M1; the others substitute the Gini-mapped chance-corrected value
/// everywhere accuracy appears (stopping test, alpha, reweighting odds).
enum class Measure { Accuracy, Kappa, Informedness, Markedness, Correlation };

std::string measure_name(Measure m);
Measure measure_from_name(const std::string& name);

/// Weighted-vote ensemble of stumps. Members only ever join with goodness
/// strictly better than chance, so every alpha is positive. When the very
/// first round already fails the liveness test the lone fitted stump is kept
/// as a fallback predictor (the weak learner alone is the model the stalled
/// procedure leaves behind); it carries no vote weight.
struct Ensemble {
  std::vector<std::pair<Stump, double>> members;  ///< (stump, alpha)
  std::optional<Stump> fallback;
  Measure measure = Measure::Accuracy;
  int k = 0;
};

struct BoostRound {
  int round = 0;       ///< 1-based
  double goodness = 0.0;
  double alpha = 0.0;  ///< ln(g / (1-g)) of this round's goodness
  double weighted_accuracy = 0.0;
  double train_accuracy = 0.0;  ///< ensemble-so-far accuracy on the train set
  std::optional<double> test_accuracy;
  bool retained = false;  ///< whether this round's stump joined the ensemble
};

struct BoostTrace {
  std::vector<BoostRound> rounds;
  /// Set when stop_on_degenerate ended the run: the undefined-measure message
  /// (with its round number) that would otherwise have been thrown.
  std::optional<std::string> degenerate_stop;
};

struct BoostConfig {
  int rounds = 100;
  Measure measure = Measure::Informedness;
  double delta = 1e-9;     ///< liveness tolerance around 0.5 and 1
  bool resample = false;   ///< fit on a weight-proportional resample instead
  std::uint64_t seed = 0;  ///< drives resampling only
  /// When a chance-corrected measure is undefined on a round's table, stop
  /// cleanly instead of propagating the typed error.
  bool stop_on_degenerate = false;
};

/// Boosts decision stumps on the training set. Per round: fit a stump on the
/// current weights (or a seeded resample), score it with the configured
/// measure on the weighted contingency table, stop before adding it when the
/// goodness is within delta of chance (0.5) or of perfection (1), otherwise
/// add it with alpha = ln(g/(1-g)), multiply every misclassified instance's
/// weight by those odds and renormalize. Initial weights are uniform.
std::pair<Ensemble, BoostTrace> boost_train(const LabeledDataset& train,
                                            const BoostConfig& config,
                                            const LabeledDataset* test = nullptr);

/// Alpha-weighted vote among the members; ties to the lowest class index.
int ensemble_predict(const Ensemble& ensemble, const Eigen::VectorXd& x);

std::vector<int> ensemble_predict_all(const Ensemble& ensemble, const LabeledDataset& dataset);

enum class TraceFormat { Csv, Json };

/// Serializes the trace with columns round,g,alpha,weighted_acc,train_acc,
/// test_acc in round order; numbers carry 17 significant digits.
std::string emit_trace(const BoostTrace& trace, TraceFormat format);

/// Ensemble text format: header `measure,k,rounds`, then one line per member
/// `feature,threshold,below_class,above_class,alpha`. A stalled run with no
/// members writes its fallback stump as one extra line with alpha 0.
void save_ensemble(const Ensemble& ensemble, const std::string& path);
Ensemble load_ensemble(const std::string& path);

}  // namespace bookmaker
