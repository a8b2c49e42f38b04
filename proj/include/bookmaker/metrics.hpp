#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bookmaker/contingency.hpp"

namespace bookmaker {

/// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Bookmaker payoff matrix derived from class prevalences:
/// g(p, r) = 1 / (prev_p - [p != r]). Betting on class p pays 1/prev_p when
/// right and costs 1/(1 - prev_p) when wrong, so guessing at the marginal
/// rates has expected gain zero.
struct GainMatrix {
  Eigen::MatrixXd g;
  Eigen::VectorXd prevalences;
};

struct PerClassMetrics {
  int cls = 0;
  double prevalence = 0.0;
  double bias = 0.0;
  std::optional<double> delta_p;
  std::optional<double> delta_p_prime;
  std::optional<double> precision;
  std::optional<double> recall;
};

/// Aggregate chance-corrected report over one contingency table. Metrics
/// whose marginals are degenerate are left unset, with an explanatory note.
struct MetricReport {
  double n = 0.0;
  int k = 0;
  double accuracy = 0.0;
  std::optional<double> informedness;
  std::optional<double> markedness;
  std::optional<double> kappa;
  std::optional<double> correlation;
  std::vector<PerClassMetrics> per_class;
  std::vector<std::string> notes;
};

/// Dichotomous informedness: tpr - fpr (Sensitivity + Specificity - 1).
/// Requires both prevalences positive; degenerate prevalence is an error.
double delta_p_prime(const DichotomousCounts& d);

/// Dichotomous markedness: Precision + Inverse Precision - 1.
/// Requires both biases positive; degenerate bias is an error.
double delta_p(const DichotomousCounts& d);

/// Multiclass informedness: the bias-weighted sum of per-class delta-P'.
/// Every class prevalence must lie strictly inside (0, 1).
double informedness(const ContingencyTable& t);

/// Multiclass markedness: the prevalence-weighted sum of per-class delta-P.
/// Computed as informedness of the transposed table, so the transposition
/// duality holds exactly. Every class bias must lie strictly inside (0, 1).
double markedness(const ContingencyTable& t);

/// Builds the bookmaker gain matrix for prevalences strictly inside (0, 1)
/// summing to 1 (within 1e-9).
GainMatrix gain_matrix(const Eigen::VectorXd& prevalences);

/// Informedness as the expected bookmaker payout: the bias-weighted sum over
/// predictions of the gain-weighted cell probabilities. Must agree with
/// informedness() to 1e-10; the two routes cross-check each other.
double informedness_bookmaker(const ContingencyTable& t);

/// Cohen's kappa: (Acc - E(Acc)) / (1 - E(Acc)) with E(Acc) the dot product
/// of bias and prevalence vectors.
double kappa_cohen(const ContingencyTable& t);

/// Correlation as the signed geometric mean of informedness and markedness.
/// When the two components have opposite signs the geometric mean is
/// undefined and an UndefinedMetricError reporting both values is thrown.
double matthews_correlation(const ContingencyTable& t);

/// Affine map sending a chance-corrected measure in [-1, 1] to the accuracy
/// scale [0, 1] with the chance level 0 landing on 1/2.
double gini(double k_value);

struct HarmonicInfo {
  double harmonic = 0.0;  ///< sum of 1/i for i = 1..p
  double approx = 0.0;    ///< ln(p) + Euler's gamma
};

/// Harmonic number H_p and its logarithmic approximation (p >= 1).
HarmonicInfo harmonic_information(long p);

/// Computes the full report, recording undefined metrics as notes instead of
/// throwing. Per-class entries always carry prevalence and bias; the ratio
/// fields are set only where defined.
MetricReport metric_report(const ContingencyTable& t);

}  // namespace bookmaker
