#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "bookmaker/errors.hpp"

namespace bookmaker {

/// K x K weighted prediction-vs-real table.
///
/// Orientation is fixed: rows index the *predicted* class, columns the *real*
/// class (row-P / column-R). Cells are non-negative real weights; plain
/// counting is the unit-weight special case. Immutable after construction.
class ContingencyTable {
 public:
  /// Builds a table from an explicit square matrix of cell weights.
  /// The class count is the matrix dimension and the total weight is the cell
  /// sum. Throws ValueError on negative cells, k < 2, or zero total weight.
  explicit ContingencyTable(Eigen::MatrixXd counts);

  int k() const { return static_cast<int>(counts_.rows()); }
  double n() const { return n_; }
  double cell(int predicted, int real) const { return counts_(predicted, real); }
  const Eigen::MatrixXd& counts() const { return counts_; }

  /// Weight predicted as each class (row sums).
  Eigen::VectorXd predicted_marginals() const { return counts_.rowwise().sum(); }
  /// Weight really belonging to each class (column sums).
  Eigen::VectorXd real_marginals() const { return counts_.colwise().sum().transpose(); }

  /// Per-class prevalence: real marginals / n.
  Eigen::VectorXd prevalences() const { return real_marginals() / n_; }
  /// Per-class bias: predicted marginals / n.
  Eigen::VectorXd biases() const { return predicted_marginals() / n_; }

  /// Total correctly classified weight.
  double trace() const { return counts_.trace(); }

  /// Table with prediction and reality swapped.
  ContingencyTable transposed() const;

  /// Table with `epsilon` added to every cell. Makes all marginals strictly
  /// positive so otherwise-degenerate metrics return a number.
  ContingencyTable smoothed(double epsilon) const;

 private:
  Eigen::MatrixXd counts_;
  double n_;
};

/// One-vs-rest 2x2 cell weights (tp/fp/fn/tn of the dichotomous table).
struct DichotomousCounts {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;

  double total() const { return tp + fp + fn + tn; }
};

/// Rates derived from a dichotomous table. Ratios whose denominator is zero
/// are left unset rather than silently replaced by 0 or NaN; callers decide
/// policy. rp/rn/pp/pn/acc always exist (total weight is positive).
struct RateSet {
  double rp = 0.0;   ///< Prevalence
  double rn = 0.0;   ///< Inverse Prevalence
  double pp = 0.0;   ///< Bias
  double pn = 0.0;   ///< Inverse Bias
  double acc = 0.0;  ///< Accuracy = tp + tn over total

  std::optional<double> tpr;    ///< Recall / Sensitivity, needs rp > 0
  std::optional<double> fnr;    ///< needs rp > 0
  std::optional<double> tnr;    ///< Specificity, needs rn > 0
  std::optional<double> fpr;    ///< needs rn > 0
  std::optional<double> prec;   ///< Precision, needs pp > 0
  std::optional<double> iprec;  ///< Inverse Precision, needs pn > 0
};

/// Counts (predicted, real) pairs into a table. Every index must lie in
/// [0, k); the sequences must be the same nonempty length.
ContingencyTable table_from_labels(std::span<const int> gold,
                                   std::span<const int> pred, int k);

/// Weighted variant: cell[p][r] accumulates the weights of matching
/// instances. Weights must be non-negative with a positive sum.
ContingencyTable table_from_weighted(std::span<const int> gold,
                                     std::span<const int> pred,
                                     std::span<const double> weights, int k);

/// One-vs-rest reduction for `cls`: tp is the diagonal cell, fp the rest of
/// its row, fn the rest of its column, tn the remainder.
DichotomousCounts dichotomize(const ContingencyTable& table, int cls);

/// Derives the full rate set from dichotomous counts (total must be > 0).
RateSet rates(const DichotomousCounts& d);

}  // namespace bookmaker
