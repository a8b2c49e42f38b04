#pragma once

#include <Eigen/Dense>
#include <span>

#include "bookmaker/dataset.hpp"

namespace bookmaker {

/// One-feature threshold classifier: x[feature] <= threshold maps to
/// below_class, anything greater to above_class. A -inf threshold therefore
/// always answers above_class and +inf always below_class.
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int below_class = 0;
  int above_class = 0;
};

enum class StumpCriterion {
  WeightedAccuracy,     ///< the standard objective
  WeightedInformedness, ///< experimental alternative split score
};

/// Exhaustive search over every feature and every candidate threshold (the
/// midpoints between consecutive distinct values plus -inf/+inf guards); each
/// side is labeled with its weighted-majority class. Ties between candidates
/// break toward the lower feature index, then the lower threshold, then the
/// lower class labels, so the result is a total function of the inputs.
Stump train_stump(const LabeledDataset& dataset, std::span<const double> weights,
                  StumpCriterion criterion = StumpCriterion::WeightedAccuracy);

int predict_stump(const Stump& stump, const Eigen::VectorXd& x);

/// Column-wise convenience: predictions for every row of the dataset.
std::vector<int> predict_stump_all(const Stump& stump, const LabeledDataset& dataset);

}  // namespace bookmaker
