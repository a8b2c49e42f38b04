#include "bookmaker/stump.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "bookmaker/contingency.hpp"
#include "bookmaker/metrics.hpp"

namespace bookmaker {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Weighted-majority class with ties to the lowest index.
int majority(const Eigen::VectorXd& class_weights) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(class_weights.size()); ++c) {
    if (class_weights(c) > class_weights(best)) best = c;
  }
  return best;
}

struct Candidate {
  double score = -kInf;
  Stump stump;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.stump.feature != b.stump.feature) return a.stump.feature < b.stump.feature;
  if (a.stump.threshold != b.stump.threshold) return a.stump.threshold < b.stump.threshold;
  if (a.stump.below_class != b.stump.below_class) return a.stump.below_class < b.stump.below_class;
  return a.stump.above_class < b.stump.above_class;
}

// The split induces a two-row contingency table: the below side votes as one
// class, the above side as the other. Undefined informedness (a class with
// no weight) ranks below every defined value.
double informedness_score(const Eigen::VectorXd& below, const Eigen::VectorXd& above,
                          int below_class, int above_class) {
  const int k = static_cast<int>(below.size());
  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(k, k);
  cells.row(below_class) += below.transpose();
  cells.row(above_class) += above.transpose();
  try {
    return informedness(ContingencyTable(std::move(cells)));
  } catch (const UndefinedMetricError&) {
    return -2.0;
  }
}

}  // namespace

Stump train_stump(const LabeledDataset& dataset, std::span<const double> weights,
                  StumpCriterion criterion) {
  const int n = dataset.n();
  const int k = dataset.k();
  if (n == 0) throw ValueError("cannot fit a stump to an empty dataset");
  if (static_cast<int>(weights.size()) != n) {
    throw DimensionError("weights length " + std::to_string(weights.size()) +
                         " does not match dataset size " + std::to_string(n));
  }
  double total_weight = 0.0;
  Eigen::VectorXd class_weight = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw ValueError("instance weights must be non-negative");
    total_weight += weights[i];
    class_weight(dataset.y[i]) += weights[i];
  }
  if (!(total_weight > 0.0)) throw ValueError("all instance weights are zero");

  Candidate best;
  std::vector<int> order(n);
  for (int f = 0; f < dataset.d(); ++f) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return dataset.x(a, f) < dataset.x(b, f);
    });

    // Runs of equal feature values with their class-weight mass.
    std::vector<double> run_value;
    std::vector<Eigen::VectorXd> run_weight;
    for (int i = 0; i < n; ++i) {
      const double v = dataset.x(order[i], f);
      if (run_value.empty() || v != run_value.back()) {
        run_value.push_back(v);
        run_weight.push_back(Eigen::VectorXd::Zero(k));
      }
      run_weight.back()(dataset.y[order[i]]) += weights[order[i]];
    }
    const int runs = static_cast<int>(run_value.size());

    Eigen::VectorXd below = Eigen::VectorXd::Zero(k);
    for (int cut = 0; cut <= runs; ++cut) {
      if (cut > 0) below += run_weight[cut - 1];
      double threshold;
      if (cut == 0) {
        threshold = -kInf;
      } else if (cut == runs) {
        threshold = kInf;
      } else {
        threshold = (run_value[cut - 1] + run_value[cut]) / 2.0;
      }
      const Eigen::VectorXd above = class_weight - below;
      Candidate cand;
      cand.stump = {f, threshold, majority(below), majority(above)};
      if (criterion == StumpCriterion::WeightedAccuracy) {
        cand.score = (below(cand.stump.below_class) + above(cand.stump.above_class)) /
                     total_weight;
      } else {
        cand.score = informedness_score(below, above, cand.stump.below_class,
                                        cand.stump.above_class);
      }
      if (better(cand, best)) best = cand;
    }
  }
  return best.stump;
}

int predict_stump(const Stump& stump, const Eigen::VectorXd& x) {
  if (stump.feature < 0 || stump.feature >= static_cast<int>(x.size())) {
    throw DimensionError("stump feature " + std::to_string(stump.feature) +
                         " outside input with " + std::to_string(x.size()) + " features");
  }
  return x(stump.feature) <= stump.threshold ? stump.below_class : stump.above_class;
}

std::vector<int> predict_stump_all(const Stump& stump, const LabeledDataset& dataset) {
  if (stump.feature < 0 || stump.feature >= dataset.d()) {
    throw DimensionError("stump feature outside dataset dimensionality");
  }
  std::vector<int> preds(dataset.n());
  for (int i = 0; i < dataset.n(); ++i) {
    preds[i] =
        dataset.x(i, stump.feature) <= stump.threshold ? stump.below_class : stump.above_class;
  }
  return preds;
}

}  // namespace bookmaker
