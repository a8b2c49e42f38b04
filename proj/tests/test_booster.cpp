#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "bookmaker/booster.hpp"
#include "bookmaker/contingency.hpp"
#include "bookmaker/metrics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bookmaker;

namespace {

LabeledDataset one_dimensional(const std::vector<double>& values, const std::vector<int>& labels,
                               int k) {
  LabeledDataset ds;
  for (int c = 0; c < k; ++c) ds.class_names.push_back(std::to_string(c));
  ds.x.resize(static_cast<int>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) ds.x(i, 0) = values[i];
  ds.y = labels;
  return ds;
}

// Two-class grid labeled by a diagonal rule: linearly separable but no single
// axis-aligned stump is perfect, so boosting has work to do. with_gap removes
// the points on the boundary diagonal, giving the classes a clear margin.
LabeledDataset diagonal_dataset(bool with_gap = false) {
  LabeledDataset ds;
  ds.class_names = {"0", "1"};
  std::vector<std::pair<double, double>> points;
  std::vector<int> labels;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      if (with_gap && a + b == 5) continue;
      points.push_back({static_cast<double>(a), static_cast<double>(b)});
      labels.push_back(a + b >= 6 ? 1 : 0);
    }
  }
  ds.x.resize(static_cast<int>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    ds.x(i, 0) = points[i].first;
    ds.x(i, 1) = points[i].second;
  }
  ds.y = labels;
  return ds;
}

// Five balanced classes on a line with heavy overlap: a two-leaf stump can
// cover at most two of them, so its weighted accuracy stays below one half.
LabeledDataset five_class_line(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.25);
  LabeledDataset ds;
  ds.class_names = {"0", "1", "2", "3", "4"};
  const int per_class = 80;
  ds.x.resize(5 * per_class, 1);
  ds.y.resize(5 * per_class);
  int i = 0;
  for (int c = 0; c < 5; ++c) {
    for (int r = 0; r < per_class; ++r, ++i) {
      ds.x(i, 0) = 2.0 * c + noise(rng);
      ds.y[i] = c;
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("alpha is the log odds of the round goodness") {
  // Best stump on this set has weighted accuracy exactly 3/4.
  const LabeledDataset ds = one_dimensional({0, 1, 2, 3}, {0, 1, 0, 1}, 2);
  BoostConfig config;
  config.measure = Measure::Accuracy;
  config.rounds = 1;
  const auto [ensemble, trace] = boost_train(ds, config);
  REQUIRE(trace.rounds.size() == 1);
  CHECK(trace.rounds[0].goodness == doctest::Approx(0.75));
  CHECK(trace.rounds[0].alpha == doctest::Approx(std::log(3.0)));
  REQUIRE(ensemble.members.size() == 1);
  CHECK(ensemble.members[0].second == doctest::Approx(std::log(3.0)));
}

TEST_CASE("goodness at chance stops the loop without adding the stump") {
  // A constant feature admits only the majority stump, and the classes are
  // balanced, so the best weighted accuracy is exactly 1/2.
  const LabeledDataset ds = one_dimensional({7, 7, 7, 7}, {0, 1, 0, 1}, 2);
  BoostConfig config;
  config.measure = Measure::Accuracy;
  config.rounds = 10;
  const auto [ensemble, trace] = boost_train(ds, config);
  REQUIRE(trace.rounds.size() == 1);
  CHECK(trace.rounds[0].goodness == doctest::Approx(0.5));
  CHECK_FALSE(trace.rounds[0].retained);
  CHECK(ensemble.members.empty());
  REQUIRE(ensemble.fallback.has_value());
  // The stalled run still predicts, at exactly the stump's level.
  CHECK(ensemble_predict(ensemble, ds.x.row(0).transpose()) ==
        predict_stump(*ensemble.fallback, ds.x.row(0).transpose()));
}

TEST_CASE("gini substitution drives the chance-corrected stopping test") {
  // Informedness 0.2 maps to g = 0.6 and alpha = ln(1.5).
  CHECK(gini(0.2) == doctest::Approx(0.6));
  CHECK(std::log(gini(0.2) / (1.0 - gini(0.2))) == doctest::Approx(std::log(1.5)));

  Eigen::MatrixXd cells(2, 2);
  cells << 0.35, 0.15,
           0.15, 0.35;
  const double inf = informedness(ContingencyTable(cells));
  CHECK(inf == doctest::Approx(0.4));
  CHECK(gini(inf) == doctest::Approx(0.7));
}

TEST_CASE("boosting drives training error to zero on a separable toy set") {
  const LabeledDataset ds = diagonal_dataset(/*with_gap=*/true);
  BoostConfig config;
  config.measure = Measure::Accuracy;
  config.rounds = 40;
  const auto [ensemble, trace] = boost_train(ds, config);
  CHECK(ensemble.members.size() > 1);
  // On this margin-separated set the ensemble training accuracy climbs
  // monotonically to 1.
  double previous = 0.0;
  for (const BoostRound& r : trace.rounds) {
    if (r.retained) {
      CHECK(r.train_accuracy >= previous - 1e-12);
      previous = r.train_accuracy;
    }
  }
  CHECK(previous == 1.0);
  CHECK(trace.rounds.back().train_accuracy > trace.rounds.front().train_accuracy);
}

TEST_CASE("booster invariants: weights, alphas, trace rows") {
  const LabeledDataset ds = five_class_line(3);
  BoostConfig config;
  config.measure = Measure::Informedness;
  config.rounds = 30;
  const auto [ensemble, trace] = boost_train(ds, config);
  CHECK(!ensemble.members.empty());
  for (const BoostRound& r : trace.rounds) {
    CHECK(r.alpha == doctest::Approx(std::log(r.goodness / (1.0 - r.goodness))).epsilon(1e-12));
    if (r.retained) {
      CHECK(r.goodness > 0.5);
      CHECK(r.goodness < 1.0);
    }
  }
  for (const auto& [stump, alpha] : ensemble.members) CHECK(alpha > 0.0);
}

TEST_CASE("accuracy measure stalls where informedness proceeds") {
  const LabeledDataset ds = five_class_line(5);

  BoostConfig accuracy_config;
  accuracy_config.measure = Measure::Accuracy;
  accuracy_config.rounds = 20;
  const auto [acc_ensemble, acc_trace] = boost_train(ds, accuracy_config);
  // Two-leaf stumps cannot reach half the weight on five balanced classes.
  CHECK(acc_trace.rounds.size() == 1);
  CHECK(acc_trace.rounds[0].goodness < 0.5);
  CHECK(acc_ensemble.members.empty());
  CHECK(acc_ensemble.fallback.has_value());

  BoostConfig inf_config;
  inf_config.measure = Measure::Informedness;
  inf_config.rounds = 20;
  const auto [inf_ensemble, inf_trace] = boost_train(ds, inf_config);
  CHECK(inf_trace.rounds.size() > 1);
  CHECK(!inf_ensemble.members.empty());
}

TEST_CASE("degenerate measures abort with round context or stop cleanly") {
  // Three classes but any stump predicts at most two, so markedness is
  // undefined on the round-1 table.
  const LabeledDataset ds =
      one_dimensional({0, 1, 2, 3, 4, 5}, {0, 0, 1, 1, 2, 2}, 3);
  BoostConfig config;
  config.measure = Measure::Markedness;
  config.rounds = 5;
  CHECK_THROWS_AS(boost_train(ds, config), UndefinedMetricError);

  config.stop_on_degenerate = true;
  const auto [ensemble, trace] = boost_train(ds, config);
  CHECK(trace.rounds.empty());
  CHECK(ensemble.members.empty());
  CHECK(ensemble.fallback.has_value());
  REQUIRE(trace.degenerate_stop.has_value());
  CHECK(trace.degenerate_stop->find("round 1") != std::string::npos);
  CHECK(trace.degenerate_stop->find("markedness") != std::string::npos);
}

TEST_CASE("ensemble_predict weighs the votes") {
  Ensemble e;
  e.k = 3;
  e.measure = Measure::Accuracy;
  const Stump to_one{0, 0.5, 1, 1};
  const Stump to_zero{0, 0.5, 0, 0};
  e.members = {{to_one, std::log(3.0)}, {to_zero, std::log(2.0)}};
  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK(ensemble_predict(e, x) == 1);  // ln 3 beats ln 2

  e.members = {{to_zero, 0.2}, {to_zero, 0.1}, {to_zero, 0.5}};
  CHECK(ensemble_predict(e, x) == 0);  // unanimous members win regardless of alphas

  e.members = {{to_one, 0.7}};
  CHECK(ensemble_predict(e, x) == predict_stump(to_one, x));

  Ensemble empty;
  empty.k = 2;
  CHECK_THROWS_AS(ensemble_predict(empty, x), ValueError);
}

TEST_CASE("single-member ensembles mirror their stump") {
  const LabeledDataset ds = one_dimensional({0, 1, 9, 10}, {0, 0, 1, 1}, 2);
  BoostConfig config;
  config.measure = Measure::Accuracy;
  config.rounds = 3;
  const auto [ensemble, trace] = boost_train(ds, config);
  // A perfect stump stops the loop immediately and stays as the fallback.
  REQUIRE(trace.rounds.size() == 1);
  CHECK(trace.rounds[0].goodness == doctest::Approx(1.0));
  for (int i = 0; i < ds.n(); ++i) {
    CHECK(ensemble_predict(ensemble, ds.x.row(i).transpose()) == ds.y[i]);
  }
}

TEST_CASE("resampling mode is deterministic and still boosts") {
  const LabeledDataset ds = diagonal_dataset();
  BoostConfig config;
  config.measure = Measure::Informedness;
  config.rounds = 15;
  config.resample = true;
  config.seed = 9;
  const auto [e1, t1] = boost_train(ds, config);
  const auto [e2, t2] = boost_train(ds, config);
  REQUIRE(t1.rounds.size() == t2.rounds.size());
  for (std::size_t i = 0; i < t1.rounds.size(); ++i) {
    CHECK(t1.rounds[i].goodness == t2.rounds[i].goodness);
    CHECK(t1.rounds[i].alpha == t2.rounds[i].alpha);
  }
  CHECK(t1.rounds.back().train_accuracy > 0.5);
}

TEST_CASE("emit_trace renders csv and json") {
  BoostTrace trace;
  trace.rounds.push_back({1, 0.75, std::log(3.0), 0.75, 0.8, 0.7, true});
  trace.rounds.push_back({2, 0.6, std::log(1.5), 0.62, 0.85, std::nullopt, true});
  const std::string csv = emit_trace(trace, TraceFormat::Csv);
  CHECK(csv.find("round,g,alpha,weighted_acc,train_acc,test_acc\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("0.75") != std::string::npos);

  const std::string json = emit_trace(trace, TraceFormat::Json);
  CHECK(json.find("\"round\": 1") != std::string::npos);
  CHECK(json.find("\"test_acc\": null") != std::string::npos);
  // Values survive a parse back through strtod at full precision.
  const std::string key = "\"alpha\": ";
  const std::size_t pos = json.find(key);
  REQUIRE(pos != std::string::npos);
  CHECK(std::strtod(json.c_str() + pos + key.size(), nullptr) == std::log(3.0));
}

TEST_CASE("ensemble serialization round-trips") {
  const LabeledDataset ds = diagonal_dataset();
  BoostConfig config;
  config.measure = Measure::Kappa;
  config.rounds = 8;
  const auto [ensemble, trace] = boost_train(ds, config);
  const std::string path = "bk_test_ensemble.txt";
  save_ensemble(ensemble, path);
  const Ensemble back = load_ensemble(path);
  CHECK(back.measure == ensemble.measure);
  CHECK(back.k == ensemble.k);
  REQUIRE(back.members.size() == ensemble.members.size());
  for (std::size_t i = 0; i < back.members.size(); ++i) {
    CHECK(back.members[i].first.feature == ensemble.members[i].first.feature);
    CHECK(back.members[i].first.threshold == ensemble.members[i].first.threshold);
    CHECK(back.members[i].second == ensemble.members[i].second);
  }
  std::remove(path.c_str());
}

TEST_CASE("stalled ensembles serialize their fallback stump") {
  const LabeledDataset ds = one_dimensional({7, 7, 7, 7}, {0, 1, 0, 1}, 2);
  BoostConfig config;
  config.measure = Measure::Accuracy;
  config.rounds = 5;
  const auto [ensemble, trace] = boost_train(ds, config);
  REQUIRE(ensemble.members.empty());
  REQUIRE(ensemble.fallback.has_value());
  const std::string path = "bk_test_stalled_ensemble.txt";
  save_ensemble(ensemble, path);
  const Ensemble back = load_ensemble(path);
  CHECK(back.members.empty());
  REQUIRE(back.fallback.has_value());
  CHECK(back.fallback->feature == ensemble.fallback->feature);
  CHECK(back.fallback->threshold == ensemble.fallback->threshold);
  CHECK(back.fallback->above_class == ensemble.fallback->above_class);
  Eigen::VectorXd x(1);
  x << 7.0;
  CHECK(ensemble_predict(back, x) == ensemble_predict(ensemble, x));
  std::remove(path.c_str());
}

TEST_CASE("weight bookkeeping stays normalized") {
  // Indirect check through the trace: recompute the weight evolution and the
  // recorded weighted accuracies must match the replay.
  const LabeledDataset ds = diagonal_dataset();
  BoostConfig config;
  config.measure = Measure::Informedness;
  config.rounds = 12;
  const auto [ensemble, trace] = boost_train(ds, config);
  REQUIRE(!ensemble.members.empty());
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(ds.n(), 1.0 / ds.n());
  for (std::size_t t = 0; t < ensemble.members.size(); ++t) {
    const auto& [stump, alpha] = ensemble.members[t];
    const std::vector<int> preds = predict_stump_all(stump, ds);
    double weighted_acc = 0.0;
    for (int i = 0; i < ds.n(); ++i) weighted_acc += weights(i) * (preds[i] == ds.y[i]);
    CHECK(weighted_acc == doctest::Approx(trace.rounds[t].weighted_accuracy).epsilon(1e-12));
    const double odds = trace.rounds[t].goodness / (1.0 - trace.rounds[t].goodness);
    for (int i = 0; i < ds.n(); ++i) {
      if (preds[i] != ds.y[i]) weights(i) *= odds;
    }
    weights /= weights.sum();
    CHECK(weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((weights.array() >= 0.0).all());
  }
}
