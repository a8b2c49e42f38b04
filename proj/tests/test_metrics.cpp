#include <cmath>
#include <random>

#include "bookmaker/metrics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bookmaker;

namespace {

// Independent determinant-form oracle for the dichotomous correlation.
double determinant_correlation(const DichotomousCounts& d) {
  const double total = d.total();
  const double tp = d.tp / total, fp = d.fp / total, fn = d.fn / total, tn = d.tn / total;
  const double pp = tp + fp, pn = fn + tn, rp = tp + fn, rn = fp + tn;
  return (tp * tn - fp * fn) / std::sqrt(pp * pn * rp * rn);
}

ContingencyTable to_table(const DichotomousCounts& d) {
  Eigen::MatrixXd m(2, 2);
  m << d.tp, d.fp, d.fn, d.tn;
  return ContingencyTable(m);
}

}  // namespace

TEST_CASE("delta_p_prime is sensitivity plus specificity minus one") {
  CHECK(delta_p_prime({0.9, 0.1, 0.0, 0.0}) == 0.0);  // guessing the frequent class
  CHECK(delta_p_prime({0.5, 0.0, 0.0, 0.5}) == 1.0);
  CHECK(delta_p_prime({0.4, 0.1, 0.1, 0.4}) == doctest::Approx(0.6));
  CHECK_THROWS_AS(delta_p_prime({1.0, 0.0, 0.0, 0.0}), UndefinedMetricError);  // prevalence 1
  CHECK_THROWS_AS(delta_p_prime({0.0, 0.5, 0.0, 0.5}), UndefinedMetricError);  // prevalence 0
}

TEST_CASE("delta_p is precision plus inverse precision minus one") {
  CHECK(delta_p({0.5, 0.0, 0.0, 0.5}) == 1.0);
  CHECK(delta_p({0.4, 0.1, 0.1, 0.4}) == doctest::Approx(0.6));
  CHECK(delta_p({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(delta_p({0.0, 0.0, 0.5, 0.5}), UndefinedMetricError);  // no positive predictions
  CHECK_THROWS_AS(delta_p({0.5, 0.5, 0.0, 0.0}), UndefinedMetricError);  // no negative predictions
}

TEST_CASE("kappa-form identities hold on random dichotomous tables") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const DichotomousCounts d = testsupport::random_dichotomous(rng);
    const RateSet r = rates(d);
    CHECK(delta_p_prime(d) ==
          doctest::Approx((*r.tpr - r.pp) / (1.0 - r.rp)).epsilon(1e-12));
    CHECK(delta_p(d) == doctest::Approx((*r.prec - r.rp) / (1.0 - r.pp)).epsilon(1e-12));
  }
}

TEST_CASE("informedness of diagonal, uniform, and random tables") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(4, 4);
  diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
  CHECK(informedness(ContingencyTable(diag)) == doctest::Approx(1.0));

  const ContingencyTable uniform(Eigen::MatrixXd::Constant(4, 4, 1.0 / 16.0));
  CHECK(informedness(uniform) == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const ContingencyTable t = testsupport::random_table(3, rng);
    CHECK(informedness(t) == doctest::Approx(informedness_bookmaker(t)).epsilon(1e-10));
  }
}

TEST_CASE("informedness errors name the degenerate class") {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0, 0,
       0, 2, 0,
       1, 1, 0;  // class 2 is never the real label
  try {
    informedness(ContingencyTable(m));
    FAIL("expected UndefinedMetricError");
  } catch (const UndefinedMetricError& e) {
    CHECK(e.class_index() == 2);
    CHECK(e.measure() == "informedness");
  }
}

TEST_CASE("markedness mirrors informedness through transposition") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
  diag.diagonal() << 0.3, 0.3, 0.4;
  CHECK(markedness(ContingencyTable(diag)) == doctest::Approx(1.0));
  CHECK(markedness(ContingencyTable(Eigen::MatrixXd::Constant(3, 3, 1.0))) ==
        doctest::Approx(0.0));

  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const ContingencyTable t = testsupport::random_table(4, rng);
    CHECK(informedness(t.transposed()) == markedness(t));  // exact by construction
  }
}

TEST_CASE("gain matrix follows the bookmaker odds") {
  SUBCASE("four equiprobable horses") {
    const GainMatrix gm = gain_matrix(Eigen::VectorXd::Constant(4, 0.25));
    for (int p = 0; p < 4; ++p) {
      for (int r = 0; r < 4; ++r) {
        if (p == r) {
          CHECK(gm.g(p, r) == 4.0);
        } else {
          CHECK(gm.g(p, r) == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
        }
      }
    }
  }
  SUBCASE("two balanced classes") {
    const GainMatrix gm = gain_matrix(Eigen::VectorXd::Constant(2, 0.5));
    CHECK(gm.g(0, 0) == 2.0);
    CHECK(gm.g(0, 1) == -2.0);
  }
  SUBCASE("skewed classes") {
    Eigen::VectorXd prev(2);
    prev << 0.9, 0.1;
    const GainMatrix gm = gain_matrix(prev);
    CHECK(gm.g(0, 0) == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
    CHECK(gm.g(0, 1) == doctest::Approx(-10.0).epsilon(1e-15));
    CHECK(gm.g(1, 1) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(gm.g(1, 0) == doctest::Approx(-10.0 / 9.0).epsilon(1e-15));
  }
  SUBCASE("degenerate prevalences are rejected") {
    Eigen::VectorXd prev(2);
    prev << 1.0, 0.0;
    CHECK_THROWS_AS(gain_matrix(prev), UndefinedMetricError);
    Eigen::VectorXd bad_sum(2);
    bad_sum << 0.4, 0.4;
    CHECK_THROWS_AS(gain_matrix(bad_sum), ValueError);
  }
}

TEST_CASE("bookmaker route matches the bias-weighted route") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag.diagonal() << 0.7, 0.3;
  CHECK(informedness_bookmaker(ContingencyTable(diag)) == doctest::Approx(1.0));
  CHECK(informedness_bookmaker(ContingencyTable(Eigen::MatrixXd::Constant(4, 4, 1.0 / 16.0))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> kdist(2, 6);
  for (int i = 0; i < 300; ++i) {
    const ContingencyTable t = testsupport::random_table(kdist(rng), rng);
    CHECK(std::abs(informedness(t) - informedness_bookmaker(t)) <= 1e-10);
  }
}

TEST_CASE("kappa against direct computation") {
  CHECK(kappa_cohen(to_table({0.4, 0.1, 0.1, 0.4})) == doctest::Approx(0.6));
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
  diag.diagonal() << 0.2, 0.3, 0.5;
  CHECK(kappa_cohen(ContingencyTable(diag)) == doctest::Approx(1.0));
  CHECK(kappa_cohen(ContingencyTable(Eigen::MatrixXd::Constant(3, 3, 1.0))) ==
        doctest::Approx(0.0));
  Eigen::MatrixXd single = Eigen::MatrixXd::Zero(2, 2);
  single(0, 0) = 1.0;
  CHECK_THROWS_AS(kappa_cohen(ContingencyTable(single)), UndefinedMetricError);
}

TEST_CASE("correlation is the signed geometric mean and matches the determinant") {
  CHECK(matthews_correlation(to_table({0.4, 0.1, 0.1, 0.4})) == doctest::Approx(0.6));
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag.diagonal() << 0.5, 0.5;
  CHECK(matthews_correlation(ContingencyTable(diag)) == doctest::Approx(1.0));
  CHECK(matthews_correlation(ContingencyTable(Eigen::MatrixXd::Constant(2, 2, 0.25))) ==
        doctest::Approx(0.0));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const DichotomousCounts d = testsupport::random_dichotomous(rng);
    CHECK(matthews_correlation(to_table(d)) ==
          doctest::Approx(determinant_correlation(d)).epsilon(1e-10));
  }
}

TEST_CASE("mixed-sign informedness and markedness refuse a geometric mean") {
  // Found by seeded search; verified informedness > 0 > markedness.
  std::mt19937_64 rng(23);
  bool found = false;
  for (int i = 0; i < 20000 && !found; ++i) {
    const ContingencyTable t = testsupport::random_table(3, rng);
    const double inf = informedness(t);
    const double mark = markedness(t);
    if (inf * mark < 0.0) {
      found = true;
      CHECK_THROWS_AS(matthews_correlation(t), UndefinedMetricError);
    }
  }
  CHECK(found);
}

TEST_CASE("chance nullity on independence tables") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> kdist(2, 5);
  for (int i = 0; i < 100; ++i) {
    const ContingencyTable t = testsupport::independence_table(kdist(rng), rng);
    CHECK(std::abs(informedness(t)) <= 1e-10);
    CHECK(std::abs(markedness(t)) <= 1e-10);
    CHECK(std::abs(kappa_cohen(t)) <= 1e-10);
  }
}

TEST_CASE("epsilon smoothing turns degenerate tables into numbers") {
  Eigen::MatrixXd m(2, 2);
  m << 0.9, 0.1, 0.0, 0.0;  // never predicts the negative class
  const ContingencyTable t(m);
  CHECK_THROWS_AS(markedness(t), UndefinedMetricError);
  const ContingencyTable s = t.smoothed(1e-9);
  CHECK(std::isfinite(markedness(s)));
  CHECK(std::isfinite(matthews_correlation(s)));
}

TEST_CASE("gini maps the chance level to one half") {
  CHECK(gini(0.0) == 0.5);
  CHECK(gini(1.0) == 1.0);
  CHECK(gini(-1.0) == 0.0);
  CHECK_THROWS_AS(gini(1.5), ValueError);
  CHECK_THROWS_AS(gini(-1.5), ValueError);
}

TEST_CASE("harmonic numbers approach ln p plus gamma") {
  CHECK(harmonic_information(1).harmonic == 1.0);
  CHECK(harmonic_information(10).harmonic == doctest::Approx(2.9289682539682538).epsilon(1e-14));
  const HarmonicInfo h = harmonic_information(10000);
  CHECK(std::abs(h.harmonic - h.approx) <= 1.01 / (2.0 * 10000.0));
  CHECK_THROWS_AS(harmonic_information(0), ValueError);
}

TEST_CASE("metric_report aggregates and flags") {
  const ContingencyTable good = to_table({0.4, 0.1, 0.1, 0.4});
  const MetricReport r = metric_report(good);
  CHECK(r.accuracy == doctest::Approx(0.8));
  CHECK(*r.informedness == doctest::Approx(0.6));
  CHECK(*r.markedness == doctest::Approx(0.6));
  CHECK(*r.kappa == doctest::Approx(0.6));
  CHECK(*r.correlation == doctest::Approx(0.6));
  CHECK(r.notes.empty());
  REQUIRE(r.per_class.size() == 2);
  // Aggregates reproduce their weighted per-class definitions.
  double inf_sum = 0.0, mark_sum = 0.0;
  for (const PerClassMetrics& pc : r.per_class) {
    inf_sum += pc.bias * *pc.delta_p_prime;
    mark_sum += pc.prevalence * *pc.delta_p;
  }
  CHECK(inf_sum == doctest::Approx(*r.informedness).epsilon(1e-10));
  CHECK(mark_sum == doctest::Approx(*r.markedness).epsilon(1e-10));

  Eigen::MatrixXd constant(2, 2);
  constant << 0.9, 0.1, 0.0, 0.0;
  const MetricReport partial = metric_report(ContingencyTable(constant));
  CHECK(partial.informedness.has_value());
  CHECK(*partial.informedness == doctest::Approx(0.0));
  CHECK_FALSE(partial.markedness.has_value());
  CHECK_FALSE(partial.correlation.has_value());
  CHECK(!partial.notes.empty());
}
