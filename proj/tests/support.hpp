#pragma once

// Shared generators for the test suites: seeded random tables with
// non-degenerate marginals, random dichotomous counts, and a letter-shaped
// synthetic surrogate used when the real UCI file is not on disk.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bookmaker/contingency.hpp"
#include "bookmaker/dataset.hpp"

namespace testsupport {

// Cells bounded away from zero keep every prevalence and bias inside (0,1).
inline bookmaker::ContingencyTable random_table(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cell(0.01, 1.0);
  Eigen::MatrixXd m(k, k);
  for (int p = 0; p < k; ++p) {
    for (int r = 0; r < k; ++r) m(p, r) = cell(rng);
  }
  return bookmaker::ContingencyTable(m);
}

inline bookmaker::DichotomousCounts random_dichotomous(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cell(0.01, 1.0);
  bookmaker::DichotomousCounts d;
  d.tp = cell(rng);
  d.fp = cell(rng);
  d.fn = cell(rng);
  d.tn = cell(rng);
  return d;
}

// Outer-product table: cell(p, r) = row_mass(p) * col_mass(r). Prediction is
// independent of reality by construction, so every chance-corrected measure
// is zero.
inline bookmaker::ContingencyTable independence_table(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  Eigen::VectorXd rows(k), cols(k);
  for (int i = 0; i < k; ++i) {
    rows(i) = mass(rng);
    cols(i) = mass(rng);
  }
  rows /= rows.sum();
  cols /= cols.sum();
  return bookmaker::ContingencyTable(rows * cols.transpose());
}

// 26 balanced classes, 16 integer features in [0, 15]: the shape of the UCI
// letter-recognition data. Per-class feature means are drawn once and the
// per-instance values are noisy discretizations, so single-feature stumps
// stay weak while the classes remain collectively separable.
inline bookmaker::LabeledDataset letter_surrogate(std::uint64_t seed, int n = 20000) {
  std::mt19937_64 rng(seed);
  const int k = 26;
  const int d = 16;
  bookmaker::LabeledDataset ds;
  ds.class_names.reserve(k);
  for (int c = 0; c < k; ++c) ds.class_names.push_back(std::string(1, char('A' + c)));
  Eigen::MatrixXd means(k, d);
  std::uniform_real_distribution<double> mean_range(2.0, 13.0);
  for (int c = 0; c < k; ++c) {
    for (int j = 0; j < d; ++j) means(c, j) = mean_range(rng);
  }
  ds.x.resize(n, d);
  ds.y.resize(n);
  std::uniform_int_distribution<int> cls(0, k - 1);
  std::normal_distribution<double> noise(0.0, 2.5);
  for (int i = 0; i < n; ++i) {
    const int c = cls(rng);
    ds.y[i] = c;
    for (int j = 0; j < d; ++j) {
      const double v = std::round(means(c, j) + noise(rng));
      ds.x(i, j) = std::min(15.0, std::max(0.0, v));
    }
  }
  return ds;
}

}  // namespace testsupport
