#include "bookmaker/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "bookmaker/textio.hpp"

namespace bookmaker {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Uniform point in the unit d-ball.
Eigen::VectorXd ball_point(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int j = 0; j < d; ++j) v(j) = gauss(rng);
  const double norm = v.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(d);
  return v * (std::pow(unif(rng), 1.0 / d) / norm);
}

std::vector<std::string> numbered_names(int k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (int c = 0; c < k; ++c) names.push_back(std::to_string(c));
  return names;
}

LabeledDataset blobs(const SyntheticParams& p, std::mt19937_64& rng) {
  const int k = p.k;
  const int d = p.d > 0 ? p.d : std::max(2, k);
  if (k < 2) throw ValueError("separable_blobs needs k >= 2");
  if (d < k) throw ValueError("separable_blobs needs d >= k to place class centers");
  if (p.margin <= 0.0) throw ValueError("separable_blobs margin must be positive");
  // Centers at s * e_c with unit-ball spread: the hyperplane x_c = s/2
  // separates class c from the rest with at least the requested margin.
  const double radius = 1.0;
  const double s = 2.0 * (p.margin + radius);
  LabeledDataset ds;
  ds.x.resize(p.n, d);
  ds.y.resize(p.n);
  ds.class_names = numbered_names(k);
  std::uniform_int_distribution<int> cls(0, k - 1);
  for (int i = 0; i < p.n; ++i) {
    const int c = cls(rng);
    Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
    center(c) = s;
    ds.x.row(i) = (center + radius * ball_point(d, rng)).transpose();
    ds.y[i] = c;
  }
  return ds;
}

LabeledDataset disjunction(const SyntheticParams& p, std::mt19937_64& rng) {
  const int d = p.d > 0 ? p.d : 100;
  if (p.literals < 1 || p.literals > d) {
    throw ValueError("k_of_n_disjunction needs 1 <= literals <= d");
  }
  if (p.active_prob <= 0.0 || p.active_prob >= 1.0) {
    throw ValueError("k_of_n_disjunction active_prob must lie in (0,1)");
  }
  LabeledDataset ds;
  ds.x.resize(p.n, d);
  ds.y.resize(p.n);
  ds.class_names = {"0", "1"};
  std::bernoulli_distribution attr(p.active_prob);
  // The target is the OR of the first `literals` attributes.
  for (int i = 0; i < p.n; ++i) {
    bool label = false;
    for (int j = 0; j < d; ++j) {
      const bool on = attr(rng);
      ds.x(i, j) = on ? 1.0 : 0.0;
      if (on && j < p.literals) label = true;
    }
    ds.y[i] = label ? 1 : 0;
  }
  return ds;
}

LabeledDataset planted(const SyntheticParams& p, std::mt19937_64& rng) {
  const int k = p.k;
  const int d = p.d > 0 ? p.d : k;
  if (k < 2) throw ValueError("planted_association needs k >= 2");
  if (p.p_in <= 0.0 || p.p_in >= 1.0 || p.p_out <= 0.0 || p.p_out >= 1.0) {
    throw ValueError("planted_association probabilities must lie in (0,1)");
  }
  LabeledDataset ds;
  ds.x.resize(p.n, d);
  ds.y.resize(p.n);
  ds.class_names = numbered_names(k);
  std::uniform_int_distribution<int> cls(0, k - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // Feature j is planted on class j mod k: active with p_in for instances of
  // that class and p_out otherwise, so its population delta-P' against the
  // class is exactly p_in - p_out.
  for (int i = 0; i < p.n; ++i) {
    const int c = cls(rng);
    ds.y[i] = c;
    for (int j = 0; j < d; ++j) {
      const double rate = (j % k == c) ? p.p_in : p.p_out;
      ds.x(i, j) = unif(rng) < rate ? 1.0 : 0.0;
    }
  }
  return ds;
}

LabeledDataset independent(const SyntheticParams& p, std::mt19937_64& rng) {
  const int d = p.d > 0 ? p.d : 10;
  if (p.k < 2) throw ValueError("independence needs k >= 2");
  LabeledDataset ds;
  ds.x.resize(p.n, d);
  ds.y.resize(p.n);
  ds.class_names = numbered_names(p.k);
  std::uniform_int_distribution<int> cls(0, p.k - 1);
  std::bernoulli_distribution attr(0.5);
  for (int i = 0; i < p.n; ++i) {
    ds.y[i] = cls(rng);
    for (int j = 0; j < d; ++j) ds.x(i, j) = attr(rng) ? 1.0 : 0.0;
  }
  return ds;
}

}  // namespace

LabeledDataset load_csv(const std::string& path, const CsvOptions& options) {
  const std::vector<std::string> lines = read_lines(path);
  LabeledDataset ds;
  std::unordered_map<std::string, int> class_index;
  ds.class_names = options.class_order;
  for (std::size_t i = 0; i < ds.class_names.size(); ++i) {
    if (!class_index.emplace(ds.class_names[i], static_cast<int>(i)).second) {
      throw ValueError("duplicate class name in class_order: " + ds.class_names[i]);
    }
  }
  const bool fixed_classes = !options.class_order.empty();

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int field_count = -1;
  std::size_t lineno = 0;
  for (const std::string& line : lines) {
    ++lineno;
    if (options.has_header && lineno == 1) continue;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (field_count < 0) {
      field_count = static_cast<int>(fields.size());
      if (options.label_column < 0 || options.label_column >= field_count) {
        throw ValueError("label column " + std::to_string(options.label_column) +
                         " outside row with " + std::to_string(field_count) + " fields");
      }
      if (field_count < 2) {
        throw ParseError("rows need a label and at least one feature", static_cast<int>(lineno));
      }
    } else if (static_cast<int>(fields.size()) != field_count) {
      throw ParseError("row " + std::to_string(lineno) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(field_count),
                       static_cast<int>(lineno));
    }

    std::vector<double> row;
    row.reserve(field_count - 1);
    int label = -1;
    for (int f = 0; f < field_count; ++f) {
      if (f == options.label_column) {
        const std::string name(fields[f]);
        auto it = class_index.find(name);
        if (it == class_index.end()) {
          if (fixed_classes) {
            throw ParseError("unknown label '" + name + "' at row " + std::to_string(lineno),
                             static_cast<int>(lineno), f + 1);
          }
          it = class_index.emplace(name, static_cast<int>(ds.class_names.size())).first;
          ds.class_names.push_back(name);
        }
        label = it->second;
      } else {
        double v = 0.0;
        if (!parse_double(fields[f], v)) {
          throw ParseError("row " + std::to_string(lineno) + ", column " + std::to_string(f + 1) +
                               ": cannot parse '" + std::string(fields[f]) + "' as a real",
                           static_cast<int>(lineno), f + 1);
        }
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
    labels.push_back(label);
  }

  if (rows.empty()) throw ParseError("no data rows in " + path);
  ds.x.resize(static_cast<int>(rows.size()), field_count - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < field_count - 1; ++j) ds.x(static_cast<int>(i), j) = rows[i][j];
  }
  ds.y = std::move(labels);
  return ds;
}

void save_csv(const LabeledDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (int i = 0; i < dataset.n(); ++i) {
    out << dataset.class_names[dataset.y[i]];
    for (int j = 0; j < dataset.d(); ++j) out << ',' << g17(dataset.x(i, j));
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction, std::uint64_t seed,
                                                bool stratified) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValueError("train fraction must lie strictly inside (0,1), got " +
                     std::to_string(train_fraction));
  }
  const int n = dataset.n();
  const int n_train = static_cast<int>(std::llround(n * train_fraction));
  if (n_train <= 0 || n_train >= n) {
    throw ValueError("split leaves an empty side: n=" + std::to_string(n) +
                     ", fraction=" + std::to_string(train_fraction));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<char> in_train(n, 0);
  if (!stratified) {
    for (int i = 0; i < n_train; ++i) in_train[order[i]] = 1;
  } else {
    const int k = dataset.k();
    std::vector<int> class_count(k, 0);
    for (int label : dataset.y) ++class_count[label];
    for (int c = 0; c < k; ++c) {
      if (class_count[c] > 0 && class_count[c] < 2) {
        throw ValueError("stratified split needs >= 2 instances of class " +
                         dataset.class_names[c]);
      }
    }
    // Largest-remainder allocation: per-class quotas within one instance of
    // the exact proportion, summing to n_train exactly.
    std::vector<int> quota(k, 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int c = 0; c < k; ++c) {
      const double ideal = class_count[c] * train_fraction;
      quota[c] = static_cast<int>(std::floor(ideal));
      assigned += quota[c];
      remainders.push_back({ideal - quota[c], c});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (int i = 0; i < n_train - assigned && i < k; ++i) ++quota[remainders[i].second];

    std::vector<int> taken(k, 0);
    for (int idx : order) {
      const int c = dataset.y[idx];
      if (taken[c] < quota[c]) {
        in_train[idx] = 1;
        ++taken[c];
      }
    }
  }

  LabeledDataset train, test;
  train.class_names = dataset.class_names;
  test.class_names = dataset.class_names;
  int train_rows = 0;
  for (int i = 0; i < n; ++i) train_rows += in_train[i];
  train.x.resize(train_rows, dataset.d());
  test.x.resize(n - train_rows, dataset.d());
  int ti = 0, si = 0;
  for (int idx : order) {
    if (in_train[idx]) {
      train.x.row(ti) = dataset.x.row(idx);
      train.y.push_back(dataset.y[idx]);
      ++ti;
    } else {
      test.x.row(si) = dataset.x.row(idx);
      test.y.push_back(dataset.y[idx]);
      ++si;
    }
  }
  return {std::move(train), std::move(test)};
}

LabeledDataset gen_synthetic(SyntheticKind kind, const SyntheticParams& params,
                             std::uint64_t seed) {
  if (params.n < 1) throw ValueError("synthetic dataset needs n >= 1");
  std::mt19937_64 rng(seed);
  switch (kind) {
    case SyntheticKind::SeparableBlobs: return blobs(params, rng);
    case SyntheticKind::KOfNDisjunction: return disjunction(params, rng);
    case SyntheticKind::PlantedAssociation: return planted(params, rng);
    case SyntheticKind::Independence: return independent(params, rng);
  }
  throw ValueError("unknown synthetic kind");
}

LabeledDataset scale_minmax(const LabeledDataset& dataset) {
  LabeledDataset out = dataset;
  for (int j = 0; j < out.d(); ++j) {
    const double lo = out.x.col(j).minCoeff();
    const double hi = out.x.col(j).maxCoeff();
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw ValueError("scale_minmax: column " + std::to_string(j) + " has non-finite values");
    }
    if (hi == lo) {
      out.x.col(j).setZero();
    } else {
      out.x.col(j) = (out.x.col(j).array() - lo) / (hi - lo);
    }
  }
  return out;
}

}  // namespace bookmaker
