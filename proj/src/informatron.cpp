#include "bookmaker/informatron.hpp"

#include <fstream>
#include <sstream>

#include "bookmaker/textio.hpp"

namespace bookmaker {

namespace {

void check_feature(const InformatronState& s, int feature) {
  if (feature < 0 || feature >= s.d()) {
    throw ValueError("feature index " + std::to_string(feature) + " outside [0, " +
                     std::to_string(s.d()) + ")");
  }
}

void check_class(const InformatronState& s, int cls) {
  if (cls < 0 || cls >= s.k()) {
    throw ValueError("class index " + std::to_string(cls) + " outside [0, " +
                     std::to_string(s.k()) + ")");
  }
}

}  // namespace

InformatronState make_informatron(int d, int k, double epsilon) {
  if (d < 1) throw ValueError("informatron needs at least one feature");
  if (k < 2) throw ValueError("informatron needs at least two classes");
  if (epsilon < 0.0) throw ValueError("smoothing epsilon must be >= 0");
  InformatronState s;
  s.c = Eigen::MatrixXd::Zero(d, k);
  s.p = Eigen::VectorXd::Zero(k);
  s.f = Eigen::VectorXd::Zero(d);
  s.epsilon = epsilon;
  return s;
}

void informatron_observe(InformatronState& state, std::span<const int> active_features, int cls) {
  check_class(state, cls);
  for (int j : active_features) check_feature(state, j);
  state.n += 1.0;
  state.p(cls) += 1.0;
  for (int j : active_features) {
    state.f(j) += 1.0;
    state.c(j, cls) += 1.0;
  }
}

double informatron_score(const InformatronState& state, int feature, int cls,
                         Direction direction) {
  check_feature(state, feature);
  check_class(state, cls);
  const double eps = state.epsilon;
  const double c = state.c(feature, cls);
  const double marginal = direction == Direction::Backward ? state.p(cls) : state.f(feature);
  if (eps == 0.0) {
    if (marginal <= 0.0 || marginal >= state.n) {
      const char* axis = direction == Direction::Backward ? "class" : "feature";
      const int idx = direction == Direction::Backward ? cls : feature;
      throw UndefinedMetricError(
          "informatron_score", idx,
          std::string("association undefined in strict mode: ") + axis + " " +
              std::to_string(idx) + " marginal " + g17(marginal) + " of " + g17(state.n) +
              " events leaves a zero denominator");
    }
  }
  const double other = direction == Direction::Backward ? state.f(feature) : state.p(cls);
  // Smoothing adds eps to each cell of the implied 2x2 table, hence 2*eps on
  // each marginal denominator.
  return (c + eps) / (marginal + 2.0 * eps) -
         (other - c + eps) / (state.n - marginal + 2.0 * eps);
}

int informatron_predict(const InformatronState& state, std::span<const int> active_features) {
  if (active_features.empty()) return 0;
  int best = 0;
  double best_score = 0.0;
  for (int k = 0; k < state.k(); ++k) {
    double sum = 0.0;
    for (int j : active_features) sum += informatron_score(state, j, k, Direction::Backward);
    if (k == 0 || sum > best_score) {
      best = k;
      best_score = sum;
    }
  }
  return best;
}

void save_informatron(const InformatronState& state, std::ostream& out) {
  out << "informatron," << state.k() << ',' << state.d() << ',' << g17(state.epsilon) << ','
      << g17(state.n) << '\n';
  for (int j = 0; j < state.d(); ++j) {
    for (int c = 0; c < state.k(); ++c) {
      if (c) out << ',';
      out << g17(state.c(j, c));
    }
    out << '\n';
  }
  for (int c = 0; c < state.k(); ++c) out << (c ? "," : "") << g17(state.p(c));
  out << '\n';
  for (int j = 0; j < state.d(); ++j) out << (j ? "," : "") << g17(state.f(j));
  out << '\n';
}

void save_informatron(const InformatronState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  save_informatron(state, out);
  if (!out) throw IoError("failed writing " + path);
}

InformatronState load_informatron(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty informatron file");
  const auto header = split_fields(line);
  if (header.size() != 5 || header[0] != "informatron") {
    throw ParseError("informatron header must be informatron,k,d,epsilon,n", 1);
  }
  int k = 0, d = 0;
  InformatronState s;
  if (!parse_int(header[1], k) || !parse_int(header[2], d) || k < 2 || d < 1) {
    throw ParseError("bad informatron dimensions", 1);
  }
  if (!parse_double(header[3], s.epsilon) || !parse_double(header[4], s.n)) {
    throw ParseError("bad informatron parameters", 1);
  }
  const auto read_row = [&](Eigen::Ref<Eigen::VectorXd> row, int expected, int lineno) {
    if (!std::getline(in, line)) throw ParseError("informatron file truncated", lineno);
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != expected) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(expected),
                       lineno);
    }
    for (int i = 0; i < expected; ++i) {
      if (!parse_double(fields[i], row(i))) {
        throw ParseError("bad count '" + std::string(fields[i]) + "'", lineno, i + 1);
      }
    }
  };
  s.c.resize(d, k);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd row(k);
    read_row(row, k, j + 2);
    s.c.row(j) = row.transpose();
  }
  s.p.resize(k);
  read_row(s.p, k, d + 2);
  s.f.resize(d);
  read_row(s.f, d, d + 3);
  return s;
}

InformatronState load_informatron(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_informatron(in);
}

}  // namespace bookmaker
