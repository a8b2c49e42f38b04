#include "bookmaker/booster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "bookmaker/contingency.hpp"
#include "bookmaker/metrics.hpp"
#include "bookmaker/textio.hpp"

namespace bookmaker {

namespace {

// Vote tallies for an evaluation set, updated incrementally per round.
class VoteBoard {
 public:
  VoteBoard(const LabeledDataset& data, int k) : data_(&data) {
    votes_ = Eigen::MatrixXd::Zero(data.n(), k);
  }

  void add(const Stump& stump, double alpha) {
    for (int i = 0; i < data_->n(); ++i) {
      const int c = data_->x(i, stump.feature) <= stump.threshold ? stump.below_class
                                                                  : stump.above_class;
      votes_(i, c) += alpha;
    }
  }

  double accuracy() const {
    int correct = 0;
    for (int i = 0; i < data_->n(); ++i) {
      int best = 0;
      for (int c = 1; c < votes_.cols(); ++c) {
        if (votes_(i, c) > votes_(i, best)) best = c;
      }
      correct += best == data_->y[i];
    }
    return static_cast<double>(correct) / data_->n();
  }

 private:
  const LabeledDataset* data_;
  Eigen::MatrixXd votes_;
};

double plain_accuracy(const std::vector<int>& preds, const std::vector<int>& gold) {
  int correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i] == gold[i];
  return static_cast<double>(correct) / preds.size();
}

double measure_value(Measure measure, const ContingencyTable& table) {
  switch (measure) {
    case Measure::Kappa: return kappa_cohen(table);
    case Measure::Informedness: return informedness(table);
    case Measure::Markedness: return markedness(table);
    case Measure::Correlation: return matthews_correlation(table);
    case Measure::Accuracy: break;
  }
  throw ValueError("accuracy has no chance-corrected table value");
}

LabeledDataset resample_by_weight(const LabeledDataset& data, const Eigen::VectorXd& weights,
                                  std::mt19937_64& rng) {
  const int n = data.n();
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += weights(i);
    cumulative[i] = acc;
  }
  std::uniform_real_distribution<double> unif(0.0, acc);
  LabeledDataset out;
  out.class_names = data.class_names;
  out.x.resize(n, data.d());
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = unif(rng);
    const int idx = static_cast<int>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    const int src = std::min(idx, n - 1);
    out.x.row(i) = data.x.row(src);
    out.y[i] = data.y[src];
  }
  return out;
}

}  // namespace

std::string measure_name(Measure m) {
  switch (m) {
    case Measure::Accuracy: return "accuracy";
    case Measure::Kappa: return "kappa";
    case Measure::Informedness: return "informedness";
    case Measure::Markedness: return "markedness";
    case Measure::Correlation: return "correlation";
  }
  throw ValueError("unknown measure");
}

Measure measure_from_name(const std::string& name) {
  if (name == "accuracy") return Measure::Accuracy;
  if (name == "kappa") return Measure::Kappa;
  if (name == "informedness") return Measure::Informedness;
  if (name == "markedness") return Measure::Markedness;
  if (name == "correlation") return Measure::Correlation;
  throw ValueError("unknown measure name '" + name + "'");
}

std::pair<Ensemble, BoostTrace> boost_train(const LabeledDataset& train,
                                            const BoostConfig& config,
                                            const LabeledDataset* test) {
  const int n = train.n();
  const int k = train.k();
  if (n == 0) throw ValueError("cannot boost on an empty training set");
  if (config.rounds < 1) throw ValueError("rounds must be >= 1");
  if (!(config.delta > 0.0)) throw ValueError("stop tolerance delta must be positive");
  {
    std::vector<char> seen(k, 0);
    int distinct = 0;
    for (int label : train.y) {
      if (!seen[label]) {
        seen[label] = 1;
        ++distinct;
      }
    }
    if (distinct < 2) throw ValueError("boosting needs at least two classes present");
  }

  Ensemble ensemble;
  ensemble.measure = config.measure;
  ensemble.k = k;
  BoostTrace trace;

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  std::mt19937_64 rng(config.seed);
  VoteBoard train_votes(train, k);
  std::optional<VoteBoard> test_votes;
  if (test) test_votes.emplace(*test, k);

  std::vector<double> unit_weights(n, 1.0);
  for (int round = 1; round <= config.rounds; ++round) {
    Stump stump;
    if (config.resample) {
      const LabeledDataset sample = resample_by_weight(train, weights, rng);
      stump = train_stump(sample, unit_weights);
    } else {
      stump = train_stump(train, std::span<const double>(weights.data(), n));
    }

    const std::vector<int> preds = predict_stump_all(stump, train);
    double weighted_acc = 0.0;
    for (int i = 0; i < n; ++i) weighted_acc += weights(i) * (preds[i] == train.y[i]);

    double g = weighted_acc;
    if (config.measure != Measure::Accuracy) {
      try {
        const ContingencyTable table = table_from_weighted(
            train.y, preds, std::span<const double>(weights.data(), n), k);
        // Summation can overshoot the closed interval by a few ulps.
        g = gini(std::clamp(measure_value(config.measure, table), -1.0, 1.0));
      } catch (const UndefinedMetricError& e) {
        const std::string context = "round " + std::to_string(round) + ": " + e.what();
        if (config.stop_on_degenerate) {
          if (round == 1) ensemble.fallback = stump;
          trace.degenerate_stop = context;
          break;
        }
        throw UndefinedMetricError(e.measure(), e.class_index(), context);
      }
    }

    const double alpha = std::log(g / (1.0 - g));
    const bool stopped = g <= 0.5 + config.delta || g >= 1.0 - config.delta;

    BoostRound row;
    row.round = round;
    row.goodness = g;
    row.alpha = alpha;
    row.weighted_accuracy = weighted_acc;
    row.retained = !stopped;

    if (!stopped) {
      ensemble.members.emplace_back(stump, alpha);
      train_votes.add(stump, alpha);
      if (test_votes) test_votes->add(stump, alpha);
      row.train_accuracy = train_votes.accuracy();
      if (test) row.test_accuracy = test_votes->accuracy();
    } else if (round == 1) {
      // The procedure never got past the weak learner: keep the lone stump as
      // the model so the stalled run still predicts (at stump level).
      ensemble.fallback = stump;
      row.train_accuracy = plain_accuracy(preds, train.y);
      if (test) row.test_accuracy = plain_accuracy(predict_stump_all(stump, *test), test->y);
    } else {
      // Stopped later: the ensemble is unchanged by this round.
      row.train_accuracy = trace.rounds.back().train_accuracy;
      row.test_accuracy = trace.rounds.back().test_accuracy;
    }
    trace.rounds.push_back(row);
    if (stopped) break;

    const double odds = g / (1.0 - g);
    for (int i = 0; i < n; ++i) {
      if (preds[i] != train.y[i]) weights(i) *= odds;
    }
    weights /= weights.sum();
  }
  return {std::move(ensemble), std::move(trace)};
}

int ensemble_predict(const Ensemble& ensemble, const Eigen::VectorXd& x) {
  if (ensemble.members.empty()) {
    if (ensemble.fallback) return predict_stump(*ensemble.fallback, x);
    throw ValueError("cannot predict with an empty ensemble");
  }
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(ensemble.k);
  for (const auto& [stump, alpha] : ensemble.members) {
    votes(predict_stump(stump, x)) += alpha;
  }
  int best = 0;
  for (int c = 1; c < ensemble.k; ++c) {
    if (votes(c) > votes(best)) best = c;
  }
  return best;
}

std::vector<int> ensemble_predict_all(const Ensemble& ensemble, const LabeledDataset& dataset) {
  std::vector<int> preds(dataset.n());
  for (int i = 0; i < dataset.n(); ++i) {
    preds[i] = ensemble_predict(ensemble, dataset.x.row(i).transpose());
  }
  return preds;
}

std::string emit_trace(const BoostTrace& trace, TraceFormat format) {
  std::ostringstream out;
  if (format == TraceFormat::Csv) {
    out << "round,g,alpha,weighted_acc,train_acc,test_acc\n";
    for (const BoostRound& r : trace.rounds) {
      out << r.round << ',' << g17(r.goodness) << ',' << g17(r.alpha) << ','
          << g17(r.weighted_accuracy) << ',' << g17(r.train_accuracy) << ',';
      if (r.test_accuracy) out << g17(*r.test_accuracy);
      out << '\n';
    }
  } else {
    out << "[\n";
    for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
      const BoostRound& r = trace.rounds[i];
      out << "  {\"round\": " << r.round << ", \"g\": " << g17(r.goodness)
          << ", \"alpha\": " << g17(r.alpha) << ", \"weighted_acc\": " << g17(r.weighted_accuracy)
          << ", \"train_acc\": " << g17(r.train_accuracy) << ", \"test_acc\": "
          << (r.test_accuracy ? g17(*r.test_accuracy) : "null") << "}"
          << (i + 1 < trace.rounds.size() ? "," : "") << '\n';
    }
    out << "]\n";
  }
  return out.str();
}

void save_ensemble(const Ensemble& ensemble, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << measure_name(ensemble.measure) << ',' << ensemble.k << ',' << ensemble.members.size()
      << '\n';
  for (const auto& [stump, alpha] : ensemble.members) {
    out << stump.feature << ',' << g17(stump.threshold) << ',' << stump.below_class << ','
        << stump.above_class << ',' << g17(alpha) << '\n';
  }
  if (ensemble.members.empty() && ensemble.fallback) {
    const Stump& s = *ensemble.fallback;
    out << s.feature << ',' << g17(s.threshold) << ',' << s.below_class << ',' << s.above_class
        << ",0\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

Ensemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty ensemble file");
  const auto header = split_fields(line);
  if (header.size() != 3) throw ParseError("ensemble header must be measure,k,rounds", 1);
  Ensemble e;
  e.measure = measure_from_name(std::string(header[0]));
  int rounds = 0;
  if (!parse_int(header[1], e.k) || !parse_int(header[2], rounds) || e.k < 2 || rounds < 0) {
    throw ParseError("bad ensemble dimensions", 1);
  }
  const auto parse_member = [&](const std::string& text, int lineno) {
    const auto fields = split_fields(text);
    if (fields.size() != 5) {
      throw ParseError("member line needs 5 fields, got " + std::to_string(fields.size()),
                       lineno);
    }
    Stump s;
    double alpha = 0.0;
    if (!parse_int(fields[0], s.feature) || !parse_double(fields[1], s.threshold) ||
        !parse_int(fields[2], s.below_class) || !parse_int(fields[3], s.above_class) ||
        !parse_double(fields[4], alpha)) {
      throw ParseError("bad member line", lineno);
    }
    return std::make_pair(s, alpha);
  };
  for (int i = 0; i < rounds; ++i) {
    if (!std::getline(in, line)) throw ParseError("ensemble file truncated", i + 2);
    e.members.push_back(parse_member(line, i + 2));
  }
  if (rounds == 0 && std::getline(in, line) && !line.empty()) {
    e.fallback = parse_member(line, 2).first;
  }
  return e;
}

}  // namespace bookmaker
