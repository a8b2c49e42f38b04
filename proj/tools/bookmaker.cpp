// bookmaker: chance-corrected evaluation, online linear learners, and
// chance-corrected boosting over CSV datasets.
//
// Subcommands:
//   eval     compare a gold and a prediction label file
//   train    fit an online linear rule (or the informatron) and report metrics
//   boost    AdaBoost.M1 with a pluggable goodness measure, trace output
//   compare  run every measure on a shared split and emit plot-ready CSV

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bookmaker/booster.hpp"
#include "bookmaker/contingency.hpp"
#include "bookmaker/dataset.hpp"
#include "bookmaker/informatron.hpp"
#include "bookmaker/linear.hpp"
#include "bookmaker/metrics.hpp"
#include "bookmaker/report.hpp"
#include "bookmaker/stump.hpp"
#include "bookmaker/textio.hpp"

namespace bm = bookmaker;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUndefinedMetric = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BOOKMAKER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw bm::ValueError(std::string("BOOKMAKER_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

// One label per line, or the leading column of a CSV row.
std::vector<std::string> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bm::IoError("cannot open " + path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    labels.push_back(comma == std::string::npos ? line : line.substr(0, comma));
  }
  if (labels.empty()) throw bm::ParseError("no labels in " + path);
  return labels;
}

std::vector<std::string> split_class_list(const std::string& list) {
  std::vector<std::string> out;
  for (std::string_view field : bm::split_fields(list)) out.emplace_back(field);
  return out;
}

bm::MetricReport report_for(const std::vector<int>& gold, const std::vector<int>& pred, int k) {
  return bm::metric_report(bm::table_from_labels(gold, pred, k));
}

// Composes per-split reports into one document: a single JSON object keyed by
// split, one scope-prefixed CSV, or labeled sections for the table format.
class SplitReportPrinter {
 public:
  SplitReportPrinter(bm::ReportFormat format, const std::vector<std::string>& names)
      : format_(format), names_(&names) {}

  void add(const std::string& split, const bm::MetricReport& report) {
    partial_ = partial_ || bm::report_is_partial(report);
    switch (format_) {
      case bm::ReportFormat::Json: {
        body_ += body_.empty() ? "{\n" : ",\n";
        body_ += "\"" + split + "\": " + bm::render_report(report, *names_, format_);
        break;
      }
      case bm::ReportFormat::Csv: {
        std::istringstream rows(bm::render_report(report, *names_, format_));
        std::string line;
        std::getline(rows, line);  // per-report header
        if (body_.empty()) body_ = "split," + line + "\n";
        while (std::getline(rows, line)) body_ += split + "," + line + "\n";
        break;
      }
      case bm::ReportFormat::Table: {
        body_ += "== " + split + " ==\n" + bm::render_report(report, *names_, format_);
        break;
      }
    }
  }

  void add_field(const std::string& key, const std::string& value, bool quoted = true) {
    switch (format_) {
      case bm::ReportFormat::Json:
        body_ += body_.empty() ? "{\n" : ",\n";
        body_ += "\"" + key + "\": " + (quoted ? "\"" + value + "\"" : value);
        break;
      case bm::ReportFormat::Csv:
        trailer_ += key + ",," + value + "\n";
        break;
      case bm::ReportFormat::Table:
        trailer_ += key + ": " + value + "\n";
        break;
    }
  }

  bool partial() const { return partial_; }

  void print() const {
    std::cout << body_;
    if (format_ == bm::ReportFormat::Json) std::cout << "\n}\n";
    std::cout << trailer_;
  }

 private:
  bm::ReportFormat format_;
  const std::vector<std::string>* names_;
  std::string body_;
  std::string trailer_;
  bool partial_ = false;
};

struct EvalArgs {
  std::string gold_path, pred_path, classes, format = "table";
};

int run_eval(const EvalArgs& args) {
  const auto gold_labels = read_label_file(args.gold_path);
  const auto pred_labels = read_label_file(args.pred_path);
  if (gold_labels.size() != pred_labels.size()) {
    throw bm::DimensionError("gold has " + std::to_string(gold_labels.size()) +
                             " labels, pred has " + std::to_string(pred_labels.size()));
  }
  std::vector<std::string> names;
  if (!args.classes.empty()) names = split_class_list(args.classes);
  const auto index_of = [&names, fixed = !args.classes.empty()](const std::string& label) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == label) return static_cast<int>(i);
    }
    if (fixed) throw bm::ValueError("unknown label '" + label + "' with fixed --classes");
    names.push_back(label);
    return static_cast<int>(names.size() - 1);
  };
  std::vector<int> gold, pred;
  gold.reserve(gold_labels.size());
  pred.reserve(pred_labels.size());
  for (const std::string& s : gold_labels) gold.push_back(index_of(s));
  for (const std::string& s : pred_labels) pred.push_back(index_of(s));

  const bm::MetricReport report = report_for(gold, pred, static_cast<int>(names.size()));
  std::cout << bm::render_report(report, names, bm::report_format_from_name(args.format));
  return bm::report_is_partial(report) ? kExitUndefinedMetric : kExitOk;
}

struct TrainArgs {
  std::string data_path, rule, format = "table", model_out;
  int epochs = 10;
  double lr = 1.0, margin = 0.0, promotion = 2.0, epsilon = 0.0;
  std::optional<double> split_fraction;
  bool stratified = false;
  bool bias = false;
  std::uint64_t seed = 0;
};

std::vector<int> active_indices(const Eigen::VectorXd& row) {
  std::vector<int> active;
  for (int j = 0; j < static_cast<int>(row.size()); ++j) {
    if (row(j) == 1.0) {
      active.push_back(j);
    } else if (row(j) != 0.0) {
      throw bm::ValueError("informatron requires binary features; feature " + std::to_string(j) +
                           " is " + bm::g17(row(j)));
    }
  }
  return active;
}

int run_train(const TrainArgs& args) {
  const bm::LabeledDataset full = bm::load_csv(args.data_path);
  bm::LabeledDataset train = full;
  std::optional<bm::LabeledDataset> test;
  if (args.split_fraction) {
    auto [tr, te] = bm::split(full, *args.split_fraction, args.seed, args.stratified);
    train = std::move(tr);
    test = std::move(te);
  }

  SplitReportPrinter printer(bm::report_format_from_name(args.format), full.class_names);
  std::string model_path = args.model_out;
  if (args.rule == "informatron") {
    bm::InformatronState state = bm::make_informatron(train.d(), std::max(2, full.k()),
                                                      args.epsilon);
    for (int i = 0; i < train.n(); ++i) {
      bm::informatron_observe(state, active_indices(train.x.row(i).transpose()), train.y[i]);
    }
    const auto predict_all = [&state](const bm::LabeledDataset& ds) {
      std::vector<int> preds(ds.n());
      for (int i = 0; i < ds.n(); ++i) {
        preds[i] = bm::informatron_predict(state, active_indices(ds.x.row(i).transpose()));
      }
      return preds;
    };
    printer.add("train", report_for(train.y, predict_all(train), full.k()));
    if (test) printer.add("test", report_for(test->y, predict_all(*test), full.k()));
    if (model_path.empty()) model_path = "informatron_model.txt";
    bm::save_informatron(state, model_path);
  } else {
    bm::RuleConfig config;
    config.rule = bm::rule_from_name(args.rule);
    config.epochs = args.epochs;
    config.seed = args.seed;
    config.lr = args.lr;
    config.margin = args.margin;
    config.promotion = args.promotion;
    config.bias_feature = args.bias;
    const bm::TrainResult result = bm::train(train, config);
    const auto predict_all = [&result](const bm::LabeledDataset& ds) {
      std::vector<int> preds(ds.n());
      for (int i = 0; i < ds.n(); ++i) {
        preds[i] = bm::predict(result.model, ds.x.row(i).transpose());
      }
      return preds;
    };
    printer.add("train", report_for(train.y, predict_all(train), full.k()));
    if (test) printer.add("test", report_for(test->y, predict_all(*test), full.k()));
    if (model_path.empty()) model_path = args.rule + "_model.txt";
    bm::save_model(result.model, model_path);
  }
  printer.add_field("model", model_path);
  printer.print();
  return printer.partial() ? kExitUndefinedMetric : kExitOk;
}

struct BoostArgs {
  std::string data_path, measure = "informedness", format = "table", trace_path;
  int rounds = 100;
  double split_fraction = 0.8;
  double delta = 1e-9;
  bool resample = false;
  bool stratified = false;
  bool stop_on_degenerate = false;
  std::uint64_t seed = 0;
};

int run_boost(const BoostArgs& args) {
  const bm::LabeledDataset full = bm::load_csv(args.data_path);
  auto [train, test] = bm::split(full, args.split_fraction, args.seed, args.stratified);

  bm::BoostConfig config;
  config.rounds = args.rounds;
  config.measure = bm::measure_from_name(args.measure);
  config.delta = args.delta;
  config.resample = args.resample;
  config.seed = args.seed;
  config.stop_on_degenerate = args.stop_on_degenerate;
  const auto [ensemble, trace] = bm::boost_train(train, config, &test);

  if (!args.trace_path.empty()) {
    const bool json = args.trace_path.size() > 5 &&
                      args.trace_path.substr(args.trace_path.size() - 5) == ".json";
    std::ofstream out(args.trace_path);
    if (!out) throw bm::IoError("cannot write " + args.trace_path);
    out << bm::emit_trace(trace, json ? bm::TraceFormat::Json : bm::TraceFormat::Csv);
  }

  SplitReportPrinter printer(bm::report_format_from_name(args.format), full.class_names);
  printer.add("train", report_for(train.y, bm::ensemble_predict_all(ensemble, train), full.k()));
  printer.add("test", report_for(test.y, bm::ensemble_predict_all(ensemble, test), full.k()));
  printer.add_field("rounds_retained", std::to_string(ensemble.members.size()),
                    /*quoted=*/false);
  printer.print();
  return printer.partial() ? kExitUndefinedMetric : kExitOk;
}

struct CompareArgs {
  std::string data_path, out_path;
  int rounds = 100;
  double split_fraction = 0.8;
  bool stratified = false;
  bool resample = false;
  std::uint64_t seed = 0;
};

int run_compare(const CompareArgs& args) {
  const bm::LabeledDataset full = bm::load_csv(args.data_path);
  const auto [train, test] = bm::split(full, args.split_fraction, args.seed, args.stratified);

  const std::vector<bm::Measure> measures = {
      bm::Measure::Accuracy, bm::Measure::Correlation, bm::Measure::Informedness,
      bm::Measure::Kappa, bm::Measure::Markedness};

  // Each run owns its weights and RNG, so the parallel execution cannot
  // change any byte of the sorted output.
  const auto run_measure = [&](bm::Measure measure) {
    bm::BoostConfig config;
    config.rounds = args.rounds;
    config.measure = measure;
    config.resample = args.resample;
    config.seed = args.seed;
    config.stop_on_degenerate = true;  // record the failure as a row instead
    const auto [ensemble, trace] = bm::boost_train(train, config, &test);
    std::ostringstream rows;
    for (const bm::BoostRound& r : trace.rounds) {
      rows << bm::measure_name(measure) << ',' << r.round << ','
           << (r.test_accuracy ? bm::g17(*r.test_accuracy) : "") << '\n';
    }
    if (trace.degenerate_stop) {
      std::string cleaned = *trace.degenerate_stop;
      for (char& ch : cleaned) {
        if (ch == ',') ch = ';';
      }
      rows << bm::measure_name(measure) << ',' << trace.rounds.size() + 1 << ",error(" << cleaned
           << ")\n";
    }
    return rows.str();
  };

  std::vector<std::future<std::string>> futures;
  futures.reserve(measures.size());
  for (bm::Measure m : measures) {
    futures.push_back(std::async(std::launch::async, run_measure, m));
  }
  std::ostringstream body;
  for (auto& f : futures) body << f.get();

  std::ofstream out(args.out_path);
  if (!out) throw bm::IoError("cannot write " + args.out_path);
  out << "measure,round,test_accuracy\n" << body.str();
  if (!out) throw bm::IoError("failed writing " + args.out_path);
  std::cout << "wrote " << args.out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chance-corrected classification metrics, online linear learners, and boosting"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score a prediction file against a gold file");
  eval->add_option("--gold", eval_args.gold_path, "gold label file")->required();
  eval->add_option("--pred", eval_args.pred_path, "predicted label file")->required();
  eval->add_option("--classes", eval_args.classes, "comma-separated class order");
  eval->add_option("--format", eval_args.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train an online linear rule");
  train->add_option("--data", train_args.data_path, "label-first CSV dataset")->required();
  train->add_option("--rule", train_args.rule, "hebb|perceptron|margin|softmargin|winnow|winnow2|informatron")
      ->required()
      ->check(CLI::IsMember({"hebb", "perceptron", "margin", "softmargin", "winnow", "winnow2",
                             "informatron"}));
  train->add_option("--epochs", train_args.epochs, "training passes")->check(CLI::PositiveNumber);
  train->add_option("--lr", train_args.lr, "learning rate in [0,1]");
  train->add_option("--margin", train_args.margin, "margin width (margin rule)");
  train->add_option("--alpha", train_args.promotion, "winnow promotion factor");
  train->add_option("--epsilon", train_args.epsilon, "informatron smoothing");
  train->add_option("--split", train_args.split_fraction, "train fraction in (0,1)");
  train->add_flag("--stratified", train_args.stratified, "stratify the split");
  train->add_flag("--bias", train_args.bias, "append a constant-1 feature");
  train->add_option("--model-out", train_args.model_out, "model output path");
  train->add_option("--format", train_args.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  std::optional<std::uint64_t> train_seed;
  train->add_option("--seed", train_seed, "shuffle seed (default $BOOKMAKER_SEED or 0)");

  BoostArgs boost_args;
  CLI::App* boost = app.add_subcommand("boost", "boost decision stumps");
  boost->add_option("--data", boost_args.data_path, "label-first CSV dataset")->required();
  boost->add_option("--measure", boost_args.measure,
                    "accuracy|kappa|informedness|markedness|correlation")
      ->check(CLI::IsMember({"accuracy", "kappa", "informedness", "markedness", "correlation"}));
  boost->add_option("--rounds", boost_args.rounds, "maximum rounds")->check(CLI::PositiveNumber);
  boost->add_option("--split", boost_args.split_fraction, "train fraction in (0,1)");
  boost->add_option("--delta", boost_args.delta, "liveness tolerance");
  boost->add_flag("--resample", boost_args.resample, "fit on weight-proportional resamples");
  boost->add_flag("--stratified", boost_args.stratified, "stratify the split");
  boost->add_flag("--stop-on-degenerate", boost_args.stop_on_degenerate,
                  "stop cleanly when the measure is undefined");
  boost->add_option("--trace", boost_args.trace_path, "trace output (.json for JSON, else CSV)");
  boost->add_option("--format", boost_args.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  std::optional<std::uint64_t> boost_seed;
  boost->add_option("--seed", boost_seed, "split/resample seed (default $BOOKMAKER_SEED or 0)");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "run every measure on a shared split");
  compare->add_option("--data", compare_args.data_path, "label-first CSV dataset")->required();
  compare->add_option("--rounds", compare_args.rounds, "maximum rounds")
      ->check(CLI::PositiveNumber);
  compare->add_option("--split", compare_args.split_fraction, "train fraction in (0,1)");
  compare->add_flag("--stratified", compare_args.stratified, "stratify the split");
  compare->add_flag("--resample", compare_args.resample, "fit on weight-proportional resamples");
  compare->add_option("--out", compare_args.out_path, "output CSV path")->required();
  std::optional<std::uint64_t> compare_seed;
  compare->add_option("--seed", compare_seed, "shared seed (default $BOOKMAKER_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return run_eval(eval_args);
    if (*train) {
      train_args.seed = train_seed.value_or(default_seed());
      return run_train(train_args);
    }
    if (*boost) {
      boost_args.seed = boost_seed.value_or(default_seed());
      return run_boost(boost_args);
    }
    if (*compare) {
      compare_args.seed = compare_seed.value_or(default_seed());
      return run_compare(compare_args);
    }
  } catch (const bm::UndefinedMetricError& e) {
    std::cerr << "undefined metric: " << e.what() << '\n';
    return kExitUndefinedMetric;
  } catch (const bm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
