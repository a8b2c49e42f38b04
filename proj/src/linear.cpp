#include "bookmaker/linear.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "bookmaker/textio.hpp"

namespace bookmaker {

namespace {

bool is_winnow(UpdateRule rule) {
  return rule == UpdateRule::Winnow || rule == UpdateRule::Winnow2;
}

void check_input_dim(const LinearModel& model, const Eigen::VectorXd& x) {
  if (static_cast<int>(x.size()) != model.input_dim()) {
    throw DimensionError("input has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(model.input_dim()));
  }
}

void check_target_dim(const LinearModel& model, const Eigen::VectorXd& y, const char* name) {
  if (static_cast<int>(y.size()) != model.k()) {
    throw DimensionError(std::string(name) + " has " + std::to_string(y.size()) +
                         " entries, model has " + std::to_string(model.k()) + " classes");
  }
}

Eigen::VectorXd augmented(const LinearModel& model, const Eigen::VectorXd& x) {
  if (!model.bias_feature) return x;
  Eigen::VectorXd xa(x.size() + 1);
  xa << x, 1.0;
  return xa;
}

void check_binary(const Eigen::VectorXd& x) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) != 0.0 && x(j) != 1.0) {
      throw ValueError("winnow requires binary attributes; feature " + std::to_string(j) +
                       " is " + std::to_string(x(j)));
    }
  }
}

int argmax_lowest(const Eigen::VectorXd& scores) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(scores.size()); ++c) {
    if (scores(c) > scores(best)) best = c;
  }
  return best;
}

int choose_class(const LinearModel& model, const Eigen::VectorXd& scores) {
  // Two-class Winnow is the classical single threshold unit: only the
  // positive-class column is trained and compared against theta. Argmax over
  // both columns would have to learn the complement of the target as well,
  // which the multiplicative update cannot represent.
  if (is_winnow(model.rule) && model.k() == 2) {
    return scores(1) > model.theta() ? 1 : 0;
  }
  return argmax_lowest(scores);
}

Eigen::MatrixXd apply_winnow(LinearModel& model, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                             double demotion_factor) {
  check_input_dim(model, x);
  check_target_dim(model, y, "target");
  check_target_dim(model, z, "prediction");
  check_binary(x);
  const Eigen::VectorXd xa = augmented(model, x);
  Eigen::MatrixXd factors = Eigen::MatrixXd::Ones(model.w.rows(), model.k());
  for (int c = 0; c < model.k(); ++c) {
    double factor = 1.0;
    if (y(c) == 1.0 && z(c) == 0.0) {
      factor = model.promotion;
    } else if (y(c) == 0.0 && z(c) == 1.0) {
      factor = demotion_factor;
    } else {
      continue;
    }
    for (Eigen::Index j = 0; j < xa.size(); ++j) {
      if (xa(j) == 1.0) factors(j, c) = factor;
    }
  }
  model.w = model.w.cwiseProduct(factors);
  return factors;
}

TargetCoding default_coding(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::Perceptron:
    case UpdateRule::Margin:
    case UpdateRule::SoftMargin:
      return TargetCoding::PlusMinus;
    default:
      return TargetCoding::ZeroOne;
  }
}

}  // namespace

std::string rule_name(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::Hebb: return "hebb";
    case UpdateRule::Perceptron: return "perceptron";
    case UpdateRule::Margin: return "margin";
    case UpdateRule::SoftMargin: return "softmargin";
    case UpdateRule::Winnow: return "winnow";
    case UpdateRule::Winnow2: return "winnow2";
  }
  throw ValueError("unknown update rule");
}

UpdateRule rule_from_name(const std::string& name) {
  if (name == "hebb") return UpdateRule::Hebb;
  if (name == "perceptron") return UpdateRule::Perceptron;
  if (name == "margin") return UpdateRule::Margin;
  if (name == "softmargin") return UpdateRule::SoftMargin;
  if (name == "winnow") return UpdateRule::Winnow;
  if (name == "winnow2") return UpdateRule::Winnow2;
  throw ValueError("unknown rule name '" + name + "'");
}

LinearModel make_model(UpdateRule rule, int d, int k, double lr, double margin, double promotion,
                       bool bias_feature) {
  if (d < 1) throw ValueError("model needs at least one feature");
  if (k < 2) throw ValueError("model needs at least two classes");
  if (lr < 0.0 || lr > 1.0) throw ValueError("learning rate must lie in [0, 1]");
  if (margin < 0.0) throw ValueError("margin must be >= 0");
  if (promotion <= 1.0) throw ValueError("promotion factor must be > 1");
  LinearModel m;
  m.rule = rule;
  m.lr = lr;
  m.margin = margin;
  m.promotion = promotion;
  m.bias_feature = bias_feature;
  const int rows = d + (bias_feature ? 1 : 0);
  m.w = is_winnow(rule) ? Eigen::MatrixXd::Ones(rows, k) : Eigen::MatrixXd::Zero(rows, k);
  return m;
}

Eigen::VectorXd activate(const LinearModel& model, const Eigen::VectorXd& x) {
  check_input_dim(model, x);
  return model.w.transpose() * augmented(model, x);
}

int predict(const LinearModel& model, const Eigen::VectorXd& x) {
  return choose_class(model, activate(model, x));
}

Eigen::MatrixXd update_hebb(LinearModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
  check_input_dim(model, x);
  check_target_dim(model, y, "target");
  const Eigen::MatrixXd delta = model.lr * (augmented(model, x) * y.transpose());
  model.w += delta;
  return delta;
}

Eigen::MatrixXd update_perceptron(LinearModel& model, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  check_input_dim(model, x);
  check_target_dim(model, y, "target");
  check_target_dim(model, z, "prediction");
  const Eigen::VectorXd xa = augmented(model, x);
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(model.w.rows(), model.k());
  for (int c = 0; c < model.k(); ++c) {
    if (y(c) != z(c)) delta.col(c) = model.lr * y(c) * xa;
  }
  model.w += delta;
  return delta;
}

Eigen::MatrixXd update_margin(LinearModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& raw_scores) {
  check_input_dim(model, x);
  check_target_dim(model, y, "target");
  check_target_dim(model, raw_scores, "raw scores");
  const Eigen::VectorXd xa = augmented(model, x);
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(model.w.rows(), model.k());
  for (int c = 0; c < model.k(); ++c) {
    if (y(c) * raw_scores(c) < model.margin) delta.col(c) = model.lr * y(c) * xa;
  }
  model.w += delta;
  return delta;
}

Eigen::MatrixXd update_soft_margin(LinearModel& model, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y, const Eigen::VectorXd& raw_scores) {
  check_input_dim(model, x);
  check_target_dim(model, y, "target");
  check_target_dim(model, raw_scores, "raw scores");
  const Eigen::VectorXd xa = augmented(model, x);
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(model.w.rows(), model.k());
  for (int c = 0; c < model.k(); ++c) {
    const double clipped = std::clamp(raw_scores(c), -1.0, 1.0);
    const double factor = std::clamp(1.0 - y(c) * clipped, 0.0, 1.0);
    if (factor > 0.0) delta.col(c) = model.lr * factor * y(c) * xa;
  }
  model.w += delta;
  return delta;
}

Eigen::MatrixXd update_winnow(LinearModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  return apply_winnow(model, x, y, z, 0.0);
}

Eigen::MatrixXd update_winnow2(LinearModel& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  return apply_winnow(model, x, y, z, 1.0 / model.promotion);
}

TrainResult train(const LabeledDataset& dataset, const RuleConfig& config) {
  if (dataset.n() == 0) throw ValueError("cannot train on an empty dataset");
  if (config.epochs < 1) throw ValueError("epochs must be >= 1");
  const TargetCoding coding = config.coding_set ? config.coding : default_coding(config.rule);
  if (coding != default_coding(config.rule)) {
    throw ValueError("rule " + rule_name(config.rule) + " requires " +
                     (default_coding(config.rule) == TargetCoding::ZeroOne ? "0/1" : "+/-1") +
                     " target coding");
  }
  if (is_winnow(config.rule)) {
    for (int i = 0; i < dataset.n(); ++i) check_binary(dataset.x.row(i).transpose());
  }

  const int k = std::max(2, dataset.k());
  LinearModel model = make_model(config.rule, dataset.d(), k, config.lr, config.margin,
                                 config.promotion, config.bias_feature);
  const bool binary_winnow = is_winnow(config.rule) && k == 2;

  // Targets in the coding the rule expects.
  const auto target_vector = [&](int label) {
    Eigen::VectorXd y(k);
    if (coding == TargetCoding::PlusMinus) {
      y.setConstant(-1.0);
      y(label) = 1.0;
    } else {
      y.setZero();
      y(label) = 1.0;
    }
    return y;
  };

  std::vector<int> order(dataset.n());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);

  TrainResult result{std::move(model), {}};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    int errors = 0;
    bool updated = false;
    for (int idx : order) {
      const Eigen::VectorXd x = dataset.x.row(idx).transpose();
      const Eigen::VectorXd scores = activate(result.model, x);
      if (choose_class(result.model, scores) != dataset.y[idx]) ++errors;
      const Eigen::VectorXd y = target_vector(dataset.y[idx]);
      switch (config.rule) {
        case UpdateRule::Hebb: {
          update_hebb(result.model, x, y);
          updated = updated || config.lr > 0.0;
          break;
        }
        case UpdateRule::Perceptron: {
          const Eigen::VectorXd z =
              (scores.array() > 0.0).select(Eigen::VectorXd::Ones(k), -Eigen::VectorXd::Ones(k));
          if (config.lr > 0.0 && (y.array() != z.array()).any()) updated = true;
          update_perceptron(result.model, x, y, z);
          break;
        }
        case UpdateRule::Margin: {
          if (config.lr > 0.0 && ((y.array() * scores.array()) < config.margin).any()) {
            updated = true;
          }
          update_margin(result.model, x, y, scores);
          break;
        }
        case UpdateRule::SoftMargin: {
          if (config.lr > 0.0 &&
              ((y.array() * scores.array().min(1.0).max(-1.0)) < 1.0).any()) {
            updated = true;
          }
          update_soft_margin(result.model, x, y, scores);
          break;
        }
        case UpdateRule::Winnow:
        case UpdateRule::Winnow2: {
          Eigen::VectorXd z(k);
          for (int c = 0; c < k; ++c) z(c) = scores(c) > result.model.theta() ? 1.0 : 0.0;
          Eigen::VectorXd yt = y;
          if (binary_winnow) {
            // Only the positive-class unit is trained; silence column 0.
            yt(0) = z(0);
          }
          const Eigen::MatrixXd factors =
              config.rule == UpdateRule::Winnow ? update_winnow(result.model, x, yt, z)
                                                : update_winnow2(result.model, x, yt, z);
          if ((factors.array() != 1.0).any()) updated = true;
          break;
        }
      }
    }
    result.epoch_errors.push_back(errors);
    if (!updated) break;  // converged: further epochs cannot change anything
  }
  return result;
}

void save_model(const LinearModel& model, std::ostream& out) {
  out << rule_name(model.rule) << ',' << model.k() << ',' << model.w.rows() << ','
      << g17(model.lr) << ',' << g17(model.margin) << ',' << g17(model.promotion) << ','
      << (model.bias_feature ? 1 : 0) << '\n';
  for (Eigen::Index j = 0; j < model.w.rows(); ++j) {
    for (int c = 0; c < model.k(); ++c) {
      if (c) out << ',';
      out << g17(model.w(j, c));
    }
    out << '\n';
  }
}

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  save_model(model, out);
  if (!out) throw IoError("failed writing " + path);
}

LinearModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model file");
  const auto header = split_fields(line);
  if (header.size() != 6 && header.size() != 7) {
    throw ParseError("model header needs 6 or 7 fields, got " + std::to_string(header.size()), 1);
  }
  LinearModel m;
  m.rule = rule_from_name(std::string(header[0]));
  int k = 0, d = 0;
  if (!parse_int(header[1], k) || !parse_int(header[2], d) || k < 2 || d < 1) {
    throw ParseError("bad model dimensions in header", 1);
  }
  if (!parse_double(header[3], m.lr) || !parse_double(header[4], m.margin) ||
      !parse_double(header[5], m.promotion)) {
    throw ParseError("bad model parameters in header", 1);
  }
  if (header.size() == 7) {
    int bias = 0;
    if (!parse_int(header[6], bias) || (bias != 0 && bias != 1)) {
      throw ParseError("bias flag must be 0 or 1", 1);
    }
    m.bias_feature = bias == 1;
  }
  m.w.resize(d, k);
  for (int j = 0; j < d; ++j) {
    if (!std::getline(in, line)) throw ParseError("model file truncated at weight row", j + 2);
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != k) {
      throw ParseError("weight row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(k),
                       j + 2);
    }
    for (int c = 0; c < k; ++c) {
      if (!parse_double(fields[c], m.w(j, c))) {
        throw ParseError("bad weight '" + std::string(fields[c]) + "'", j + 2, c + 1);
      }
    }
  }
  return m;
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_model(in);
}

}  // namespace bookmaker
