#include "bookmaker/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bookmaker {

namespace {

// Throws when any entry of `marginals` (already divided by n) is 0 or 1.
// `axis` names the marginal in the message ("prevalence" or "bias").
void require_nondegenerate(const Eigen::VectorXd& marginals, const std::string& measure,
                           const std::string& axis) {
  for (Eigen::Index i = 0; i < marginals.size(); ++i) {
    if (marginals(i) <= 0.0) {
      throw UndefinedMetricError(measure, static_cast<int>(i),
                                 measure + " undefined: class " + std::to_string(i) +
                                     " has zero " + axis);
    }
    if (marginals(i) >= 1.0) {
      throw UndefinedMetricError(measure, static_cast<int>(i),
                                 measure + " undefined: class " + std::to_string(i) + " has " +
                                     axis + " 1 (single-class degenerate)");
    }
  }
}

// Bias-weighted sum of per-class delta-P'. Assumes prevalences already
// checked; classes that are never predicted contribute zero weight.
double informedness_core(const ContingencyTable& t) {
  const Eigen::VectorXd bias = t.biases();
  double sum = 0.0;
  for (int c = 0; c < t.k(); ++c) {
    if (bias(c) <= 0.0) continue;
    sum += bias(c) * delta_p_prime(dichotomize(t, c));
  }
  return sum;
}

}  // namespace

double delta_p_prime(const DichotomousCounts& d) {
  const RateSet r = rates(d);
  if (!r.tpr.has_value()) {
    throw UndefinedMetricError("delta_p_prime", -1,
                               "delta_p_prime undefined: zero prevalence (no real positives)");
  }
  if (!r.fpr.has_value()) {
    throw UndefinedMetricError("delta_p_prime", -1,
                               "delta_p_prime undefined: prevalence 1 (no real negatives)");
  }
  return *r.tpr - *r.fpr;
}

double delta_p(const DichotomousCounts& d) {
  const RateSet r = rates(d);
  if (!r.prec.has_value()) {
    throw UndefinedMetricError("delta_p", -1,
                               "delta_p undefined: zero bias (no positive predictions)");
  }
  if (!r.iprec.has_value()) {
    throw UndefinedMetricError("delta_p", -1,
                               "delta_p undefined: bias 1 (no negative predictions)");
  }
  return *r.prec + *r.iprec - 1.0;
}

double informedness(const ContingencyTable& t) {
  require_nondegenerate(t.prevalences(), "informedness", "prevalence");
  return informedness_core(t);
}

double markedness(const ContingencyTable& t) {
  // Swapping prediction and reality turns per-class delta-P into delta-P' and
  // prevalence weights into bias weights, so markedness(t) is exactly
  // informedness of the transpose.
  const ContingencyTable swapped = t.transposed();
  require_nondegenerate(swapped.prevalences(), "markedness", "bias");
  return informedness_core(swapped);
}

GainMatrix gain_matrix(const Eigen::VectorXd& prevalences) {
  const Eigen::Index k = prevalences.size();
  if (k < 2) throw ValueError("gain matrix needs at least 2 classes");
  for (Eigen::Index p = 0; p < k; ++p) {
    if (prevalences(p) <= 0.0 || prevalences(p) >= 1.0) {
      throw UndefinedMetricError("gain_matrix", static_cast<int>(p),
                                 "gain matrix undefined: class " + std::to_string(p) +
                                     " prevalence " + std::to_string(prevalences(p)) +
                                     " not strictly inside (0,1)");
    }
  }
  if (std::abs(prevalences.sum() - 1.0) > 1e-9) {
    throw ValueError("gain matrix prevalences must sum to 1, got " +
                     std::to_string(prevalences.sum()));
  }
  GainMatrix gm;
  gm.prevalences = prevalences;
  gm.g.resize(k, k);
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index r = 0; r < k; ++r) {
      gm.g(p, r) = 1.0 / (prevalences(p) - (p != r ? 1.0 : 0.0));
    }
  }
  return gm;
}

double informedness_bookmaker(const ContingencyTable& t) {
  require_nondegenerate(t.prevalences(), "informedness_bookmaker", "prevalence");
  const GainMatrix gm = gain_matrix(t.prevalences());
  // Inner sum per predicted class: gain-weighted cell probabilities. The
  // outer sum weights each prediction by how often it is made.
  const Eigen::VectorXd payoff =
      ((t.counts().array() / t.n()) * gm.g.array()).rowwise().sum().matrix();
  return t.biases().dot(payoff);
}

double kappa_cohen(const ContingencyTable& t) {
  const double expected = t.biases().dot(t.prevalences());
  if (expected >= 1.0) {
    throw UndefinedMetricError("kappa", -1,
                               "kappa undefined: expected accuracy is 1 (single-class table)");
  }
  const double acc = t.trace() / t.n();
  return (acc - expected) / (1.0 - expected);
}

double matthews_correlation(const ContingencyTable& t) {
  const double inf = informedness(t);
  const double mark = markedness(t);
  const double product = inf * mark;
  if (product < 0.0) {
    throw UndefinedMetricError(
        "correlation", -1,
        "correlation undefined: informedness (" + std::to_string(inf) + ") and markedness (" +
            std::to_string(mark) + ") have opposite signs; geometric mean has no real value");
  }
  const double sign = inf > 0.0 ? 1.0 : (inf < 0.0 ? -1.0 : 0.0);
  return sign * std::sqrt(product);
}

double gini(double k_value) {
  if (k_value < -1.0 || k_value > 1.0) {
    throw ValueError("gini input must lie in [-1, 1], got " + std::to_string(k_value));
  }
  return (k_value + 1.0) / 2.0;
}

HarmonicInfo harmonic_information(long p) {
  if (p < 1) throw ValueError("harmonic_information needs p >= 1, got " + std::to_string(p));
  HarmonicInfo h;
  // Summing small terms first keeps the partial sums tight.
  for (long i = p; i >= 1; --i) h.harmonic += 1.0 / static_cast<double>(i);
  h.approx = std::log(static_cast<double>(p)) + kEulerGamma;
  return h;
}

MetricReport metric_report(const ContingencyTable& t) {
  MetricReport report;
  report.n = t.n();
  report.k = t.k();
  report.accuracy = t.trace() / t.n();

  const Eigen::VectorXd prev = t.prevalences();
  const Eigen::VectorXd bias = t.biases();
  for (int c = 0; c < t.k(); ++c) {
    PerClassMetrics pc;
    pc.cls = c;
    pc.prevalence = prev(c);
    pc.bias = bias(c);
    const RateSet r = rates(dichotomize(t, c));
    pc.recall = r.tpr;
    pc.precision = r.prec;
    if (r.tpr && r.fpr) pc.delta_p_prime = *r.tpr - *r.fpr;
    if (r.prec && r.iprec) pc.delta_p = *r.prec + *r.iprec - 1.0;
    report.per_class.push_back(pc);
  }

  const auto record = [&report](std::optional<double>& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const UndefinedMetricError& e) {
      // Correlation repeats its components' failures; keep each note once.
      if (std::find(report.notes.begin(), report.notes.end(), e.what()) == report.notes.end()) {
        report.notes.emplace_back(e.what());
      }
    }
  };
  record(report.informedness, [&t] { return informedness(t); });
  record(report.markedness, [&t] { return markedness(t); });
  record(report.kappa, [&t] { return kappa_cohen(t); });
  record(report.correlation, [&t] { return matthews_correlation(t); });
  return report;
}

}  // namespace bookmaker
