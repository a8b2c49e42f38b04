#include "bookmaker/contingency.hpp"

#include <string>

namespace bookmaker {

namespace {

void check_sequences(std::size_t gold_len, std::size_t pred_len, int k) {
  if (k < 2) throw ValueError("contingency table needs k >= 2 classes, got " + std::to_string(k));
  if (gold_len == 0) throw ValueError("cannot build a contingency table from empty sequences");
  if (gold_len != pred_len) {
    throw DimensionError("gold/pred length mismatch: " + std::to_string(gold_len) + " vs " +
                         std::to_string(pred_len));
  }
}

void check_index(int value, int k, const char* which, std::size_t position) {
  if (value < 0 || value >= k) {
    throw ValueError(std::string(which) + " index " + std::to_string(value) + " at position " +
                     std::to_string(position) + " outside [0, " + std::to_string(k) + ")");
  }
}

}  // namespace

ContingencyTable::ContingencyTable(Eigen::MatrixXd counts) : counts_(std::move(counts)) {
  if (counts_.rows() != counts_.cols()) {
    throw DimensionError("contingency table must be square, got " +
                         std::to_string(counts_.rows()) + "x" + std::to_string(counts_.cols()));
  }
  if (counts_.rows() < 2) {
    throw ValueError("contingency table needs k >= 2 classes");
  }
  if ((counts_.array() < 0.0).any()) {
    throw ValueError("contingency table cells must be non-negative");
  }
  n_ = counts_.sum();
  if (!(n_ > 0.0)) {
    throw ValueError("contingency table total weight must be positive");
  }
}

ContingencyTable ContingencyTable::transposed() const {
  return ContingencyTable(counts_.transpose());
}

ContingencyTable ContingencyTable::smoothed(double epsilon) const {
  if (epsilon < 0.0) throw ValueError("smoothing epsilon must be >= 0");
  return ContingencyTable(counts_.array() + epsilon);
}

ContingencyTable table_from_labels(std::span<const int> gold, std::span<const int> pred, int k) {
  check_sequences(gold.size(), pred.size(), k);
  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    check_index(gold[i], k, "gold", i);
    check_index(pred[i], k, "pred", i);
    cells(pred[i], gold[i]) += 1.0;
  }
  return ContingencyTable(std::move(cells));
}

ContingencyTable table_from_weighted(std::span<const int> gold, std::span<const int> pred,
                                     std::span<const double> weights, int k) {
  check_sequences(gold.size(), pred.size(), k);
  if (weights.size() != gold.size()) {
    throw DimensionError("weights length mismatch: " + std::to_string(weights.size()) + " vs " +
                         std::to_string(gold.size()));
  }
  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    check_index(gold[i], k, "gold", i);
    check_index(pred[i], k, "pred", i);
    if (weights[i] < 0.0) {
      throw ValueError("negative weight " + std::to_string(weights[i]) + " at position " +
                       std::to_string(i));
    }
    cells(pred[i], gold[i]) += weights[i];
  }
  if (!(cells.sum() > 0.0)) throw ValueError("all instance weights are zero");
  return ContingencyTable(std::move(cells));
}

DichotomousCounts dichotomize(const ContingencyTable& table, int cls) {
  const int k = table.k();
  if (cls < 0 || cls >= k) {
    throw ValueError("class index " + std::to_string(cls) + " outside [0, " + std::to_string(k) +
                     ")");
  }
  DichotomousCounts d;
  d.tp = table.cell(cls, cls);
  d.fp = table.counts().row(cls).sum() - d.tp;
  d.fn = table.counts().col(cls).sum() - d.tp;
  d.tn = table.n() - d.tp - d.fp - d.fn;
  return d;
}

RateSet rates(const DichotomousCounts& d) {
  const double total = d.total();
  if (!(total > 0.0)) throw ValueError("rates: dichotomous total weight must be positive");
  RateSet r;
  const double rp_w = d.tp + d.fn;
  const double rn_w = d.fp + d.tn;
  const double pp_w = d.tp + d.fp;
  const double pn_w = d.fn + d.tn;
  r.rp = rp_w / total;
  r.rn = rn_w / total;
  r.pp = pp_w / total;
  r.pn = pn_w / total;
  r.acc = (d.tp + d.tn) / total;
  if (rp_w > 0.0) {
    r.tpr = d.tp / rp_w;
    r.fnr = d.fn / rp_w;
  }
  if (rn_w > 0.0) {
    r.tnr = d.tn / rn_w;
    r.fpr = d.fp / rn_w;
  }
  if (pp_w > 0.0) r.prec = d.tp / pp_w;
  if (pn_w > 0.0) r.iprec = d.tn / pn_w;
  return r;
}

}  // namespace bookmaker
