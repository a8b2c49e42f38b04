#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bookmaker/errors.hpp"

namespace bookmaker {

/// In-memory labeled dataset: n x d real features plus class indices.
/// Class indices always refer into class_names; the name -> index map is
/// injective by construction.
struct LabeledDataset {
  Eigen::MatrixXd x;  ///< n x d feature matrix
  std::vector<int> y;
  std::vector<std::string> class_names;

  int n() const { return static_cast<int>(x.rows()); }
  int d() const { return static_cast<int>(x.cols()); }
  int k() const { return static_cast<int>(class_names.size()); }
};

struct CsvOptions {
  bool has_header = false;
  /// Zero-based column holding the class label (UCI letter convention: first).
  int label_column = 0;
  /// When nonempty, fixes the label -> index mapping; unknown labels are
  /// errors. When empty, classes are numbered by first appearance.
  std::vector<std::string> class_order;
};

/// Loads a comma-separated file of one instance per row. All rows must have
/// the same field count and every non-label field must parse as a real.
LabeledDataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Writes the dataset back as CSV, label first. Feature values are printed
/// with 17 significant digits so a reload is value-identical.
void save_csv(const LabeledDataset& dataset, const std::string& path);

/// Seeded shuffle-then-split into (train, test). Stratified mode keeps each
/// class within one instance of its overall proportion. The partition is
/// exact: every instance lands in exactly one side.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double train_fraction, std::uint64_t seed,
                                                bool stratified = false);

enum class SyntheticKind {
  SeparableBlobs,     ///< linearly separable by construction, margin enforced
  KOfNDisjunction,    ///< binary attributes, label = OR of the designated ones
  PlantedAssociation, ///< class-conditional Bernoulli features, known delta-P
  Independence,       ///< features carry no information about the label
};

struct SyntheticParams {
  int n = 100;
  int d = 0;  ///< 0 picks a per-kind default
  int k = 2;
  double margin = 1.0;      ///< SeparableBlobs: minimum one-vs-rest margin
  int literals = 3;         ///< KOfNDisjunction: attributes in the target OR
  double active_prob = 0.2; ///< KOfNDisjunction: attribute activation rate
  double p_in = 0.9;        ///< PlantedAssociation: P(feature | its class)
  double p_out = 0.1;       ///< PlantedAssociation: P(feature | other class)
};

LabeledDataset gen_synthetic(SyntheticKind kind, const SyntheticParams& params,
                             std::uint64_t seed);

/// Maps every feature column affinely onto [0, 1]; constant columns go to 0.
LabeledDataset scale_minmax(const LabeledDataset& dataset);

}  // namespace bookmaker
