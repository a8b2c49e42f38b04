#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>

#include "bookmaker/errors.hpp"

namespace bookmaker {

/// Association learner that accumulates plain Hebbian co-occurrence counts
/// and defers the prevalence normalization to scoring time. Joint counts c,
/// class marginals p, and feature marginals f grow monotonically under
/// observe(); scores divide by the accumulated marginals, which makes the
/// batch-limit scores equal the chance-corrected delta-P measures exactly.
struct InformatronState {
  Eigen::MatrixXd c;  ///< feature x class joint counts
  Eigen::VectorXd p;  ///< class marginal counts
  Eigen::VectorXd f;  ///< feature marginal counts
  double n = 0.0;     ///< events observed
  double epsilon = 0.0;  ///< additive smoothing per implied 2x2 cell; 0 = strict

  int d() const { return static_cast<int>(c.rows()); }
  int k() const { return static_cast<int>(c.cols()); }
};

enum class Direction {
  Backward,  ///< delta-P': conditioned on the class marginal
  Forward,   ///< delta-P: conditioned on the feature marginal
};

InformatronState make_informatron(int d, int k, double epsilon = 0.0);

/// Records one event: the class occurred with the given active features.
/// Every counter moves up by one where it applies and never decreases.
void informatron_observe(InformatronState& state, std::span<const int> active_features, int cls);

/// Prevalence-normalized association strength in [-1, 1].
/// Backward: c/p[k] - (f[j]-c)/(n-p[k]); forward mirrors with f[j].
/// With epsilon > 0 each implied 2x2 cell is smoothed additively; in strict
/// mode a zero denominator raises an undefined-association error.
double informatron_score(const InformatronState& state, int feature, int cls,
                         Direction direction);

/// Argmax over classes of the summed backward scores of the active features;
/// ties go to the lowest index. No active features yields class 0 (the tie
/// rule over all-zero scores). Strict-mode undefined scores propagate.
int informatron_predict(const InformatronState& state, std::span<const int> active_features);

/// Flat text serialization mirroring the linear-model format:
/// `informatron,k,d,epsilon,n` then the c rows, the p row, and the f row.
void save_informatron(const InformatronState& state, std::ostream& out);
void save_informatron(const InformatronState& state, const std::string& path);
InformatronState load_informatron(std::istream& in);
InformatronState load_informatron(const std::string& path);

}  // namespace bookmaker
