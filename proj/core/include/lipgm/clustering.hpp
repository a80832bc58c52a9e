#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lipgm/config.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

struct PcaResult {
  Matrix basis;              // dim x k, orthonormal columns
  Matrix scores;             // rows x k, centered data projected on the basis
  Vec mean;                  // column means
  Vec explained_variance;    // eigenvalues of the centered covariance, descending
  Vec explained_ratio;       // explained_variance / total variance
  bool degenerate = false;   // covariance rank < k; trailing basis columns are an arbitrary completion
};

/// Principal components of the column-centered covariance (1/n normalization).
PcaResult pca(const Matrix& rows, std::size_t k, const NumericConfig& cfg = default_numeric_config());

struct KMeansResult {
  std::vector<std::size_t> labels;
  Matrix centroids;            // k x dim
  double inertia = 0.0;        // sum of squared distances to the assigned centroid
  Vec inertia_history;         // inertia after every assignment step
  int iterations = 0;
  bool converged = false;      // assignment reached a fixpoint before the iteration cap
  int reseeded = 0;            // empty clusters moved to the farthest point
};

/// Lloyd iterations from a k-means++ start drawn with `seed`.
KMeansResult kmeans(const Matrix& rows, std::size_t k, std::uint64_t seed,
                    const NumericConfig& cfg = default_numeric_config());

}  // namespace lipgm
