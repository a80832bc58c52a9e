#include "lipgm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lipgm/errors.hpp"
#include "lipgm/rng.hpp"

namespace lipgm {

PcaResult pca(const Matrix& rows, std::size_t k, const NumericConfig& cfg) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  require(n >= 2, ErrorCode::TooFewSamples, "pca: need at least 2 rows");
  require(k >= 1 && k <= d, ErrorCode::InvalidArgument,
          "pca: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(d) + "]");

  PcaResult out;
  out.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) out.mean[c] += rows(r, c);
  for (double& m : out.mean) m /= static_cast<double>(n);

  Matrix centered(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) centered(r, c) = rows(r, c) - out.mean[c];

  SymMatrix cov(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += centered(r, i) * centered(r, j);
      cov.set(i, j, s / static_cast<double>(n));
    }

  const SymmetricEigen eig = symmetric_eigen(cov, cfg);
  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);
  const double top = std::max(eig.values.front(), 0.0);
  std::size_t rank = 0;
  for (double v : eig.values)
    if (top > 0.0 && v > cfg.rank_tol * top) ++rank;
  out.degenerate = rank < k;

  out.basis = Matrix(d, k);
  out.explained_variance.resize(k);
  out.explained_ratio.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    // Sign convention: the largest-magnitude loading is positive.
    std::size_t arg = 0;
    for (std::size_t r = 1; r < d; ++r)
      if (std::abs(eig.vectors(r, c)) > std::abs(eig.vectors(arg, c))) arg = r;
    const double sign = eig.vectors(arg, c) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < d; ++r) out.basis(r, c) = sign * eig.vectors(r, c);
    out.explained_variance[c] = std::max(eig.values[c], 0.0);
    out.explained_ratio[c] = total > 0.0 ? out.explained_variance[c] / total : 0.0;
  }
  out.scores = matmul(centered, out.basis);
  return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

Matrix kmeanspp_init(const Matrix& rows, std::size_t k, Rng& rng) {
  const std::size_t n = rows.rows();
  Matrix centroids(k, rows.cols());
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.index(n);
  chosen[first] = true;
  std::copy(rows.row(first).begin(), rows.row(first).end(), centroids.row(0).begin());

  Vec d2(n);
  for (std::size_t r = 0; r < n; ++r) d2[r] = squared_distance(rows.row(r), centroids.row(0));

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) total += chosen[r] ? 0.0 : d2[r];
    std::size_t pick = n;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      for (std::size_t r = 0; r < n; ++r) {
        if (chosen[r] || d2[r] == 0.0) continue;
        pick = r;
        u -= d2[r];
        if (u < 0.0) break;
      }
    }
    if (pick == n) {
      // Every remaining point coincides with a centroid: take an unchosen index.
      std::vector<std::size_t> free;
      for (std::size_t r = 0; r < n; ++r)
        if (!chosen[r]) free.push_back(r);
      pick = free[rng.index(free.size())];
    }
    chosen[pick] = true;
    std::copy(rows.row(pick).begin(), rows.row(pick).end(), centroids.row(c).begin());
    for (std::size_t r = 0; r < n; ++r) d2[r] = std::min(d2[r], squared_distance(rows.row(r), centroids.row(c)));
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Matrix& rows, std::size_t k, std::uint64_t seed, const NumericConfig& cfg) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  require(n >= 1, ErrorCode::TooFewSamples, "kmeans: no rows");
  require(k >= 1 && k <= n, ErrorCode::InvalidArgument,
          "kmeans: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");

  Rng rng(seed);
  KMeansResult out;
  out.centroids = kmeanspp_init(rows, k, rng);
  out.labels.assign(n, 0);
  Vec dist(n, 0.0);

  // A point only changes cluster when another centroid is strictly closer,
  // so the assignment step never increases the inertia and fixpoints exist.
  auto assign = [&](bool initial) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t best = initial ? 0 : out.labels[r];
      double best_d = squared_distance(rows.row(r), out.centroids.row(best));
      for (std::size_t c = 0; c < k; ++c) {
        const double dc = squared_distance(rows.row(r), out.centroids.row(c));
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      if (best != out.labels[r]) changed = true;
      out.labels[r] = best;
      dist[r] = best_d;
      inertia += best_d;
    }
    out.inertia = inertia;
    out.inertia_history.push_back(inertia);
    return changed;
  };

  auto update = [&] {
    Matrix sums(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = out.labels[r];
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) sums(c, j) += rows(r, j);
    }
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < d; ++j) out.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
        continue;
      }
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t r = 0; r < n; ++r)
        if (!taken[r] && dist[r] > far_d) {
          far_d = dist[r];
          far = r;
        }
      taken[far] = true;
      std::copy(rows.row(far).begin(), rows.row(far).end(), out.centroids.row(c).begin());
      ++out.reseeded;
    }
  };

  assign(true);
  for (int it = 0; it < cfg.kmeans_max_iter; ++it) {
    update();
    out.iterations = it + 1;
    if (!assign(false)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace lipgm
