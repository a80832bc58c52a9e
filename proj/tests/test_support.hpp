#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

#include "lipgm/numerics.hpp"
#include "lipgm/rng.hpp"

namespace lipgm::testing {

inline Vec random_vec(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// A A^T / n + shift I with Gaussian A, eigenvalues bounded below by shift.
inline SymMatrix random_pd(Rng& rng, std::size_t n, double shift = 0.5) {
  Matrix a(n, n);
  for (double& x : a.data()) x = rng.normal();
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double t = 0.0;
      for (std::size_t k = 0; k < n; ++k) t += a(i, k) * a(j, k);
      s.set(i, j, t / static_cast<double>(n) + (i == j ? shift : 0.0));
    }
  return s;
}

inline SymMatrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s.set(i, j, scale * rng.uniform(-1.0, 1.0));
  return s;
}

/// Central differences of f at theta with step h.
inline Vec numeric_gradient(const std::function<double(std::span<const double>)>& f, Vec theta, double h = 1e-5) {
  Vec g(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double t0 = theta[k];
    theta[k] = t0 + h;
    const double up = f(theta);
    theta[k] = t0 - h;
    const double dn = f(theta);
    theta[k] = t0;
    g[k] = (up - dn) / (2.0 * h);
  }
  return g;
}

/// max_k |a_k - b_k| / max(1, |b_k|).
inline double max_rel_error(std::span<const double> a, std::span<const double> b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
  return e;
}

}  // namespace lipgm::testing
