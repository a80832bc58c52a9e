#include "lipgm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lipgm/errors.hpp"
#include "lipgm/rng.hpp"

namespace lipgm {

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation keeps large and tiny entries exact enough.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double y = x / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm(std::span<const double> v, Norm p) {
  switch (p) {
    case Norm::L1:
      return norm1(v);
    case Norm::L2:
      return norm2(v);
    case Norm::LInf:
      return norm_inf(v);
  }
  return 0.0;
}

Vec subtract(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "subtract: length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// ---------------------------------------------------------------- Matrix

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == m.cols(), ErrorCode::DimensionMismatch, "Matrix::from_rows: ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Vec Matrix::col(std::size_t c) const {
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::slice_rows(std::size_t first, std::size_t count) const {
  require(first + count <= rows_, ErrorCode::IndexOutOfRange, "Matrix::slice_rows: range past end");
  Matrix out(count, cols_);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_), count * cols_, out.data_.begin());
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vec matvec(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), ErrorCode::DimensionMismatch, "matvec: dimension mismatch");
  Vec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

// ------------------------------------------------------------- SymMatrix

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::from_full(const Matrix& m, double tol) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "SymMatrix: matrix is not square");
  double scale = 0.0;
  for (double v : m.data()) {
    require(std::isfinite(v), ErrorCode::InvalidArgument, "SymMatrix: non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  SymMatrix s(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s.set(i, i, m(i, i));
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      require(std::abs(m(i, j) - m(j, i)) <= tol * std::max(1.0, scale), ErrorCode::InvalidArgument,
              "SymMatrix: input is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return s;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vec>& rows, double tol) {
  return from_full(Matrix::from_rows(rows), tol);
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(n_, n_);
  std::copy(data_.begin(), data_.end(), m.data().begin());
  return m;
}

Vec SymMatrix::diag() const {
  Vec d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
  return d;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius() const { return norm2(data_); }

double SymMatrix::max_abs() const { return norm_inf(data_); }

double SymMatrix::quad_form(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::DimensionMismatch, "quad_form: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * dot(row(i), x);
  return s;
}

Vec SymMatrix::apply(std::span<const double> x) const {
  require(x.size() == n_, ErrorCode::DimensionMismatch, "apply: dimension mismatch");
  Vec y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vec SymMatrix::upper_offdiag() const {
  Vec out;
  out.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
  return out;
}

Vec SymMatrix::upper_with_diag() const {
  Vec out;
  out.reserve(n_ * (n_ + 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) out.push_back((*this)(i, j));
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  require(o.n_ == n_, ErrorCode::DimensionMismatch, "SymMatrix +=: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  require(o.n_ == n_, ErrorCode::DimensionMismatch, "SymMatrix -=: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "inner: dimension mismatch");
  return dot(a.data(), b.data());
}

SymMatrix outer(std::span<const double> x) {
  SymMatrix m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i; j < x.size(); ++j) m.set(i, j, x[i] * x[j]);
  return m;
}

double matrix_norm(const SymMatrix& a, Norm p, const NumericConfig& cfg) {
  switch (p) {
    case Norm::L1:
      return norm1(a.data());
    case Norm::L2:
      return spectral_norm(a, cfg);
    case Norm::LInf:
      return norm_inf(a.data());
  }
  return 0.0;
}

// -------------------------------------------------------------- Cholesky

Cholesky::Cholesky(const SymMatrix& a) : l_(a.dim(), a.dim()) {
  const std::size_t n = a.dim();
  require(n >= 1, ErrorCode::InvalidArgument, "cholesky: empty matrix");
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      fail(ErrorCode::NotPositiveDefinite, "cholesky: pivot " + std::to_string(j) + " is not positive");
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

double Cholesky::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(l_(i, i));
  return 2.0 * s;
}

Vec Cholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = dim();
  require(b.size() == n, ErrorCode::DimensionMismatch, "cholesky solve: dimension mismatch");
  Vec y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * y[k];
    y[i] = s / l_(i, i);
  }
  return y;
}

Vec Cholesky::solve_upper(std::span<const double> z) const {
  const std::size_t n = dim();
  require(z.size() == n, ErrorCode::DimensionMismatch, "cholesky solve: dimension mismatch");
  Vec x(z.begin(), z.end());
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * x[k];
    x[ii] = s / l_(ii, ii);
  }
  return x;
}

Vec Cholesky::solve(std::span<const double> b) const { return solve_upper(solve_lower(b)); }

Matrix Cholesky::solve(const Matrix& b) const {
  require(b.rows() == dim(), ErrorCode::DimensionMismatch, "cholesky solve: dimension mismatch");
  Matrix x(b.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    const Vec col = solve(b.col(c));
    for (std::size_t r = 0; r < b.rows(); ++r) x(r, c) = col[r];
  }
  return x;
}

SymMatrix Cholesky::inverse() const {
  const std::size_t n = dim();
  Matrix full(n, n);
  Vec e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const Vec col = solve(e);
    e[c] = 0.0;
    for (std::size_t r = 0; r < n; ++r) full(r, c) = col[r];
  }
  SymMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) inv.set(i, j, 0.5 * (full(i, j) + full(j, i)));
  return inv;
}

Matrix cholesky(const SymMatrix& a) { return Cholesky(a).lower(); }

double log_det_pd(const SymMatrix& a) { return Cholesky(a).log_det(); }

Vec solve_pd(const SymMatrix& a, std::span<const double> b) { return Cholesky(a).solve(b); }

Matrix solve_pd(const SymMatrix& a, const Matrix& b) { return Cholesky(a).solve(b); }

SymMatrix inverse_pd(const SymMatrix& a) { return Cholesky(a).inverse(); }

bool is_positive_definite(const SymMatrix& a) {
  try {
    Cholesky chol(a);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotPositiveDefinite) return false;
    throw;
  }
}

// ------------------------------------------------------------ eigensolver

SymmetricEigen symmetric_eigen(const SymMatrix& a, const NumericConfig& cfg) {
  const std::size_t n = a.dim();
  Matrix m = a.to_matrix();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double total = std::max(a.frobenius(), std::numeric_limits<double>::min());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(2.0 * s);
  };

  bool converged = n <= 1 || off_norm() <= cfg.jacobi_tol * total;
  for (int sweep = 0; sweep < cfg.jacobi_max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double app = m(p, p);
        const double aqq = m(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= cfg.jacobi_tol * total;
  }
  if (!converged)
    fail(ErrorCode::NonConvergence,
         "symmetric_eigen: Jacobi sweeps exhausted after " + std::to_string(cfg.jacobi_max_sweeps));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m(x, x) > m(y, y); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = m(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

EigenExtremes extreme_eigs(const SymMatrix& a, const NumericConfig& cfg) {
  const SymmetricEigen eig = symmetric_eigen(a, cfg);
  return {eig.values.back(), eig.values.front()};
}

namespace {

// Dominant eigenvalue of a PSD matrix by power iteration.
double dominant_psd_eigenvalue(const SymMatrix& b, const NumericConfig& cfg, double scale) {
  const std::size_t n = b.dim();
  Rng rng(0x6c69706772616d31ULL);
  Vec v(n);
  for (double& x : v) x = 1.0 + 0.25 * rng.normal();
  const double v0 = norm2(v);
  for (double& x : v) x /= v0;

  double theta = 0.0;
  for (int it = 0; it < cfg.eig_max_iter; ++it) {
    Vec w = b.apply(v);
    const double next = dot(v, w);
    const double wn = norm2(w);
    if (wn == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    if (it > 0 && std::abs(next - theta) <= cfg.eig_tol * std::max(1.0, scale)) return next;
    theta = next;
  }
  fail(ErrorCode::NonConvergence,
       "power_extreme_eigs: no convergence within " + std::to_string(cfg.eig_max_iter) + " iterations");
}

}  // namespace

EigenExtremes power_extreme_eigs(const SymMatrix& a, const NumericConfig& cfg) {
  const std::size_t n = a.dim();
  double radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, norm1(a.row(i)));
  SymMatrix upper = a;
  SymMatrix lower = a * -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    upper.add(i, i, radius);
    lower.add(i, i, radius);
  }
  const double top = dominant_psd_eigenvalue(upper, cfg, radius);
  const double bottom = dominant_psd_eigenvalue(lower, cfg, radius);
  return {radius - bottom, top - radius};
}

double spectral_norm(const SymMatrix& a, const NumericConfig& cfg) {
  const EigenExtremes e = extreme_eigs(a, cfg);
  return std::max(std::abs(e.min), std::abs(e.max));
}


double nuclear_norm(const SymMatrix& a, const NumericConfig& cfg) {
  double s = 0.0;
  for (double v : symmetric_eigen(a, cfg).values) s += std::abs(v);
  return s;
}

std::string_view to_string(Norm p) noexcept {
  switch (p) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::LInf: return "linf";
  }
  return "l2";
}

Norm norm_from_string(std::string_view s) {
  if (s == "l1" || s == "1") return Norm::L1;
  if (s == "l2" || s == "2") return Norm::L2;
  if (s == "linf" || s == "inf") return Norm::LInf;
  fail(ErrorCode::MalformedField, "unknown norm '" + std::string(s) + "' (expected l1, l2 or linf)");
}

Norm dual(Norm p) noexcept {
  switch (p) {
    case Norm::L1: return Norm::LInf;
    case Norm::L2: return Norm::L2;
    case Norm::LInf: return Norm::L1;
  }
  return Norm::L2;
}

}  // namespace lipgm
