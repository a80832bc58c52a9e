#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lipgm/config.hpp"

namespace lipgm {

using Vec = std::vector<double>;

enum class Norm { L1, L2, LInf };

std::string_view to_string(Norm p) noexcept;
/// Accepts "l1", "l2", "linf" (also "1", "2", "inf"); throws MalformedField.
Norm norm_from_string(std::string_view s);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> v, Norm p);
double norm1(std::span<const double> v);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
Vec subtract(std::span<const double> a, std::span<const double> b);

/// Dense row-major matrix. Also used for datasets (rows = observations).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  Vec col(std::size_t c) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Rows [first, first + count).
  Matrix slice_rows(std::size_t first, std::size_t count) const;
  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, std::span<const double> x);

/// Square symmetric matrix; every mutation writes both triangles.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Validates symmetry to `tol` (relative to max |entry|) and averages the two triangles.
  static SymMatrix from_full(const Matrix& m, double tol = 1e-12);
  static SymMatrix from_rows(const std::vector<Vec>& rows, double tol = 1e-12);

  std::size_t dim() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * n_ + j] += v;
    if (i != j) data_[j * n_ + i] += v;
  }

  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }
  Matrix to_matrix() const;

  Vec diag() const;
  double trace() const;
  double frobenius() const;
  double max_abs() const;
  double quad_form(std::span<const double> x) const;
  Vec apply(std::span<const double> x) const;

  /// Entries above the diagonal (i < j), row-major.
  Vec upper_offdiag() const;
  /// Entries on and above the diagonal (i <= j), row-major.
  Vec upper_with_diag() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// <A, B> = sum_ij a_ij b_ij.
double inner(const SymMatrix& a, const SymMatrix& b);
/// x x^T.
SymMatrix outer(std::span<const double> x);
/// Entrywise norm of a symmetric matrix; L2 here is the spectral norm.
double matrix_norm(const SymMatrix& a, Norm p, const NumericConfig& cfg = default_numeric_config());

/// Lower-triangular Cholesky factor with the solves built on it.
class Cholesky {
 public:
  /// Throws NotPositiveDefinite when a pivot is not strictly positive.
  explicit Cholesky(const SymMatrix& a);

  const Matrix& lower() const noexcept { return l_; }
  std::size_t dim() const noexcept { return l_.rows(); }

  double log_det() const;
  Vec solve(std::span<const double> b) const;
  Matrix solve(const Matrix& b) const;
  SymMatrix inverse() const;
  /// Solves L^T x = z.
  Vec solve_upper(std::span<const double> z) const;
  /// Solves L y = b.
  Vec solve_lower(std::span<const double> b) const;

 private:
  Matrix l_;
};

Matrix cholesky(const SymMatrix& a);
double log_det_pd(const SymMatrix& a);
Vec solve_pd(const SymMatrix& a, std::span<const double> b);
Matrix solve_pd(const SymMatrix& a, const Matrix& b);
SymMatrix inverse_pd(const SymMatrix& a);
/// True when the Cholesky factorization succeeds.
bool is_positive_definite(const SymMatrix& a);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue, read off the Jacobi decomposition.
EigenExtremes extreme_eigs(const SymMatrix& a, const NumericConfig& cfg = default_numeric_config());

/// Extreme eigenvalues by power iteration on Gershgorin-shifted copies of `a`.
/// Throws NonConvergence when cfg.eig_max_iter is exhausted.
EigenExtremes power_extreme_eigs(const SymMatrix& a, const NumericConfig& cfg = default_numeric_config());

/// max |eigenvalue|.
double spectral_norm(const SymMatrix& a, const NumericConfig& cfg = default_numeric_config());

/// sum |eigenvalue|, the dual of the spectral norm.
double nuclear_norm(const SymMatrix& a, const NumericConfig& cfg = default_numeric_config());

/// Dual exponent: L1 <-> LInf, L2 <-> L2.
Norm dual(Norm p) noexcept;

struct SymmetricEigen {
  Vec values;      // descending
  Matrix vectors;  // column k pairs with values[k]
};

/// Full decomposition by cyclic Jacobi rotations.
SymmetricEigen symmetric_eigen(const SymMatrix& a, const NumericConfig& cfg = default_numeric_config());

}  // namespace lipgm
