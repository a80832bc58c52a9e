#include "lipgm/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "lipgm/errors.hpp"

namespace lipgm {

namespace {

double soft(double v, double thr) {
  if (v > thr) return v - thr;
  if (v < -thr) return v + thr;
  return 0.0;
}

// Min-norm element of grad + lambda * d|theta| at one coordinate.
double subgradient_residual(double grad, double theta, double lambda) {
  if (theta > 0.0) return std::abs(grad + lambda);
  if (theta < 0.0) return std::abs(grad - lambda);
  return std::max(std::abs(grad) - lambda, 0.0);
}

void require_fit_config(const FitConfig& cfg, const char* what) {
  require(cfg.lambda >= 0.0 && std::isfinite(cfg.lambda), ErrorCode::InvalidArgument,
          std::string(what) + ": lambda must be finite and >= 0");
  require(cfg.tol > 0.0, ErrorCode::InvalidArgument, std::string(what) + ": tol must be > 0");
  require(cfg.max_iter >= 1, ErrorCode::InvalidArgument, std::string(what) + ": max_iter must be >= 1");
}

}  // namespace

SymMatrix empirical_covariance(const Matrix& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  require(n >= 2, ErrorCode::TooFewSamples, "empirical_covariance: need at least 2 rows, got " + std::to_string(n));
  Vec mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) mean[c] += data(r, c);
  for (double& m : mean) m /= static_cast<double>(n);
  SymMatrix s(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += (data(r, i) - mean[i]) * (data(r, j) - mean[j]);
      s.set(i, j, acc / static_cast<double>(n));
    }
  return s;
}

TikhonovFit tikhonov(const SymMatrix& s, double lambda, const NumericConfig& cfg) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::InvalidArgument, "tikhonov: lambda must be > 0");
  SymMatrix sigma = s;
  for (std::size_t i = 0; i < sigma.dim(); ++i) sigma.add(i, i, lambda);
  const double top = std::max(extreme_eigs(s, cfg).max, 0.0);
  SymMatrix omega = inverse_pd(sigma);
  return {std::move(sigma), GaussianModel(std::move(omega), 1.0 / (top + lambda), 1.0 / lambda, cfg)};
}

// ------------------------------------------------------- graphical lasso

double glasso_objective(const SymMatrix& s, const SymMatrix& omega, double lambda) {
  double pen = 0.0;
  for (std::size_t i = 0; i < omega.dim(); ++i)
    for (std::size_t j = 0; j < omega.dim(); ++j)
      if (i != j) pen += std::abs(omega(i, j));
  return log_det_pd(omega) - inner(s, omega) - lambda * pen;
}

double glasso_kkt_residual(const SymMatrix& s, const SymMatrix& omega, double lambda) {
  const SymMatrix g = inverse_pd(omega) - s;
  double r = 0.0;
  for (std::size_t i = 0; i < omega.dim(); ++i)
    for (std::size_t j = i; j < omega.dim(); ++j)
      r = std::max(r, i == j ? std::abs(g(i, i)) : subgradient_residual(-g(i, j), omega(i, j), lambda));
  return r;
}

GlassoFit graphical_lasso(const SymMatrix& s, const FitConfig& cfg) {
  require_fit_config(cfg, "graphical_lasso");
  const std::size_t n = s.dim();
  const double lambda = cfg.lambda;
  Vec d0(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(s(i, i) + lambda > 0.0, ErrorCode::DegenerateData,
            "graphical_lasso: zero variance at column " + std::to_string(i) + " with lambda = 0");
    d0[i] = 1.0 / (s(i, i) + lambda);
  }
  SymMatrix omega = SymMatrix::diagonal(d0);
  std::optional<Cholesky> chol(std::in_place, omega);

  // Smooth part g = -log det + <S, Omega>; its gradient is S - Omega^{-1}.
  auto smooth = [&](const Cholesky& c, const SymMatrix& w) { return -c.log_det() + inner(s, w); };
  auto penalty = [&](const SymMatrix& w) {
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) p += 2.0 * std::abs(w(i, j));
    return lambda * p;
  };

  bool converged = false;
  double kkt_residual = 0.0;
  double g_val = smooth(*chol, omega);
  std::vector<double> objective{-(g_val + penalty(omega))};
  double step = 1.0;
  SymMatrix prev_grad;
  SymMatrix prev_delta;
  bool have_prev = false;

  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const SymMatrix sigma = chol->inverse();
    const SymMatrix grad = s - sigma;

    double kkt = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        kkt = std::max(kkt, i == j ? std::abs(grad(i, i)) : subgradient_residual(grad(i, j), omega(i, j), lambda));
    kkt_residual = kkt;
    if (kkt <= cfg.tol) {
      converged = true;
      break;
    }

    if (have_prev) {
      const SymMatrix dg = grad - prev_grad;
      const double sy = inner(prev_delta, dg);
      if (sy > 0.0) step = std::clamp(inner(prev_delta, prev_delta) / sy, 1e-12, 1e12);
    }

    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      SymMatrix cand(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          const double v = omega(i, j) - step * grad(i, j);
          cand.set(i, j, i == j ? v : soft(v, step * lambda));
        }
      std::optional<Cholesky> cc;
      try {
        cc.emplace(cand);
      } catch (const Error&) {
        step *= 0.5;
        continue;
      }
      const SymMatrix delta = cand - omega;
      const double g_new = smooth(*cc, cand);
      const double model = g_val + inner(grad, delta) + inner(delta, delta) / (2.0 * step);
      const double f_new = -(g_new + penalty(cand));
      if (g_new <= model + 1e-12 * std::max(1.0, std::abs(g_val)) && f_new >= objective.back() - 1e-12) {
        prev_grad = grad;
        prev_delta = delta;
        have_prev = true;
        omega = std::move(cand);
        chol = std::move(cc);
        g_val = g_new;
        objective.push_back(f_new);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable ascent step is left
  }
  if (!converged) kkt_residual = glasso_kkt_residual(s, omega, lambda);
  return {GaussianModel::with_tight_bounds(std::move(omega)), converged, it, kkt_residual, std::move(objective)};
}

// --------------------------------------------------------- pseudolikelihood

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Local fields h = X J for the symmetric, zero-diagonal J encoded by theta.
Matrix local_fields(const Matrix& data, std::span<const double> theta) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  Matrix h(n, p);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      const double jab = theta[pair_index(a, b, p)];
      if (jab == 0.0) continue;
      for (std::size_t r = 0; r < n; ++r) {
        h(r, a) += jab * data(r, b);
        h(r, b) += jab * data(r, a);
      }
    }
  return h;
}

double pl_smooth(const Matrix& data, std::span<const double> theta) {
  const Matrix h = local_fields(data, theta);
  double loss = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t i = 0; i < data.cols(); ++i) loss += softplus(-2.0 * data(r, i) * h(r, i));
  return loss / static_cast<double>(data.rows());
}

void require_spin_data(const Matrix& data) {
  require(data.cols() >= 2, ErrorCode::InvalidArgument, "ising_pseudolikelihood: need at least 2 columns");
  require(data.rows() >= 1, ErrorCode::TooFewSamples, "ising_pseudolikelihood: no rows");
  for (double v : data.data())
    require(v == 1.0 || v == -1.0, ErrorCode::InvalidArgument, "ising_pseudolikelihood: entries must be -1 or +1");
}

}  // namespace

double pseudolikelihood_objective(const Matrix& data, std::span<const double> theta, double lambda) {
  require(theta.size() == data.cols() * (data.cols() - 1) / 2, ErrorCode::DimensionMismatch,
          "pseudolikelihood_objective: wrong number of couplings");
  return pl_smooth(data, theta) + lambda * norm1(theta);
}

Vec pseudolikelihood_grad(const Matrix& data, std::span<const double> theta) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  require(theta.size() == p * (p - 1) / 2, ErrorCode::DimensionMismatch,
          "pseudolikelihood_grad: wrong number of couplings");
  const Matrix h = local_fields(data, theta);
  // d/dh_ri of softplus(-2 x_ri h_ri) = -2 x_ri sigmoid(-2 x_ri h_ri)
  Matrix c(n, p);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < p; ++i) c(r, i) = -2.0 * data(r, i) * sigmoid(-2.0 * data(r, i) * h(r, i));
  Vec g(theta.size(), 0.0);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += c(r, a) * data(r, b) + c(r, b) * data(r, a);
      g[pair_index(a, b, p)] = acc / static_cast<double>(n);
    }
  return g;
}

IsingFit ising_pseudolikelihood(const Matrix& data, const FitConfig& cfg) {
  require_fit_config(cfg, "ising_pseudolikelihood");
  require_spin_data(data);
  const std::size_t p = data.cols();
  const std::size_t k = p * (p - 1) / 2;
  const double lambda = cfg.lambda;
  Vec theta(k, 0.0);
  double f_val = pl_smooth(data, theta);

  bool converged = false;
  double optimality = 0.0;
  std::vector<double> objective{f_val};
  double step = 1.0;
  Vec prev_grad;
  Vec prev_delta;

  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const Vec grad = pseudolikelihood_grad(data, theta);
    double opt = 0.0;
    for (std::size_t q = 0; q < k; ++q) opt = std::max(opt, subgradient_residual(grad[q], theta[q], lambda));
    optimality = opt;
    if (opt <= cfg.tol) {
      converged = true;
      break;
    }
    if (!prev_grad.empty()) {
      const Vec dg = subtract(grad, prev_grad);
      const double sy = dot(prev_delta, dg);
      if (sy > 0.0) step = std::clamp(dot(prev_delta, prev_delta) / sy, 1e-12, 1e12);
    }
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      Vec cand(k);
      for (std::size_t q = 0; q < k; ++q) cand[q] = soft(theta[q] - step * grad[q], step * lambda);
      const Vec delta = subtract(cand, theta);
      const double f_new = pl_smooth(data, cand);
      const double model = f_val + dot(grad, delta) + dot(delta, delta) / (2.0 * step);
      const double obj_new = f_new + lambda * norm1(cand);
      if (f_new <= model + 1e-12 * std::max(1.0, std::abs(f_val)) && obj_new <= objective.back() + 1e-12) {
        prev_grad = grad;
        prev_delta = delta;
        theta = std::move(cand);
        f_val = f_new;
        objective.push_back(obj_new);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return {DiscreteFactorGraph::ising(p, theta), converged, it, optimality, std::move(objective)};
}

double gaussian_test_ll(const GaussianModel& m, const Matrix& data) {
  require(data.rows() >= 1, ErrorCode::TooFewSamples, "gaussian_test_ll: no rows");
  require(data.cols() == m.dim(), ErrorCode::DimensionMismatch, "gaussian_test_ll: column count != model dim");
  double s = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) s += ggm_log_density(m, data.row(r));
  return s / static_cast<double>(data.rows());
}

double ising_test_ll(const DiscreteFactorGraph& m, const Matrix& data) {
  require(data.rows() >= 1, ErrorCode::TooFewSamples, "ising_test_ll: no rows");
  require(data.cols() == m.num_vars(), ErrorCode::DimensionMismatch, "ising_test_ll: column count != model dim");
  double s = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) s += dfg_log_likelihood(m, data.row(r));
  return s / static_cast<double>(data.rows());
}

}  // namespace lipgm
