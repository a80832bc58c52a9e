#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lipgm/clustering.hpp"
#include "lipgm/errors.hpp"
#include "lipgm/numerics.hpp"
#include "lipgm/rng.hpp"
#include "lipgm/stats.hpp"
#include "test_support.hpp"

using namespace lipgm;
using lipgm::testing::random_pd;
using lipgm::testing::random_symmetric;

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  return m;
}

Eigen::VectorXd eigen_values(const SymMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(to_eigen(a)).eigenvalues();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no lipgm::Error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(1).next(), Rng(2).next());
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Rng, UniformAndNormalMoments) {
  Rng r(3);
  const int n = 200000;
  double su = 0.0;
  double sn = 0.0;
  double sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sn / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Rng, IndexCoversRange) {
  Rng r(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[r.index(7)];
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Norms, VectorNorms) {
  const Vec v{3.0, -4.0, 1.0};
  EXPECT_DOUBLE_EQ(norm1(v), 8.0);
  EXPECT_DOUBLE_EQ(norm2(v), std::sqrt(26.0));
  EXPECT_DOUBLE_EQ(norm_inf(v), 4.0);
  EXPECT_DOUBLE_EQ(norm(v, Norm::L1), 8.0);
  EXPECT_EQ(dual(Norm::L1), Norm::LInf);
  EXPECT_EQ(dual(Norm::L2), Norm::L2);
  EXPECT_EQ(dual(Norm::LInf), Norm::L1);
}

TEST(Norms, ParseNames) {
  EXPECT_EQ(norm_from_string("l1"), Norm::L1);
  EXPECT_EQ(norm_from_string("2"), Norm::L2);
  EXPECT_EQ(norm_from_string("inf"), Norm::LInf);
  EXPECT_EQ(norm_from_string(to_string(Norm::LInf)), Norm::LInf);
  EXPECT_EQ(code_of([] { norm_from_string("l3"); }), ErrorCode::MalformedField);
}

TEST(SymMatrix, MutationsKeepSymmetry) {
  SymMatrix a(3);
  a.set(0, 2, 1.5);
  a.add(2, 0, 0.5);
  a.add(1, 1, 2.0);
  EXPECT_EQ(a(0, 2), 2.0);
  EXPECT_EQ(a(2, 0), 2.0);
  EXPECT_EQ(a.trace(), 2.0);
  EXPECT_EQ(a.upper_offdiag(), (Vec{0.0, 2.0, 0.0}));
  EXPECT_EQ(a.upper_with_diag(), (Vec{0.0, 0.0, 2.0, 2.0, 0.0, 0.0}));
}

TEST(SymMatrix, FromFullRejectsAsymmetry) {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  EXPECT_EQ(code_of([&] { SymMatrix::from_full(m); }), ErrorCode::InvalidArgument);
}

TEST(Cholesky, HandExamples) {
  const Cholesky id(SymMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(id.lower()(i, j), i == j ? 1.0 : 0.0);

  const Cholesky d(SymMatrix::from_rows({{4, 0}, {0, 9}}));
  EXPECT_DOUBLE_EQ(d.lower()(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(d.lower()(1, 1), 3.0);
  EXPECT_DOUBLE_EQ(d.lower()(1, 0), 0.0);

  EXPECT_EQ(code_of([] { Cholesky(SymMatrix::from_rows({{1, 2}, {2, 1}})); }), ErrorCode::NotPositiveDefinite);
}

TEST(Cholesky, ReconstructsRandomPd) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.index(8);
    const SymMatrix a = random_pd(rng, n, 0.1);
    const Matrix l = Cholesky(a).lower();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += l(i, k) * l(j, k);
        err += (s - a(i, j)) * (s - a(i, j));
      }
    EXPECT_LE(std::sqrt(err) / a.frobenius(), 1e-10);
  }
}

TEST(LogDet, HandExamplesAndEigenOracle) {
  EXPECT_NEAR(log_det_pd(SymMatrix::identity(5)), 0.0, 1e-15);
  EXPECT_NEAR(log_det_pd(2.0 * SymMatrix::identity(2)), 2.0 * std::log(2.0), 1e-14);
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = random_pd(rng, 4);
    const Eigen::VectorXd ev = eigen_values(a);
    EXPECT_NEAR(log_det_pd(a), ev.array().log().sum(), 1e-10);
  }
}

TEST(Solve, HandExamplesAndResidual) {
  const Vec b{0.3, -1.2, 2.0};
  const Vec x = solve_pd(SymMatrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(x[i], b[i]);
  const Vec y = solve_pd(SymMatrix::diagonal(Vec{2, 4}), Vec{2, 4});
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);

  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.index(7);
    const SymMatrix a = random_pd(rng, n);
    const Vec rhs = lipgm::testing::random_vec(rng, n);
    const Vec r = subtract(a.apply(solve_pd(a, rhs)), rhs);
    EXPECT_LE(norm2(r) / norm2(rhs), 1e-8);
  }
}

TEST(Inverse, MatchesEigen) {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = random_pd(rng, 6);
    const SymMatrix inv = inverse_pd(a);
    const Eigen::MatrixXd ref = to_eigen(a).inverse();
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(inv(i, j), ref(i, j), 1e-10 * std::max(1.0, std::abs(ref(i, j))));
  }
}

TEST(Eigen, ExtremeHandExamples) {
  auto e = extreme_eigs(SymMatrix::diagonal(Vec{1, 2, 3}));
  EXPECT_NEAR(e.min, 1.0, 1e-12);
  EXPECT_NEAR(e.max, 3.0, 1e-12);
  e = extreme_eigs(SymMatrix::identity(4));
  EXPECT_NEAR(e.min, 1.0, 1e-12);
  EXPECT_NEAR(e.max, 1.0, 1e-12);
  e = extreme_eigs(SymMatrix::from_rows({{2, 1}, {1, 2}}));
  EXPECT_NEAR(e.min, 1.0, 1e-12);
  EXPECT_NEAR(e.max, 3.0, 1e-12);
}

TEST(Eigen, SpectralAndNuclearHandExamples) {
  EXPECT_DOUBLE_EQ(spectral_norm(SymMatrix(3)), 0.0);
  EXPECT_NEAR(spectral_norm(SymMatrix::diagonal(Vec{-5, 2})), 5.0, 1e-12);
  EXPECT_NEAR(spectral_norm(SymMatrix::from_rows({{0, 1}, {1, 0}})), 1.0, 1e-12);
  EXPECT_NEAR(nuclear_norm(SymMatrix::diagonal(Vec{-5, 2})), 7.0, 1e-12);
}

TEST(Eigen, JacobiAndPowerIterationMatchEigen) {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.index(9);
    const SymMatrix a = random_symmetric(rng, n);
    const Eigen::VectorXd ev = eigen_values(a);
    const auto j = extreme_eigs(a);
    EXPECT_NEAR(j.min, ev.minCoeff(), 1e-10);
    EXPECT_NEAR(j.max, ev.maxCoeff(), 1e-10);
    const auto p = power_extreme_eigs(a);
    EXPECT_NEAR(p.min, ev.minCoeff(), 1e-6);
    EXPECT_NEAR(p.max, ev.maxCoeff(), 1e-6);
    EXPECT_NEAR(nuclear_norm(a), ev.cwiseAbs().sum(), 1e-10);
  }
}

TEST(Eigen, RayleighQuotientsLieBetweenExtremes) {
  Rng rng(16);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(6);
    const SymMatrix a = random_symmetric(rng, n);
    const auto e = extreme_eigs(a);
    for (int probe = 0; probe < 50; ++probe) {
      Vec x(n);
      for (double& v : x) v = rng.normal();
      const double q = a.quad_form(x) / dot(x, x);
      EXPECT_GE(q, e.min - 1e-8);
      EXPECT_LE(q, e.max + 1e-8);
    }
  }
}

TEST(Eigen, FullDecompositionReconstructs) {
  Rng rng(17);
  const SymMatrix a = random_symmetric(rng, 7);
  const SymmetricEigen eig = symmetric_eigen(a);
  EXPECT_TRUE(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 7; ++k) s += eig.vectors(i, k) * eig.values[k] * eig.vectors(j, k);
      EXPECT_NEAR(s, a(i, j), 1e-12);
    }
}

TEST(Pca, LineInThreeDimensions) {
  Matrix rows(20, 3);
  const Vec dir{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 3; ++c) rows(r, c) = (static_cast<double>(r) - 9.5) * dir[c];
  const PcaResult p = pca(rows, 1);
  EXPECT_FALSE(p.degenerate);
  EXPECT_NEAR(std::abs(p.basis(0, 0) * dir[0] + p.basis(1, 0) * dir[1] + p.basis(2, 0) * dir[2]), 1.0, 1e-10);
}

TEST(Pca, IsotropicSampleSharesVariance) {
  Rng rng(18);
  Matrix rows(10000, 2);
  for (double& x : rows.data()) x = rng.normal();
  const PcaResult p = pca(rows, 2);
  EXPECT_NEAR(p.explained_ratio[0], 0.5, 0.05);
  EXPECT_NEAR(p.explained_ratio[1], 0.5, 0.05);
}

TEST(Pca, FullBasisReconstructsAndIsOrthonormal) {
  Rng rng(19);
  Matrix rows(30, 5);
  for (double& x : rows.data()) x = rng.normal();
  const PcaResult p = pca(rows, 5);
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      double g = 0.0;
      for (std::size_t r = 0; r < 5; ++r) g += p.basis(r, a) * p.basis(r, b);
      EXPECT_NEAR(g, a == b ? 1.0 : 0.0, 1e-8);
    }
  for (std::size_t k = 1; k < 5; ++k) EXPECT_LE(p.explained_variance[k], p.explained_variance[k - 1]);
  for (std::size_t r = 0; r < 30; ++r)
    for (std::size_t c = 0; c < 5; ++c) {
      double x = p.mean[c];
      for (std::size_t k = 0; k < 5; ++k) x += p.scores(r, k) * p.basis(c, k);
      EXPECT_NEAR(x, rows(r, c), 1e-8);
    }
}

TEST(Pca, RankDeficientIsFlagged) {
  Matrix rows(10, 3);
  for (std::size_t r = 0; r < 10; ++r) rows(r, 0) = static_cast<double>(r);
  EXPECT_TRUE(pca(rows, 2).degenerate);
}

TEST(KMeans, SeparatesDistantClouds) {
  Rng rng(20);
  Matrix rows(100, 2);
  std::vector<std::size_t> truth(100);
  for (std::size_t r = 0; r < 100; ++r) {
    truth[r] = r < 50 ? 0 : 1;
    rows(r, 0) = rng.normal() + (truth[r] ? 100.0 : 0.0);
    rows(r, 1) = rng.normal();
  }
  const KMeansResult km = kmeans(rows, 2, 1);
  for (std::size_t r = 1; r < 100; ++r) EXPECT_EQ(km.labels[r] == km.labels[0], truth[r] == truth[0]);
  EXPECT_TRUE(km.converged);
}

TEST(KMeans, SingleClusterIsTheMean) {
  Rng rng(21);
  Matrix rows(25, 3);
  for (double& x : rows.data()) x = rng.normal();
  const KMeansResult km = kmeans(rows, 1, 0);
  for (std::size_t c = 0; c < 3; ++c) {
    const Vec col = rows.col(c);
    EXPECT_NEAR(km.centroids(0, c), std::accumulate(col.begin(), col.end(), 0.0) / 25.0, 1e-12);
  }
}

TEST(KMeans, OneClusterPerRowHasZeroInertia) {
  Rng rng(22);
  Matrix rows(8, 2);
  for (double& x : rows.data()) x = rng.normal();
  EXPECT_NEAR(kmeans(rows, 8, 3).inertia, 0.0, 1e-12);
}

TEST(KMeans, InertiaNeverIncreasesAndIsSeedDeterministic) {
  Rng rng(23);
  Matrix rows(200, 3);
  for (double& x : rows.data()) x = rng.normal();
  for (std::uint64_t s = 0; s < 10; ++s) {
    const KMeansResult a = kmeans(rows, 5, s);
    for (std::size_t i = 1; i < a.inertia_history.size(); ++i)
      EXPECT_LE(a.inertia_history[i], a.inertia_history[i - 1] + 1e-9);
    const KMeansResult b = kmeans(rows, 5, s);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.inertia, b.inertia);
  }
}

TEST(Stats, SpearmanAndMedian) {
  EXPECT_DOUBLE_EQ(*spearman(Vec{1, 2, 3, 4}, Vec{10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(*spearman(Vec{1, 2, 3, 4}, Vec{4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(*spearman(Vec{1, 2, 3, 4}, Vec{1, 3, 2, 4}), 0.8, 1e-15);
  EXPECT_FALSE(spearman(Vec{1, 2, 3}, Vec{5, 5, 5}).has_value());
  EXPECT_FALSE(spearman(Vec{1}, Vec{2}).has_value());
  EXPECT_EQ(average_ranks(Vec{3, 1, 3}), (Vec{2.5, 1.0, 2.5}));
  EXPECT_DOUBLE_EQ(median(Vec{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median(Vec{4, 1, 2, 3}), 2.5);
}
