#include <gtest/gtest.h>

#include <cmath>

#include "cjfeast/error.hpp"
#include "cjfeast/oracle.hpp"
#include "cjfeast/projector.hpp"
#include "cjfeast/random.hpp"
#include "planted.hpp"

namespace cjfeast {
namespace {

struct DenseCase {
  SparseMatrix a;
  double eta;
};

DenseCase random_case() {
  Rng rng = substream(4, 0);
  const DenseMatrix d = gaussian_matrix(9, 6, rng);
  const double eta = 1.05 * spectral_norm(d);
  return {to_sparse(d), eta};
}

DenseMatrix dense_sa(const SparseMatrix& a) {
  const DenseMatrix d = to_dense(a);
  const std::size_t m = a.rows(), n = a.cols();
  DenseMatrix sa(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sa(j, n + i) = d(i, j);
      sa(n + i, j) = d(i, j);
    }
  }
  return sa;
}

TEST(ApplyFilterBlock, DegreeZeroIdentityFilter) {
  const auto a = testing::diagonal_matrix(4, 3, {2.0, 1.0, 0.5});
  const auto f = ChebJacksonFilter::build({0.5, 2.0}, {2.0, 0.5}, 0, Variant::CrossProduct);
  MvCounter c;
  const FilteredOperator op(a, f, c);
  Rng rng = substream(1, 0);
  const DenseMatrix x = gaussian_matrix(3, 2, rng);
  EXPECT_EQ(max_abs(subtract(apply_filter_block(op, x), x)), 0.0);
  EXPECT_EQ(c.count(), 0u);
}

TEST(ApplyFilterBlock, FullIntervalFilterReproducesInput) {
  const auto a = testing::diagonal_matrix(4, 3, {2.0, 1.0, 0.5});
  const auto f = ChebJacksonFilter::build({0.5, 2.0}, {2.0, 0.5}, 30, Variant::CrossProduct);
  MvCounter c;
  const FilteredOperator op(a, f, c);
  Rng rng = substream(2, 0);
  const DenseMatrix x = gaussian_matrix(3, 2, rng);
  EXPECT_LE(max_abs(subtract(apply_filter_block(op, x), x)), 1e-13);
}

TEST(ApplyFilterBlock, MatchesDenseMatrixFunction) {
  const auto [a, eta] = random_case();
  const auto f = ChebJacksonFilter::build({0.4 * eta, 0.8 * eta}, {eta, 0.0}, 60, Variant::Augmented);
  MvCounter c;
  const FilteredOperator op(a, f, c);
  const DenseMatrix p = apply_filter_block(op, DenseMatrix::identity(15));
  EXPECT_EQ(c.count(), 2u * 60u * 15u);

  const auto e = symmetric_eigen(dense_sa(a));
  DenseMatrix scaled = e.vectors;
  for (std::size_t j = 0; j < 15; ++j) {
    const double g = f(e.values[j]);
    for (double& v : scaled.col(j)) v *= g;
  }
  const DenseMatrix oracle = multiply(scaled, transpose(e.vectors));
  EXPECT_LE(max_abs(subtract(p, oracle)), 1e-10);

  // Eigenvalues of the assembled projector are the scalar filter values.
  const auto pe = symmetric_eigen(p);
  std::vector<double> expect;
  for (double lambda : e.values) expect.push_back(f(lambda));
  expect = testing::descending(expect);
  for (std::size_t i = 0; i < 15; ++i) EXPECT_NEAR(pe.values[i], expect[i], 1e-12);

  EXPECT_LE(max_abs(subtract(p, transpose(p))), 1e-12 * spectral_norm(p));
  for (double v : pe.values) {
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(ApplyFilterBlock, SelfAdjoint) {
  const auto [a, eta] = random_case();
  for (Variant v : {Variant::Augmented, Variant::CrossProduct}) {
    const auto f = ChebJacksonFilter::build({0.3 * eta, 0.7 * eta}, {eta, 0.0}, 45, v);
    MvCounter c;
    const FilteredOperator op(a, f, c);
    Rng rng = substream(5, static_cast<std::uint64_t>(v));
    const DenseMatrix xy = gaussian_matrix(op.dimension(), 2, rng);
    const DenseMatrix pxy = apply_filter_block(op, xy);
    EXPECT_NEAR(dot(pxy.col(0), xy.col(1)), dot(xy.col(0), pxy.col(1)), 1e-11);
  }
}

TEST(ApplyFilterBlock, MvAccountingBothVariants) {
  const auto a = testing::planted_matrix(20, 12, {1.0, 0.8, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.001}, 3);
  for (Variant v : {Variant::Augmented, Variant::CrossProduct}) {
    for (int d : {1, 2, 17}) {
      const auto f = ChebJacksonFilter::build({0.3, 0.7}, {1.05, 0.0}, d, v);
      MvCounter c;
      const FilteredOperator op(a, f, c);
      Rng rng = substream(6, 0);
      apply_filter_block(op, gaussian_matrix(op.dimension(), 5, rng));
      EXPECT_EQ(c.count(), 2u * static_cast<unsigned>(d) * 5u);
    }
  }
}

TEST(ApplyFilterBlock, ThreadedMatchesSerialBitwise) {
  const auto a = testing::planted_matrix(30, 20, std::vector<double>(20, 0.5), 8);
  const auto f = ChebJacksonFilter::build({0.3, 0.7}, {1.05, 0.0}, 25, Variant::Augmented);
  MvCounter c1, c3;
  Rng rng = substream(7, 0);
  const DenseMatrix x = gaussian_matrix(50, 7, rng);
  const DenseMatrix serial = apply_filter_block(FilteredOperator(a, f, c1), x, 1);
  const DenseMatrix threaded = apply_filter_block(FilteredOperator(a, f, c3), x, 3);
  EXPECT_EQ(max_abs(subtract(serial, threaded)), 0.0);
  EXPECT_EQ(c1.count(), c3.count());
}

TEST(ApplyFilterBlock, DimensionMismatchThrows) {
  const auto a = testing::diagonal_matrix(4, 3, {1, 1, 1});
  const auto f = ChebJacksonFilter::build({0.3, 0.7}, {1.05, 0.0}, 5, Variant::Augmented);
  MvCounter c;
  const FilteredOperator op(a, f, c);
  EXPECT_EQ(op.dimension(), 7u);
  EXPECT_THROW(apply_filter_block(op, DenseMatrix(3, 2)), DimensionError);
}

TEST(GammaSpectrum, SeparationAboveThreshold) {
  const auto a = testing::diagonal_matrix(3, 3, {0.9, 0.5, 0.1});
  const SpectralBounds eta{1.0, 0.0};
  const auto probe = ChebJacksonFilter::build({0.4, 0.6}, eta, 2, Variant::Augmented);
  const double delta = delta_min(build_reference(a), probe);
  const int d = static_cast<int>(std::ceil(separation_degree_threshold(delta))) + 10;
  const auto f = ChebJacksonFilter::build({0.4, 0.6}, eta, d, Variant::Augmented);
  const auto g = projector_gamma_spectrum(a, f);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_GT(g[0], 0.75);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i], 0.25);
}

TEST(GammaSpectrum, EndpointHitIsNearHalf) {
  const auto a = testing::diagonal_matrix(3, 3, {0.9, 0.5, 0.1});
  const auto f = ChebJacksonFilter::build({0.5, 0.7}, {1.0, 0.0}, 300, Variant::Augmented);
  const auto g = projector_gamma_spectrum(a, f);
  EXPECT_GT(g[0], 0.25);
  EXPECT_LT(g[0], 0.75);
  EXPECT_LT(g[1], 0.25);
}

TEST(GammaSpectrum, CrossProductCountsZeros) {
  const auto a = testing::diagonal_matrix(2, 4, {0.9, 0.5});
  const auto f = ChebJacksonFilter::build({0.4, 0.6}, {1.0, 0.0}, 50, Variant::CrossProduct);
  EXPECT_EQ(projector_gamma_spectrum(a, f).size(), 4u);
  const auto fa = ChebJacksonFilter::build({0.4, 0.6}, {1.0, 0.0}, 50, Variant::Augmented);
  EXPECT_EQ(projector_gamma_spectrum(a, fa).size(), 6u);
}

TEST(GammaSpectrum, SizeGuard) {
  const SparseMatrix big = SparseMatrix::from_triplets(1500, 600, {});
  const auto f = ChebJacksonFilter::build({0.4, 0.6}, {1.0, 0.0}, 5, Variant::Augmented);
  EXPECT_THROW(projector_gamma_spectrum(big, f), PreconditionError);
}

}  // namespace
}  // namespace cjfeast
