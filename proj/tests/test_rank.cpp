#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace mtcp;

namespace {

MatrixXd diag(std::initializer_list<double> values) {
  VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  // Rotate so the spectrum is not read off the diagonal directly.
  const MatrixXd U = helpers::random_orthonormal(v.size(), v.size(), 99);
  return U * v.asDiagonal() * U.transpose();
}

}  // namespace

TEST(EigenvalueRatio, EnumeratedRatios) {
  const RankDiagnostics r = estimate_rank(diag({9.0, 3.0, 0.01, 0.009}), 0.0, 0.75);
  ASSERT_EQ(r.R, 3);
  EXPECT_NEAR(r.ratios(0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.ratios(1), 1.0 / 300.0, 1e-12);
  EXPECT_NEAR(r.ratios(2), 0.9, 1e-10);
  EXPECT_EQ(r.d_hat, 2);
}

TEST(EigenvalueRatio, EqualSpectrumTiesToOne) {
  const RankDiagnostics r = estimate_rank(MatrixXd::Identity(5, 5) * 2.0, 0.0, 0.8);
  EXPECT_EQ(r.d_hat, 1);
  for (Index j = 0; j < r.R; ++j) EXPECT_DOUBLE_EQ(r.ratios(j), 1.0);
}

TEST(EigenvalueRatio, RidgeShiftOnSingleSpike) {
  const MatrixXd m = MatrixXd((VectorXd(4) << 5.0, 0.0, 0.0, 0.0).finished().asDiagonal());
  const RankDiagnostics r = estimate_rank(m, 0.01, 0.75);
  ASSERT_EQ(r.R, 3);
  EXPECT_NEAR(r.ratios(0), 0.01 / 5.01, 1e-15);
  EXPECT_DOUBLE_EQ(r.ratios(1), 1.0);
  EXPECT_DOUBLE_EQ(r.ratios(2), 1.0);
  EXPECT_EQ(r.d_hat, 1);
}

TEST(EigenvalueRatio, ZeroDenominatorIsInfinite) {
  const MatrixXd m = MatrixXd((VectorXd(4) << 5.0, 0.0, 0.0, 0.0).finished().asDiagonal());
  const RankDiagnostics r = estimate_rank(m, 0.0, 0.75);
  EXPECT_EQ(r.d_hat, 1);
  EXPECT_DOUBLE_EQ(r.ratios(0), 0.0);
  EXPECT_TRUE(std::isinf(r.ratios(1)));
}

TEST(EigenvalueRatio, AllZeroSpectrum) {
  try {
    estimate_rank(MatrixXd::Zero(4, 4), 0.0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AllZeroSpectrum);
  }
  EXPECT_EQ(estimate_rank(MatrixXd::Zero(4, 4), 0.1, 0.5).d_hat, 1);
}

TEST(EigenvalueRatio, SearchBoundForcedToOne) {
  const RankDiagnostics r = estimate_rank(diag({3.0, 2.0, 1.0}), 0.0, 0.2);
  EXPECT_EQ(r.R, 1);
  EXPECT_EQ(r.d_hat, 1);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(EigenvalueRatio, UsesMinDimensionForBound) {
  const RankDiagnostics r = estimate_rank(MatrixXd::Identity(32, 32), 0.0, 0.5, 4);
  EXPECT_EQ(r.R, 2);
}

TEST(RankSource, RuleOnShape) {
  static_assert(select_rank_source(8, 8) == RankSource::M1);
  EXPECT_EQ(select_rank_source(4, 32), RankSource::M2);
  EXPECT_EQ(select_rank_source(32, 4), RankSource::M1);
}

TEST(BuildM, SingleLagSharesNonzeroSpectrum) {
  const MatrixSeries s = helpers::random_series(5, 3, 40, 13);
  const VectorXd xi = xi_pca(s).values;
  const LagCovarianceSums sums = build_M(s, xi, 1, 0.0);
  const VectorXd e1 = linalg::symmetric_spectrum(sums.M1).values;
  const VectorXd e2 = linalg::symmetric_spectrum(sums.M2).values;
  EXPECT_LE((e1.head(3) - e2).cwiseAbs().maxCoeff(), 1e-12 * e1(0));
  EXPECT_LE(e1.tail(2).cwiseAbs().maxCoeff(), 1e-12 * e1(0));
}

TEST(BuildM, SymmetricPositiveSemidefinite) {
  const MatrixSeries s = helpers::random_series(3, 2, 20, 14);
  const LagCovarianceSums sums = build_M(s, xi_random(s, 3).values, 3, 0.0);
  EXPECT_LE((sums.M1 - sums.M1.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(linalg::symmetric_spectrum(sums.M1).values.minCoeff(), -1e-12);
  EXPECT_GE(linalg::symmetric_spectrum(sums.M2).values.minCoeff(), -1e-12);
  EXPECT_EQ(sums.sigma.size(), 3u);
}

TEST(BuildM, ConstantSeriesGivesZero) {
  const MatrixSeries s(3, 2, MatrixXd::Constant(6, 20, 1.0));
  const LagCovarianceSums sums = build_M(s, VectorXd::LinSpaced(20, 0, 1), 2, 0.0);
  EXPECT_TRUE(sums.M1.isZero(0.0));
  EXPECT_TRUE(sums.M2.isZero(0.0));
}

TEST(BuildM, LagCountBounds) {
  const MatrixSeries s = helpers::random_series(2, 2, 6, 1);
  const VectorXd xi = xi_random(s, 1).values;
  EXPECT_NO_THROW(build_M(s, xi, 4, 0.0));
  EXPECT_THROW(build_M(s, xi, 5, 0.0), Error);
  EXPECT_THROW(build_M(s, xi, 0, 0.0), Error);
}
