#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace mtcp;

namespace {

/// Real CP model with one conjugate pair: A = (a, conj a, r), factors likewise.
CPEstimate conjugate_pair_model(Index p, Index q, Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto cvec = [&](Index m) {
    VectorXcd v(m);
    for (Index i = 0; i < m; ++i) v(i) = {normal(rng), normal(rng)};
    return VectorXcd(v.normalized());
  };
  const auto rvec = [&](Index m) {
    VectorXd v(m);
    for (Index i = 0; i < m; ++i) v(i) = normal(rng);
    return VectorXcd(v.normalized().cast<cplx>());
  };
  CPEstimate est;
  est.d_hat = 3;
  est.A.resize(p, 3);
  est.B.resize(q, 3);
  est.A.col(0) = cvec(p);
  est.A.col(1) = est.A.col(0).conjugate();
  est.A.col(2) = rvec(p);
  est.B.col(0) = cvec(q);
  est.B.col(1) = est.B.col(0).conjugate();
  est.B.col(2) = rvec(q);
  est.factors.resize(n, 3);
  for (Index t = 0; t < n; ++t) {
    est.factors(t, 0) = {normal(rng), normal(rng)};
    est.factors(t, 1) = std::conj(est.factors(t, 0));
    est.factors(t, 2) = normal(rng);
  }
  est.eigenvalues = (VectorXcd(3) << cplx(0.5, 0.3), cplx(0.5, -0.3), cplx(0.2, 0.0)).finished();
  est.pair_map = pair_conjugates(est.eigenvalues);
  assign_kappa(est.pair_map, est.A);
  return est;
}

}  // namespace

TEST(Pairing, Examples) {
  const PairMap m = pair_conjugates((VectorXcd(3) << cplx(1, 2), cplx(1, -2), cplx(3, 0)).finished());
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].first, 0);
  EXPECT_EQ(m.pairs[0].second, 1);
  EXPECT_EQ(m.reals, std::vector<Index>{2});

  const PairMap reals = pair_conjugates((VectorXcd(3) << cplx(1, 0), cplx(-2, 0), cplx(3, 1e-12)).finished());
  EXPECT_TRUE(reals.pairs.empty());
  EXPECT_EQ(reals.reals.size(), 3u);

  try {
    pair_conjugates((VectorXcd(2) << cplx(1, 2), cplx(5, 0)).finished());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmatchedComplexEigenvalue);
  }
}

TEST(Pairing, PositiveImaginaryPartComesFirst) {
  const PairMap m = pair_conjugates((VectorXcd(2) << cplx(1, -2), cplx(1, 2)).finished());
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].first, 1);
  EXPECT_EQ(m.pairs[0].second, 0);
}

TEST(Pairing, KappaFollowsSign) {
  CPEstimate est = conjugate_pair_model(4, 3, 10, 1);
  est.A.col(1) = -est.A.col(1);
  assign_kappa(est.pair_map, est.A);
  EXPECT_EQ(est.pair_map.pairs[0].kappa, -1);
}

TEST(KhatriRao, ColumnIsKroneckerProduct) {
  const MatrixXcd A = MatrixXcd::Random(3, 2);
  const MatrixXcd B = MatrixXcd::Random(4, 2);
  const MatrixXcd H = khatri_rao(A, B);
  ASSERT_EQ(H.rows(), 12);
  for (Index l = 0; l < 2; ++l) {
    const MatrixXcd outer = A.col(l) * B.col(l).transpose();
    EXPECT_LE((H.col(l) - outer.reshaped()).norm(), 1e-14);
  }
}

TEST(RecoverFactors, ExactOnNoiseFreeModel) {
  const auto data = generate_dgp({6, 5, 2, 50, 17, false, 200});
  const MatrixXcd x = recover_factors(data.series, data.truth.A.cast<cplx>(), data.truth.B.cast<cplx>());
  EXPECT_LE((x.real() - data.truth.factors).cwiseAbs().maxCoeff(), 1e-9 * data.truth.factors.cwiseAbs().maxCoeff());
}

TEST(RecoverFactors, RankDeficientLoadings) {
  MatrixXcd A(3, 2);
  A.col(0) = VectorXcd::Ones(3);
  A.col(1) = VectorXcd::Ones(3);
  MatrixXcd B = A;
  try {
    recover_factors(helpers::random_series(3, 3, 5, 1), A, B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficientLoadings);
  }
}

TEST(Realify, SingleRealFactor) {
  const auto data = generate_dgp({5, 4, 1, 40, 2, false, 200});
  const CPEstimate est = refined_estimate(data.series, EstimatorConfig{});
  const RealifiedFactors r = realify(est);
  ASSERT_EQ(r.series.cols(), 1);
  EXPECT_LE((r.series.col(0) - est.factors.col(0).real()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((unrealify(r, r.series) - est.factors).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Realify, ConjugatePairBecomesTwoSeries) {
  const CPEstimate est = conjugate_pair_model(4, 3, 20, 5);
  const RealifiedFactors r = realify(est);
  ASSERT_EQ(r.series.cols(), 3);
  EXPECT_EQ(r.terms.size(), 2u);
  EXPECT_EQ(r.terms[0].kind, RealifiedTerm::Kind::Real);
  EXPECT_EQ(r.terms[1].kind, RealifiedTerm::Kind::Pair);
  EXPECT_EQ(r.series.col(1), est.factors.col(0).real());
  EXPECT_EQ(r.series.col(2), est.factors.col(0).imag());
  const MatrixXcd back = unrealify(r, r.series);
  for (Index t = 0; t < 20; ++t) {
    const MatrixXcd y0 = reconstruct(est.A, est.B, est.factors.row(t).transpose());
    const MatrixXcd y1 = reconstruct(est.A, est.B, back.row(t).transpose());
    EXPECT_LE((y0 - y1).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(y0.imag().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Realify, ImaginaryRealFactorIsRejected) {
  CPEstimate est = conjugate_pair_model(4, 3, 20, 5);
  est.factors(3, 2) += cplx(0.0, 1.0);
  try {
    realify(est);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResidualImaginaryPart);
  }
}

TEST(FittedSeries, RealReconstruction) {
  const CPEstimate est = conjugate_pair_model(4, 3, 20, 8);
  const MatrixSeries fitted = fitted_series(est);
  EXPECT_EQ(fitted.p(), 4);
  EXPECT_EQ(fitted.n(), 20);
  const MatrixXcd y = reconstruct(est.A, est.B, est.factors.row(7).transpose());
  EXPECT_LE((MatrixXd(fitted.slice(7)) - y.real()).cwiseAbs().maxCoeff(), 1e-14);
}
