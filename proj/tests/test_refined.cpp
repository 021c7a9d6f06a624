#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace mtcp;

TEST(Projection, DiagonalM1PicksFirstAxis) {
  const MatrixSeries s = helpers::random_series(3, 3, 10, 1);
  const MatrixXd M1 = MatrixXd((VectorXd(3) << 4.0, 1.0, 0.0).finished().asDiagonal());
  const MatrixXd M2 = MatrixXd((VectorXd(3) << 0.0, 2.0, 1.0).finished().asDiagonal());
  const Projection proj = project(s, M1, M2, 1);
  EXPECT_LE((proj.P - MatrixXd::Identity(3, 1)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(proj.Q(1, 0)), 1.0, 1e-15);
}

TEST(Projection, ShapesAndOrthonormality) {
  const MatrixSeries s = helpers::random_series(7, 5, 30, 2);
  const LagCovarianceSums sums = build_M(s, xi_pca(s).values, 3, 0.0);
  for (Index d = 1; d <= 4; ++d) {
    const Projection proj = project(s, sums.M1, sums.M2, d);
    EXPECT_EQ(proj.Z.p(), d);
    EXPECT_EQ(proj.Z.q(), d);
    EXPECT_EQ(proj.Z.n(), 30);
    EXPECT_LE((proj.P.transpose() * proj.P - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((proj.Q.transpose() * proj.Q - MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Projection, CollapsedGapWarns) {
  const MatrixSeries s = helpers::random_series(3, 3, 10, 1);
  const Projection proj = project(s, MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3), 1);
  EXPECT_FALSE(proj.warnings.empty());
}

TEST(ReducedProblem, SingularGram) {
  MatrixXd S1 = MatrixXd::Zero(2, 2);
  S1(0, 0) = 1.0;
  try {
    solve_projected(S1, MatrixXd::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularGram);
  }
}

TEST(ReducedProblem, DiagonalizesTheLagTwoOperator) {
  // S1 = U D V^{-1}, S2 = U D L V^{-1}: J1 = V L V^{-1}.
  const MatrixXd U = helpers::random_orthonormal(3, 3, 3) + 0.2 * MatrixXd::Identity(3, 3);
  const MatrixXd V = helpers::random_orthonormal(3, 3, 4) + 0.3 * MatrixXd::Identity(3, 3);
  const VectorXd D = (VectorXd(3) << 2.0, 1.0, 0.5).finished();
  const VectorXd L = (VectorXd(3) << 0.9, -0.6, 0.3).finished();
  const MatrixXd Vi = V.inverse();
  const MatrixXd S1 = U * D.asDiagonal() * Vi;
  const MatrixXd S2 = U * (D.array() * L.array()).matrix().asDiagonal() * Vi;
  const ReducedSolution sol = solve_projected(S1, S2);
  EXPECT_NEAR(sol.eigenvalues(0).real(), 0.9, 1e-10);
  EXPECT_NEAR(sol.eigenvalues(1).real(), 0.3, 1e-10);
  EXPECT_NEAR(sol.eigenvalues(2).real(), -0.6, 1e-10);
  const MatrixXcd identity = sol.U_inv * sol.U;
  EXPECT_LE((identity - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RefinedEstimate, NoiseFreeThreeFactorsExact) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto data = generate_dgp({10, 8, 3, 200, seed, false, 200});
    const CPEstimate est = refined_estimate(data.series, EstimatorConfig{});
    ASSERT_EQ(est.d_hat, 3);
    EXPECT_LE(rho2(data.truth.A, est.A), 1e-6) << seed;
    EXPECT_LE(rho2(data.truth.B, est.B), 1e-6) << seed;
    for (Index l = 0; l < 3; ++l) {
      EXPECT_NEAR(est.A.col(l).norm(), 1.0, 1e-12);
      EXPECT_NEAR(est.B.col(l).norm(), 1.0, 1e-12);
    }
  }
}

TEST(RefinedEstimate, RandomProxyAndThresholdPath) {
  const auto data = generate_dgp({8, 8, 2, 300, 21, true, 200});
  EstimatorConfig config;
  config.proxy = ProxyStrategy::Random;
  config.seed = 5;
  config.delta2 = 1e-6;
  const CPEstimate a = refined_estimate(data.series, config);
  const CPEstimate b = refined_estimate(data.series, config);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.d_hat, 2);
}

TEST(RefinedEstimate, OrderSelectionMatchesFullEstimate) {
  const auto data = generate_dgp({12, 6, 2, 300, 4, true, 200});
  const EstimatorConfig config;
  const ProxySeries xi = make_proxy(data.series, config.proxy, config.seed);
  EXPECT_EQ(estimate_order(data.series, xi, Method::Refined, config).d_hat,
            refined_estimate(data.series, xi, config).d_hat);
  EXPECT_EQ(estimate_order(data.series, xi, Method::Direct, config).d_hat,
            direct_estimate(data.series, xi, config).d_hat);
}

TEST(RefinedEstimate, DimensionOneCertainty) {
  BenchmarkOptions options;
  options.reps = 200;
  options.seed = 3;
  for (Method m : {Method::Direct, Method::Refined}) {
    const auto rows = run_rank_benchmark({{8, 8, 1, 300}}, {m, 3, ProxyStrategy::Pca}, options);
    EXPECT_EQ(rows[0].hits, 200) << to_string(m);
  }
}
