#ifndef MTCP_REFINED_HPP
#define MTCP_REFINED_HPP

#include "mtcp/direct.hpp"

namespace mtcp {

/// Leading eigenspaces of M1 and M2 and the series projected onto them.
struct Projection {
  MatrixXd P;  // p x d, orthonormal
  MatrixXd Q;  // q x d, orthonormal
  MatrixSeries Z;
  std::vector<std::string> warnings;
};

inline constexpr double kEigenGapRelative = 1e-10;

/// Z_t = P'Y_tQ with P, Q the top-d eigenvectors of M1, M2 (sign: largest entry positive).
inline Projection project(const MatrixSeries& series, const MatrixXd& M1, const MatrixXd& M2,
                          Index d_hat) {
  if (d_hat < 1 || d_hat > std::min(series.p(), series.q()) - 1) {
    throw Error(ErrorKind::InvalidArgument, "d_hat must lie in [1, min(p,q) - 1]");
  }
  Projection out;
  const auto take = [&](const MatrixXd& m, const char* name) {
    const auto spectrum = linalg::symmetric_spectrum(m);
    const double gap = spectrum.values(d_hat - 1) - spectrum.values(d_hat);
    if (gap < kEigenGapRelative * spectrum.values(0)) {
      out.warnings.push_back(std::string("EigenGapCollapse: ") + name +
                             " eigenvalues d and d+1 nearly coincide");
    }
    return MatrixXd(spectrum.vectors.leftCols(d_hat));
  };
  out.P = take(M1, "M1");
  out.Q = take(M2, "M2");
  out.Z = project_series(series, out.P, out.Q);
  return out;
}

inline constexpr double kMaxGramCondition = 1e12;

/// Small d x d problem of the refined estimator, kept separate so each stage can be checked.
struct ReducedSolution {
  VectorXcd eigenvalues;  // of J1, sorted (Re, Im) descending
  MatrixXcd V_inv_rows;   // column l = v^l, eigenvector of J1
  MatrixXcd U;            // columns u_l
  MatrixXcd U_inv;        // rows u^l
  MatrixXcd V;            // columns v_l
};

/// J1 = (S1'S1)^{-1} S1'S2; u_l = S1 v^l/|.|, (u^l)' = rows of U^{-1}, v_l = S1' u^l/|.|.
inline ReducedSolution solve_projected(const MatrixXd& S1, const MatrixXd& S2) {
  const MatrixXd gram = S1.transpose() * S1;
  if (linalg::condition_number(gram) > kMaxGramCondition) {
    throw Error(ErrorKind::SingularGram, "S1'S1 is numerically singular");
  }
  const MatrixXd J1 = gram.partialPivLu().solve(S1.transpose() * S2);
  EigenPairs eig = detail::nonsymmetric_eigenpairs(J1);

  ReducedSolution out;
  out.eigenvalues = std::move(eig.values);
  out.V_inv_rows = std::move(eig.vectors);
  out.U = normalized_images(S1, out.V_inv_rows);
  Eigen::FullPivLU<MatrixXcd> lu(out.U);
  if (!lu.isInvertible()) throw Error(ErrorKind::RankDeficientLoadings, "U is singular");
  out.U_inv = lu.inverse();
  out.V = normalized_images(S1.transpose(), out.U_inv.transpose());
  return out;
}

/// Refined estimator: rank from M1/M2, projection to d x d, full-rank eigenproblem.
inline CPEstimate refined_estimate(const MatrixSeries& series, const ProxySeries& xi,
                                   const EstimatorConfig& config) {
  const LagCovarianceSums sums = build_M(series, xi.values, config.K, config.delta1);
  const RankSource source = select_rank_source(series.p(), series.q());
  RankDiagnostics rank = estimate_rank(source == RankSource::M1 ? sums.M1 : sums.M2, config.c_n,
                                       config.alpha, std::min(series.p(), series.q()), source);
  const Index d = rank.d_hat;

  Projection proj = project(series, sums.M1, sums.M2, d);
  const ProxySeries eta = eta_from_Z(proj.Z, config.proxy, config.seed);
  const MatrixXd S1 = projected_cov_Z_eta(series, proj.P, proj.Q, eta.weight, 1, config.delta2);
  const MatrixXd S2 = projected_cov_Z_eta(series, proj.P, proj.Q, eta.weight, 2, config.delta2);
  const ReducedSolution reduced = solve_projected(S1, S2);

  CPEstimate est;
  est.method = Method::Refined;
  est.d_hat = d;
  est.eigenvalues = reduced.eigenvalues;
  est.config = config;
  est.A = proj.P.cast<cplx>() * reduced.U;
  est.B = proj.Q.cast<cplx>() * reduced.V;
  linalg::normalize_columns(est.A);
  linalg::normalize_columns(est.B);
  est.warnings = rank.warnings;
  est.warnings.insert(est.warnings.end(), proj.warnings.begin(), proj.warnings.end());
  est.rank = std::move(rank);
  finalize_estimate(est, series);
  return est;
}

inline CPEstimate refined_estimate(const MatrixSeries& series, const EstimatorConfig& config) {
  return refined_estimate(series, make_proxy(series, config.proxy, config.seed), config);
}

/// Order selection only, as used by the estimator for `method` (no eigen-solve).
inline RankDiagnostics estimate_order(const MatrixSeries& series, const ProxySeries& xi,
                                      Method method, const EstimatorConfig& config) {
  if (method == Method::Direct) {
    const MatrixSeries work = series.p() < series.q() ? series.transposed() : series;
    const MatrixXd s1 = threshold(lag_cov_Y_xi(work, xi.values, 1).matrix, config.delta1);
    return estimate_rank(s1.transpose() * s1, config.c_n, config.alpha,
                         std::min(series.p(), series.q()), RankSource::K1q);
  }
  const LagCovarianceSums sums = build_M(series, xi.values, config.K, config.delta1);
  const RankSource source = select_rank_source(series.p(), series.q());
  return estimate_rank(source == RankSource::M1 ? sums.M1 : sums.M2, config.c_n, config.alpha,
                       std::min(series.p(), series.q()), source);
}

/// Dispatches on `method`.
inline CPEstimate estimate(const MatrixSeries& series, Method method,
                           const EstimatorConfig& config) {
  return method == Method::Direct ? direct_estimate(series, config)
                                  : refined_estimate(series, config);
}

}  // namespace mtcp

#endif  // MTCP_REFINED_HPP
