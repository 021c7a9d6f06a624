#ifndef MTCP_DIRECT_HPP
#define MTCP_DIRECT_HPP

#include "mtcp/factors.hpp"
#include "mtcp/proxy.hpp"

#include <algorithm>

namespace mtcp {

/// Generalized eigenproblem K2 b = lambda K1_trunc b, with K1_trunc the rank-d
/// truncation of K1 = Gamma C Gamma'.
struct Pencil {
  MatrixXd K1;
  MatrixXd K2;
  MatrixXd K1_trunc;
  Index d_hat = 0;
  MatrixXd basis;   // Gamma_d, q x d_hat: leading eigenvectors of K1
  VectorXd scales;  // c_1 >= ... >= c_d > 0
};

/// Truncates K1 to its leading `d_hat` eigenpairs.
inline Pencil make_pencil(const MatrixXd& K1, const MatrixXd& K2, Index d_hat) {
  if (K1.rows() != K1.cols() || K2.rows() != K1.rows() || K2.cols() != K1.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "pencil matrices must be square and equal-sized");
  }
  if (d_hat < 1 || d_hat > K1.rows()) throw Error(ErrorKind::InvalidArgument, "bad d_hat");
  const auto spectrum = linalg::symmetric_spectrum(K1);
  Pencil out{K1, K2, MatrixXd(), d_hat, spectrum.vectors.leftCols(d_hat),
             spectrum.values.head(d_hat)};
  if (!(out.scales(d_hat - 1) > 0.0)) {
    throw Error(ErrorKind::AllZeroSpectrum, "K1 has fewer than d_hat positive eigenvalues");
  }
  out.K1_trunc = out.basis * out.scales.asDiagonal() * out.basis.transpose();
  return out;
}

struct PencilBuild {
  Pencil pencil;
  RankDiagnostics rank;
  MatrixXd sigma1;  // thresholded lag-1 covariance of the (possibly transposed) series
  MatrixXd sigma2;
  bool transposed = false;
};

/// K1 = S1'S1, K2 = S1'S2 from thresholded lag-1/2 covariances; d from the spectrum of K1.
/// When p < q the series is transposed first so the pencil is min(p,q)-dimensional.
inline PencilBuild build_pencil(const MatrixSeries& series, const VectorXd& xi, double delta1,
                                double c_n, double alpha) {
  const bool transposed = series.p() < series.q();
  const MatrixSeries work = transposed ? series.transposed() : series;
  PencilBuild out;
  out.transposed = transposed;
  out.sigma1 = threshold(lag_cov_Y_xi(work, xi, 1).matrix, delta1);
  out.sigma2 = threshold(lag_cov_Y_xi(work, xi, 2).matrix, delta1);
  const MatrixXd K1 = out.sigma1.transpose() * out.sigma1;
  const MatrixXd K2 = out.sigma1.transpose() * out.sigma2;
  out.rank = estimate_rank(K1, c_n, alpha, std::min(series.p(), series.q()), RankSource::K1q);
  out.pencil = make_pencil(K1, K2, out.rank.d_hat);
  return out;
}

struct EigenPairs {
  VectorXcd values;
  MatrixXcd vectors;  // columns, unit norm with largest-modulus entry real positive
};

inline constexpr double kCollisionRelative = 1e-8;

namespace detail {

/// Sorts eigenpairs by (Re, Im) descending, normalises phases and rejects collisions.
inline EigenPairs sorted_eigenpairs(const VectorXcd& values, const MatrixXcd& vectors) {
  const auto order = linalg::lexicographic_descending(values);
  const Index d = values.size();
  EigenPairs out{VectorXcd(d), MatrixXcd(vectors.rows(), d)};
  for (Index l = 0; l < d; ++l) {
    out.values(l) = values(order[static_cast<std::size_t>(l)]);
    out.vectors.col(l) = vectors.col(order[static_cast<std::size_t>(l)]);
    linalg::normalize_phase(out.vectors.col(l));
  }
  const double scale = d > 0 ? out.values.cwiseAbs().maxCoeff() : 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      if (std::abs(out.values(i) - out.values(j)) <= kCollisionRelative * scale) {
        throw Error(ErrorKind::EigenvalueCollision,
                    "eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                        " are not distinct");
      }
    }
  }
  return out;
}

inline EigenPairs nonsymmetric_eigenpairs(const MatrixXd& m) {
  Eigen::EigenSolver<MatrixXd> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenvalueCollision, "eigen-decomposition did not converge");
  }
  return sorted_eigenpairs(solver.eigenvalues(), solver.eigenvectors());
}

}  // namespace detail

/// The d_hat finite eigenpairs of the truncated pencil, via the reduced problem
/// C_d^{-1} Gamma_d' K2 Gamma_d u = lambda u with b = Gamma_d u.
inline EigenPairs solve_reduced_gep(const Pencil& pencil) {
  const MatrixXd reduced = pencil.scales.cwiseInverse().asDiagonal() *
                           (pencil.basis.transpose() * pencil.K2 * pencil.basis);
  EigenPairs small = detail::nonsymmetric_eigenpairs(reduced);
  MatrixXcd b = pencil.basis.cast<cplx>() * small.vectors;
  for (Index l = 0; l < b.cols(); ++l) linalg::normalize_phase(b.col(l));
  return {std::move(small.values), std::move(b)};
}

/// a_l = S v_l / |S v_l| for each column v_l.
inline MatrixXcd normalized_images(const MatrixXd& S, const MatrixXcd& vectors) {
  MatrixXcd out = S.cast<cplx>() * vectors;
  for (Index l = 0; l < out.cols(); ++l) {
    const double norm = out.col(l).norm();
    if (!(norm > 0.0)) {
      throw Error(ErrorKind::RankDeficientLoadings,
                  "loading " + std::to_string(l) + " maps to the zero vector");
    }
    out.col(l) /= norm;
  }
  return out;
}

/// One-pass estimator from the lag-1/lag-2 pencil with the given proxy.
inline CPEstimate direct_estimate(const MatrixSeries& series, const ProxySeries& xi,
                                  const EstimatorConfig& config) {
  PencilBuild built = build_pencil(series, xi.values, config.delta1, config.c_n, config.alpha);
  const EigenPairs gep = solve_reduced_gep(built.pencil);
  const Index d = built.pencil.d_hat;

  MatrixXcd A = normalized_images(built.sigma1, gep.vectors);
  if (linalg::numerical_rank(A) < d) {
    throw Error(ErrorKind::RankDeficientLoadings, "estimated A has column rank < d_hat");
  }
  // Rows of A^+ are a^l; b_l = S1' a^l / |S1' a^l| (plain transpose, no conjugation).
  const MatrixXcd A_pinv = linalg::pinv(A);
  MatrixXcd B = normalized_images(built.sigma1.transpose(), A_pinv.transpose());

  CPEstimate est;
  est.method = Method::Direct;
  est.d_hat = d;
  est.eigenvalues = gep.values;
  est.config = config;
  est.transposed = built.transposed;
  est.rank = std::move(built.rank);
  est.warnings = est.rank.warnings;
  if (built.transposed) {
    est.A = std::move(B);
    est.B = std::move(A);
  } else {
    est.A = std::move(A);
    est.B = std::move(B);
  }
  finalize_estimate(est, series);
  return est;
}

inline CPEstimate direct_estimate(const MatrixSeries& series, const EstimatorConfig& config) {
  return direct_estimate(series, make_proxy(series, config.proxy, config.seed), config);
}

}  // namespace mtcp

#endif  // MTCP_DIRECT_HPP
