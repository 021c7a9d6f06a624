#ifndef MTCP_RANK_HPP
#define MTCP_RANK_HPP

#include "mtcp/covariance.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mtcp {

enum class RankSource { M1, M2, K1q };

inline std::string to_string(RankSource s) {
  switch (s) {
    case RankSource::M1: return "M1";
    case RankSource::M2: return "M2";
    case RankSource::K1q: return "K1q";
  }
  return "?";
}

struct RankDiagnostics {
  VectorXd eigenvalues;  // nonincreasing, clamped
  VectorXd ratios;       // ratios(j-1) for j = 1..R; +inf where undefined
  Index d_hat = 0;
  RankSource source = RankSource::M1;
  Index R = 0;
  double c_n = 0.0;
  std::vector<std::string> warnings;
};

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kSpectrumClampRelative = 1e-14;

/// Eigenvalue-ratio order selection on a symmetric PSD matrix:
/// d = argmin_{j <= R} (lambda_{j+1} + c_n) / (lambda_j + c_n), R = floor(alpha * min_dim).
///
/// `min_dim` is min(p, q) of the underlying series; it defaults to the matrix size.
inline RankDiagnostics estimate_rank(const MatrixXd& m, double c_n, double alpha,
                                     Index min_dim = -1, RankSource source = RankSource::M1) {
  const Index dim = m.rows();
  if (dim < 2 || m.cols() != dim) {
    throw Error(ErrorKind::InvalidArgument, "rank estimation needs a square matrix of size >= 2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must be in (0,1)");
  if (!(c_n >= 0.0)) throw Error(ErrorKind::InvalidArgument, "c_n must be >= 0");
  if (min_dim < 0) min_dim = dim;

  RankDiagnostics out;
  out.source = source;
  out.c_n = c_n;
  out.eigenvalues = linalg::symmetric_spectrum(m).values;
  const double top = out.eigenvalues(0);
  for (Index j = 0; j < dim; ++j) {
    if (!(top > 0.0) || out.eigenvalues(j) < kSpectrumClampRelative * top) out.eigenvalues(j) = 0.0;
  }
  if (c_n == 0.0 && !(out.eigenvalues(0) > std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::AllZeroSpectrum, "every eigenvalue is zero and c_n = 0");
  }

  out.R = static_cast<Index>(std::floor(alpha * static_cast<double>(min_dim)));
  if (out.R < 1) {
    out.R = 1;
    out.warnings.push_back("floor(alpha * min(p,q)) = 0; search bound forced to R = 1");
  }
  out.R = std::min(out.R, dim - 1);

  out.ratios.resize(out.R);
  double best = std::numeric_limits<double>::infinity();
  out.d_hat = 1;
  for (Index j = 0; j < out.R; ++j) {
    const double den = out.eigenvalues(j) + c_n;
    const double ratio = den > 0.0 ? (out.eigenvalues(j + 1) + c_n) / den
                                    : std::numeric_limits<double>::infinity();
    out.ratios(j) = ratio;
    if (ratio < best) {
      best = ratio;
      out.d_hat = j + 1;
    }
  }
  return out;
}

/// M1 when p >= q, otherwise M2.
constexpr RankSource select_rank_source(Index p, Index q) noexcept {
  return p >= q ? RankSource::M1 : RankSource::M2;
}

struct LagCovarianceSums {
  MatrixXd M1;                  // p x p
  MatrixXd M2;                  // q x q
  std::vector<MatrixXd> sigma;  // thresholded lag covariances, k = 1..K
};

/// M1 = sum_k S_k S_k', M2 = sum_k S_k' S_k with S_k = T_delta1{Sigma_{Y,xi}(k)}.
inline LagCovarianceSums build_M(const MatrixSeries& series, const VectorXd& xi, int K,
                                 double delta1) {
  if (K < 1 || K > series.n() - 2) {
    throw Error(ErrorKind::LagTooLarge, "K must lie in [1, n-2]");
  }
  LagCovarianceSums out{MatrixXd::Zero(series.p(), series.p()),
                        MatrixXd::Zero(series.q(), series.q()), {}};
  out.sigma.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    MatrixXd s = threshold(lag_cov_Y_xi(series, xi, k).matrix, delta1);
    out.M1.noalias() += s * s.transpose();
    out.M2.noalias() += s.transpose() * s;
    out.sigma.push_back(std::move(s));
  }
  return out;
}

}  // namespace mtcp

#endif  // MTCP_RANK_HPP
