#ifndef MTCP_COVARIANCE_HPP
#define MTCP_COVARIANCE_HPP

#include "mtcp/core.hpp"

namespace mtcp {

/// Lag-k cross-covariance between a matrix series and a scalar proxy.
struct LagCovariance {
  Index k = 1;
  MatrixXd matrix;
};

namespace detail {

inline void check_lag(Index k, Index n) {
  if (k < 1 || k > n - 2) {
    throw Error(ErrorKind::LagTooLarge,
                "lag " + std::to_string(k) + " outside [1, n-2] with n = " + std::to_string(n));
  }
}

}  // namespace detail

/// (n-k)^{-1} sum_{t>k} (x_t - xbar)(s_{t-k} - sbar) for a stacked (dim x n) series x and
/// scalar series s, both centred by their full-sample means.
inline VectorXd stacked_lag_cov(const MatrixXd& stacked, const VectorXd& scalar, Index k) {
  const Index n = stacked.cols();
  detail::check_lag(k, n);
  if (scalar.size() != n) throw Error(ErrorKind::DimensionMismatch, "proxy length differs from n");
  const MatrixXd centered = stacked.colwise() - stacked.rowwise().mean();
  const VectorXd s = scalar.array() - scalar.mean();
  return centered.middleCols(k, n - k) * s.head(n - k) / static_cast<double>(n - k);
}

inline LagCovariance lag_cov_Y_xi(const MatrixSeries& series, const VectorXd& xi, Index k) {
  return {k, stacked_lag_cov(series.stacked(), xi, k).reshaped(series.p(), series.q())};
}

/// Hard threshold: keeps entries with |w| >= delta.
inline MatrixXd threshold(const MatrixXd& m, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be >= 0");
  if (delta == 0.0) return m;
  return (m.array().abs() >= delta).select(m, 0.0);
}

namespace detail {

inline void check_orthonormal(const MatrixXd& m, const char* name) {
  const MatrixXd gram = m.transpose() * m;
  if ((gram - MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::NonOrthonormalProjection, std::string(name) + " is not orthonormal");
  }
}

inline void check_projection_shapes(const MatrixSeries& series, const MatrixXd& P,
                                    const MatrixXd& Q, const VectorXd& w) {
  if (P.rows() != series.p() || Q.rows() != series.q() || P.cols() != Q.cols() ||
      w.size() != P.cols() * Q.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "projection shapes do not match the series");
  }
  check_orthonormal(P, "P");
  check_orthonormal(Q, "Q");
}

}  // namespace detail

/// Z_t = P' Y_t Q for every t, as a d x d series.
inline MatrixSeries project_series(const MatrixSeries& series, const MatrixXd& P,
                                   const MatrixXd& Q) {
  MatrixXd out(P.cols() * Q.cols(), series.n());
  for (Index t = 0; t < series.n(); ++t) {
    out.col(t) = (P.transpose() * series.slice(t) * Q).reshaped();
  }
  return MatrixSeries(P.cols(), Q.cols(), std::move(out), 1);
}

/// Lag-k covariance between Z_t = P'Y_tQ and eta_t = w' vec(Z_t), computed on the
/// projected series. Equals the streamed estimator when no thresholding is applied.
inline MatrixXd projected_cov_shortcut(const MatrixSeries& series, const MatrixXd& P,
                                       const MatrixXd& Q, const VectorXd& w, Index k) {
  detail::check_lag(k, series.n());
  detail::check_projection_shapes(series, P, Q, w);
  const MatrixSeries z = project_series(series, P, Q);
  const VectorXd eta = z.stacked().transpose() * w;
  return stacked_lag_cov(z.stacked(), eta, k).reshaped(P.cols(), Q.cols());
}

/// P' Theta' T_delta{S(k)} Q with Theta = I_p (x) {(Q (x) P) w} and
/// S(k) = (n-k)^{-1} sum_t (Y_t - Ybar) (x) vec(Y_{t-k} - Ybar), a (p^2 q) x q matrix.
///
/// S(k) is produced one (pq) x q row block at a time (block i holds row i of Y_t),
/// thresholded, contracted with (Q (x) P) w and accumulated in order i = 0..p-1.
inline MatrixXd projected_cov_streamed(const MatrixSeries& series, const MatrixXd& P,
                                       const MatrixXd& Q, const VectorXd& w, Index k,
                                       double delta) {
  const Index n = series.n();
  const Index p = series.p();
  const Index q = series.q();
  detail::check_lag(k, n);
  detail::check_projection_shapes(series, P, Q, w);
  if (!(delta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be >= 0");

  const MatrixXd centered = series.stacked().colwise() - series.stacked().rowwise().mean();
  const auto lagged = centered.leftCols(n - k);   // vec(Y_{t-k} - Ybar), t = k+1..n
  const auto current = centered.middleCols(k, n - k);
  const double scale = 1.0 / static_cast<double>(n - k);

  // (Q (x) P) w = vec(P W Q') with W the d x d reshaping of w.
  const VectorXd g = (P * w.reshaped(P.cols(), Q.cols()) * Q.transpose()).reshaped();

  MatrixXd contracted(p, q);  // row i = g' T_delta{block_i}
  MatrixXd row_series(n - k, q);
  MatrixXd block(p * q, q);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) row_series.col(j) = current.row(i + j * p).transpose();
    block.noalias() = scale * lagged * row_series;
    if (delta > 0.0) block = (block.array().abs() >= delta).select(block, 0.0);
    contracted.row(i) = g.transpose() * block;
  }
  return P.transpose() * contracted * Q;
}

/// Thresholded projected covariance; the shortcut is used when delta == 0.
inline MatrixXd projected_cov_Z_eta(const MatrixSeries& series, const MatrixXd& P,
                                    const MatrixXd& Q, const VectorXd& w, Index k,
                                    double delta) {
  if (delta == 0.0) return projected_cov_shortcut(series, P, Q, w, k);
  return projected_cov_streamed(series, P, Q, w, k, delta);
}

}  // namespace mtcp

#endif  // MTCP_COVARIANCE_HPP
