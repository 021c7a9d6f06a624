#ifndef MTCP_PROXY_HPP
#define MTCP_PROXY_HPP

#include "mtcp/core.hpp"
#include "mtcp/random.hpp"

namespace mtcp {

/// Scalar series built as a linear functional of vec(Y_t) (or vec(Z_t)).
struct ProxySeries {
  VectorXd values;
  ProxyStrategy strategy = ProxyStrategy::Pca;
  /// Functional applied to the (centred, for PCA) stacked data: values(t) = weight . x_t.
  VectorXd weight;
  /// Number of principal components averaged (1 for the random strategy).
  Index components = 1;
};

/// Share of total variance the leading principal components must reach.
inline constexpr double kPcaVarianceShare = 0.99;

/// PCA proxy on a stacked (dim x n) data matrix: average of the leading principal
/// component scores that together explain at least 99% of the variance.
inline ProxySeries pca_proxy(const MatrixXd& stacked) {
  const Index n = stacked.cols();
  if (n < 2) throw Error(ErrorKind::SeriesTooShort, "PCA needs n >= 2");
  const VectorXd mean = stacked.rowwise().mean();
  const MatrixXd centered = (stacked.colwise() - mean).transpose();  // n x dim

  Eigen::BDCSVD<MatrixXd> svd(centered, Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  const double scale = stacked.norm();
  if (s.size() == 0 || !(s(0) > 1e-12 * scale)) {
    throw Error(ErrorKind::DegenerateCovariance, "total variance is zero");
  }
  // Eigenvalues s^2 / (n - 1); the divisor cancels in the variance shares.
  const VectorXd eig = s.array().square();
  const double total = eig.sum();
  Index m = 0;
  double cumulative = 0.0;
  while (m < eig.size()) {
    cumulative += eig(m++);
    if (cumulative >= kPcaVarianceShare * total) break;
  }

  MatrixXd loadings = svd.matrixV().leftCols(m);
  for (Index c = 0; c < m; ++c) linalg::fix_sign(loadings.col(c));

  ProxySeries out;
  out.strategy = ProxyStrategy::Pca;
  out.components = m;
  out.weight = loadings.rowwise().mean();
  out.values = centered * out.weight;
  return out;
}

/// Random proxy: h ~ U[0,1]^dim normalised to unit length, values(t) = h0 . x_t.
inline ProxySeries random_proxy(const MatrixXd& stacked, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VectorXd h(stacked.rows());
  for (Index i = 0; i < h.size(); ++i) h(i) = unif(rng);
  const double norm = h.norm();
  if (norm > 0.0) {
    h /= norm;
  } else {
    h.setConstant(1.0 / std::sqrt(static_cast<double>(h.size())));
  }
  ProxySeries out;
  out.strategy = ProxyStrategy::Random;
  out.values = stacked.transpose() * h;
  out.weight = std::move(h);
  return out;
}

inline ProxySeries xi_pca(const MatrixSeries& series) { return pca_proxy(series.stacked()); }

inline ProxySeries xi_random(const MatrixSeries& series, std::uint64_t seed) {
  return random_proxy(series.stacked(), seed);
}

inline ProxySeries make_proxy(const MatrixSeries& series, ProxyStrategy strategy,
                              std::uint64_t seed) {
  return strategy == ProxyStrategy::Pca ? xi_pca(series) : xi_random(series, seed);
}

/// Proxy for the projected d x d series. The random strategy draws from a stream
/// distinct from the one used for xi.
inline ProxySeries eta_from_Z(const MatrixSeries& z_series, ProxyStrategy strategy,
                              std::uint64_t seed) {
  if (strategy == ProxyStrategy::Pca) return pca_proxy(z_series.stacked());
  return random_proxy(z_series.stacked(), derive_seed(seed, 1));
}

}  // namespace mtcp

#endif  // MTCP_PROXY_HPP
