#ifndef MTCP_CORE_HPP
#define MTCP_CORE_HPP

#include "mtcp/error.hpp"
#include "mtcp/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace mtcp {

/// An ordered sequence of n real p x q matrices.
///
/// Slices are stored as the columns of a (pq) x n matrix, so slice t is the column-major
/// vec(Y_t) and can be viewed as a p x q matrix without copying. Immutable after
/// construction.
class MatrixSeries {
 public:
  static constexpr Index kMinLength = 3;

  MatrixSeries() = default;

  /// `stacked` is (p*q) x n with column t equal to vec(Y_t).
  MatrixSeries(Index p, Index q, MatrixXd stacked, Index min_length = kMinLength)
      : p_(p), q_(q), data_(std::move(stacked)) {
    validate(min_length);
  }

  explicit MatrixSeries(const std::vector<MatrixXd>& slices, Index min_length = kMinLength) {
    if (slices.empty()) throw Error(ErrorKind::SeriesTooShort, "series has no slices");
    p_ = slices.front().rows();
    q_ = slices.front().cols();
    data_.resize(p_ * q_, static_cast<Index>(slices.size()));
    for (std::size_t t = 0; t < slices.size(); ++t) {
      if (slices[t].rows() != p_ || slices[t].cols() != q_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "slice " + std::to_string(t) + " is not " + std::to_string(p_) + "x" +
                        std::to_string(q_));
      }
      data_.col(static_cast<Index>(t)) = slices[t].reshaped();
    }
    validate(min_length);
  }

  Index p() const noexcept { return p_; }
  Index q() const noexcept { return q_; }
  Index n() const noexcept { return data_.cols(); }

  Eigen::Map<const MatrixXd> slice(Index t) const { return {data_.col(t).data(), p_, q_}; }

  /// vec(Y_t) for every t, one column per time point.
  const MatrixXd& stacked() const noexcept { return data_; }

  double operator()(Index i, Index j, Index t) const { return data_(i + j * p_, t); }

  /// Same series with rows and columns of every slice swapped.
  MatrixSeries transposed() const {
    MatrixXd out(p_ * q_, n());
    for (Index t = 0; t < n(); ++t) {
      Eigen::Map<MatrixXd>(out.col(t).data(), q_, p_) = slice(t).transpose();
    }
    return MatrixSeries(q_, p_, std::move(out), 1);
  }

  /// Contiguous time range [first, first + length).
  MatrixSeries window(Index first, Index length, Index min_length = kMinLength) const {
    return MatrixSeries(p_, q_, data_.middleCols(first, length), min_length);
  }

 private:
  void validate(Index min_length) const {
    if (p_ < 1 || q_ < 1) throw Error(ErrorKind::DimensionMismatch, "p and q must be >= 1");
    if (data_.rows() != p_ * q_) {
      throw Error(ErrorKind::DimensionMismatch, "stacked rows do not equal p*q");
    }
    if (n() < min_length) {
      throw Error(ErrorKind::SeriesTooShort,
                  "n = " + std::to_string(n()) + " < " + std::to_string(min_length));
    }
    if (!data_.allFinite()) throw Error(ErrorKind::NonFiniteEntry, "series has NaN or Inf");
  }

  Index p_ = 0;
  Index q_ = 0;
  MatrixXd data_;
};

/// p x q x n flags marking entries that were missing before imputation.
class SeriesMask {
 public:
  SeriesMask() = default;
  SeriesMask(Index p, Index q, Index n)
      : p_(p), q_(q), n_(n), flags_(static_cast<std::size_t>(p * q * n), 0) {}

  Index p() const noexcept { return p_; }
  Index q() const noexcept { return q_; }
  Index n() const noexcept { return n_; }

  bool operator()(Index i, Index j, Index t) const { return flags_[offset(i, j, t)] != 0; }
  void set(Index i, Index j, Index t, bool missing = true) { flags_[offset(i, j, t)] = missing; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto f : flags_) c += f;
    return c;
  }

 private:
  std::size_t offset(Index i, Index j, Index t) const {
    return static_cast<std::size_t>(i + p_ * (j + q_ * t));
  }

  Index p_ = 0;
  Index q_ = 0;
  Index n_ = 0;
  std::vector<std::uint8_t> flags_;
};

struct StandardizedSeries {
  MatrixSeries series;
  MatrixXd means;  // p x q
  MatrixXd sds;    // p x q, divisor n
};

/// Centres and scales every component series to mean 0, variance 1 (divisor n).
inline StandardizedSeries standardize(const MatrixSeries& series) {
  const MatrixXd& x = series.stacked();
  const double n = static_cast<double>(series.n());
  const VectorXd mean = x.rowwise().mean();
  const MatrixXd centered = x.colwise() - mean;
  const VectorXd sd = (centered.rowwise().squaredNorm() / n).cwiseSqrt();
  for (Index r = 0; r < x.rows(); ++r) {
    const double scale = std::max(1.0, x.row(r).cwiseAbs().maxCoeff());
    if (!(sd(r) > 1e-14 * scale)) {
      const Index i = r % series.p();
      const Index j = r / series.p();
      throw Error(ErrorKind::ZeroVariance,
                  "component (" + std::to_string(i) + "," + std::to_string(j) + ") is constant");
    }
  }
  MatrixXd scaled = centered.array().colwise() / sd.array();
  return {MatrixSeries(series.p(), series.q(), std::move(scaled), 1),
          mean.reshaped(series.p(), series.q()), sd.reshaped(series.p(), series.q())};
}

/// Inverse of `standardize` for a single slice.
inline MatrixXd destandardize(const MatrixXd& slice, const MatrixXd& means, const MatrixXd& sds) {
  return (slice.array() * sds.array() + means.array()).matrix();
}

/// Replaces masked entries by 0.5 y[t-1] + 0.3 y[t-2] + 0.2 y[t-3], sweeping forward in t.
inline MatrixSeries impute_missing(const MatrixSeries& series, const SeriesMask& mask) {
  const Index p = series.p();
  const Index q = series.q();
  if (mask.p() != p || mask.q() != q || mask.n() != series.n()) {
    throw Error(ErrorKind::DimensionMismatch, "mask shape differs from series shape");
  }
  MatrixXd x = series.stacked();
  for (Index t = 0; t < series.n(); ++t) {
    for (Index j = 0; j < q; ++j) {
      for (Index i = 0; i < p; ++i) {
        if (!mask(i, j, t)) continue;
        if (t < 3) {
          throw Error(ErrorKind::InsufficientHistory,
                      "missing entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") at t=" + std::to_string(t + 1) + " has fewer than 3 predecessors");
        }
        const Index r = i + j * p;
        x(r, t) = 0.5 * x(r, t - 1) + 0.3 * x(r, t - 2) + 0.2 * x(r, t - 3);
      }
    }
  }
  return MatrixSeries(p, q, std::move(x), 1);
}

enum class ProxyStrategy { Pca, Random };
enum class Method { Direct, Refined };

inline std::string to_string(ProxyStrategy s) { return s == ProxyStrategy::Pca ? "pca" : "random"; }
inline std::string to_string(Method m) { return m == Method::Direct ? "direct" : "refined"; }

/// Tuning for both estimators. The direct estimator ignores K, delta2 and uses lags 1, 2.
struct EstimatorConfig {
  int K = 3;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double c_n = 0.0;
  double alpha = 0.5;
  ProxyStrategy proxy = ProxyStrategy::Pca;
  std::uint64_t seed = 0;
};

}  // namespace mtcp

#endif  // MTCP_CORE_HPP
