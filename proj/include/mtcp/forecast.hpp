#ifndef MTCP_FORECAST_HPP
#define MTCP_FORECAST_HPP

#include "mtcp/factors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mtcp {

/// x_t = intercept + sum_i coefficients(i) x_{t-1-i} + e_t.
struct ARModel {
  int order = 0;
  double intercept = 0.0;
  VectorXd coefficients;
  double sigma2 = 0.0;
  double aic = 0.0;
};

inline constexpr int kDefaultMaxArOrder = 5;

/// Conditional least squares for orders 0..p_max on the common sample t >= p_max;
/// AIC = T log(sigma^2) + 2 (order + 1) with T = n - p_max. Returns the AIC minimiser.
inline ARModel fit_ar_aic(const VectorXd& x, int p_max = kDefaultMaxArOrder) {
  const Index n = x.size();
  if (p_max < 0) throw Error(ErrorKind::InvalidArgument, "p_max must be >= 0");
  if (n <= p_max + 2) {
    throw Error(ErrorKind::TooShort, "series length " + std::to_string(n) + " <= p_max + 2");
  }
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  if (!(var > 1e-28 * std::max(1.0, mean * mean))) {
    throw Error(ErrorKind::ZeroVariance, "series is constant");
  }
  const Index T = n - p_max;
  const VectorXd target = x.tail(T);
  ARModel best;
  best.aic = std::numeric_limits<double>::infinity();
  for (int order = 0; order <= p_max; ++order) {
    MatrixXd design(T, order + 1);
    design.col(0).setOnes();
    for (int i = 1; i <= order; ++i) design.col(i) = x.segment(p_max - i, T);
    const VectorXd beta = design.colPivHouseholderQr().solve(target);
    const double sigma2 = (target - design * beta).squaredNorm() / static_cast<double>(T);
    const double aic = static_cast<double>(T) * std::log(std::max(sigma2, 1e-300)) +
                       2.0 * static_cast<double>(order + 1);
    if (aic < best.aic) {
      best.order = order;
      best.intercept = beta(0);
      best.coefficients = beta.tail(order);
      best.sigma2 = sigma2;
      best.aic = aic;
    }
  }
  return best;
}

/// Recursive h-step forecast: later steps feed on earlier predictions.
inline VectorXd forecast_ar(const ARModel& model, const VectorXd& history, Index h) {
  if (h < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  if (history.size() < model.order) throw Error(ErrorKind::TooShort, "history shorter than AR order");
  std::vector<double> buf(history.data(), history.data() + history.size());
  VectorXd out(h);
  for (Index s = 0; s < h; ++s) {
    double next = model.intercept;
    for (int i = 0; i < model.order; ++i) next += model.coefficients(i) * buf[buf.size() - 1 - i];
    buf.push_back(next);
    out(s) = next;
  }
  return out;
}

/// One AR model per realified factor column.
inline std::vector<ARModel> fit_factor_models(const RealifiedFactors& realified,
                                              int p_max = kDefaultMaxArOrder) {
  std::vector<ARModel> models;
  models.reserve(static_cast<std::size_t>(realified.series.cols()));
  for (Index c = 0; c < realified.series.cols(); ++c) {
    models.push_back(fit_ar_aic(realified.series.col(c), p_max));
  }
  return models;
}

struct ForecastResult {
  std::vector<MatrixXd> matrices;  // Y_{n+1}, ..., Y_{n+h}
  MatrixXcd factors;               // h x d_hat
  std::vector<ARModel> models;
};

/// Forecasts each realified factor series and recombines through the CP loadings.
inline ForecastResult forecast_matrices(const CPEstimate& est, const std::vector<ARModel>& models,
                                        Index h) {
  if (h < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  const RealifiedFactors realified = realify(est);
  if (static_cast<Index>(models.size()) != realified.series.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "one AR model per realified series is required");
  }
  MatrixXd future(h, realified.series.cols());
  for (Index c = 0; c < realified.series.cols(); ++c) {
    future.col(c) = forecast_ar(models[static_cast<std::size_t>(c)], realified.series.col(c), h);
  }
  ForecastResult out;
  out.factors = unrealify(realified, future);
  out.models = models;
  out.matrices.reserve(static_cast<std::size_t>(h));
  for (Index s = 0; s < h; ++s) {
    const MatrixXcd y = reconstruct(est.A, est.B, out.factors.row(s).transpose());
    const double bound = 1e-8 * (1.0 + y.real().cwiseAbs().maxCoeff());
    if (y.imag().cwiseAbs().maxCoeff() > bound) {
      throw Error(ErrorKind::ResidualImaginaryPart, "forecast slice is not real");
    }
    out.matrices.push_back(y.real());
  }
  return out;
}

/// Fits AR/AIC models to the realified factors of `est` and forecasts h steps.
inline ForecastResult forecast_matrices(const CPEstimate& est, Index h,
                                        int p_max = kDefaultMaxArOrder) {
  return forecast_matrices(est, fit_factor_models(realify(est), p_max), h);
}

}  // namespace mtcp

#endif  // MTCP_FORECAST_HPP
