#ifndef MTCP_METRICS_HPP
#define MTCP_METRICS_HPP

#include "mtcp/forecast.hpp"
#include "mtcp/refined.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace mtcp {

/// max over true columns of min over estimated columns of 1 - |a_hat^H a|^2.
/// Columns of both arguments are renormalised first.
inline double rho2(const MatrixXcd& truth, const MatrixXcd& estimate) {
  if (truth.rows() != estimate.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "loading matrices have different row counts");
  }
  if (truth.cols() == 0) return 0.0;
  if (estimate.cols() == 0) return 1.0;
  MatrixXcd a = truth;
  MatrixXcd b = estimate;
  linalg::normalize_columns(a);
  linalg::normalize_columns(b);
  const MatrixXd overlap = (b.adjoint() * a).cwiseAbs2();  // d_hat x d
  double worst = 0.0;
  for (Index l = 0; l < a.cols(); ++l) {
    const double best = 1.0 - overlap.col(l).maxCoeff();
    worst = std::max(worst, best);
  }
  return std::clamp(worst, 0.0, 1.0);
}

inline double rho2(const MatrixXd& truth, const MatrixXcd& estimate) {
  return rho2(MatrixXcd(truth.cast<cplx>()), estimate);
}

struct FitErrors {
  double rmse = 0.0;
  double mae = 0.0;
};

/// Entrywise RMSE and MAE over all p*q*n entries.
inline FitErrors fit_errors(const MatrixSeries& actual, const MatrixSeries& fitted) {
  if (actual.p() != fitted.p() || actual.q() != fitted.q() || actual.n() != fitted.n()) {
    throw Error(ErrorKind::ShapeMismatch, "actual and fitted series differ in shape");
  }
  const auto diff = (fitted.stacked() - actual.stacked()).array();
  const double count = static_cast<double>(diff.size());
  return {std::sqrt(diff.square().sum() / count), diff.abs().sum() / count};
}

/// Produces the `horizon`-step-ahead forecast from the end of `train`.
using Forecaster = std::function<MatrixXd(const MatrixSeries& train, Index horizon)>;

/// Rolling windows s = 1..windows. One-step forecasts train on length `length`;
/// h-step forecasts train on `length - (h - 1)` points ending h steps before the target.
/// Targets are the last `windows` time points when `length` is 0 (= n - windows).
struct WindowConfig {
  Index windows = 0;
  Index length = 0;
};

struct RollingResult {
  double rrmse = 0.0;
  double rmae = 0.0;
  std::vector<MatrixXd> forecasts;  // one per window
  std::vector<Index> targets;       // 0-based time index forecast by each window
  Index divisor = 0;                // windows * p * q
};

inline RollingResult rolling_forecast_eval(const MatrixSeries& series, WindowConfig window,
                                           const Forecaster& forecaster, Index horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  if (window.windows < 1) throw Error(ErrorKind::InvalidArgument, "need at least one window");
  if (window.length == 0) window.length = series.n() - window.windows;
  const Index train_length = window.length - (horizon - 1);
  if (window.length + window.windows > series.n() || train_length < MatrixSeries::kMinLength) {
    throw Error(ErrorKind::WindowTooLong,
                "windows of length " + std::to_string(window.length) + " x " +
                    std::to_string(window.windows) + " do not fit n = " +
                    std::to_string(series.n()));
  }
  RollingResult out;
  out.divisor = window.windows * series.p() * series.q();
  double sq = 0.0;
  double abs = 0.0;
  for (Index s = 0; s < window.windows; ++s) {
    const Index target = s + window.length;
    const MatrixSeries train = series.window(s, train_length);
    MatrixXd forecast = forecaster(train, horizon);
    if (forecast.rows() != series.p() || forecast.cols() != series.q()) {
      throw Error(ErrorKind::ShapeMismatch, "forecaster returned a matrix of the wrong shape");
    }
    const auto err = (forecast - series.slice(target)).array();
    sq += err.square().sum();
    abs += err.abs().sum();
    out.forecasts.push_back(std::move(forecast));
    out.targets.push_back(target);
  }
  out.rrmse = std::sqrt(sq / static_cast<double>(out.divisor));
  out.rmae = abs / static_cast<double>(out.divisor);
  return out;
}

/// Always predicts the zero matrix.
inline Forecaster zero_forecaster() {
  return [](const MatrixSeries& train, Index) { return MatrixXd::Zero(train.p(), train.q()); };
}

/// CP model + AR/AIC factor forecasts, refitted on every training window.
inline Forecaster cp_forecaster(Method method, EstimatorConfig config,
                                int p_max = kDefaultMaxArOrder) {
  return [=](const MatrixSeries& train, Index horizon) {
    const CPEstimate est = estimate(train, method, config);
    return forecast_matrices(est, horizon, p_max).matrices.back();
  };
}

}  // namespace mtcp

#endif  // MTCP_METRICS_HPP
