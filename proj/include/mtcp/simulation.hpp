#ifndef MTCP_SIMULATION_HPP
#define MTCP_SIMULATION_HPP

#include "mtcp/metrics.hpp"
#include "mtcp/random.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>
#include <tuple>
#include <vector>

namespace mtcp {

struct DGPConfig {
  Index p = 8;
  Index q = 8;
  Index d = 1;
  Index n = 300;
  std::uint64_t seed = 0;
  bool noise = true;
  Index burn_in = 200;
  /// Fixed AR coefficients (size d) instead of random ones; the draws are still made.
  std::vector<double> ar_override;
};

struct GroundTruth {
  MatrixXd A;                // p x d, unit columns
  MatrixXd B;                // q x d, unit columns
  MatrixXd factors;          // n x d, x_l = |a*_l| |b*_l| x~_l
  VectorXd ar_coefficients;  // d values in [-0.95,-0.6] u [0.6,0.95]
};

struct SimulatedData {
  MatrixSeries series;
  GroundTruth truth;
};

inline constexpr int kMaxRankRedraws = 100;

namespace detail {

inline MatrixXd uniform_full_rank(Rng& rng, Index rows, Index cols) {
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int attempt = 0; attempt < kMaxRankRedraws; ++attempt) {
    MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = unif(rng);
    }
    Eigen::JacobiSVD<MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s(cols - 1) > 1e-8 * s(0)) return m;
  }
  throw Error(ErrorKind::ConstructionFailure, "could not draw a full-rank loading matrix");
}

}  // namespace detail

/// Y = sum_l a*_l o b*_l o x~_l + E with U[-3,3] loadings, AR(1) factors and N(0,1) noise.
///
/// Draw order from one engine: A*, B*, AR coefficients, factor innovations (burn-in
/// included, factor by factor), then noise in time-major order.
inline SimulatedData generate_dgp(const DGPConfig& config) {
  if (config.d < 1 || config.d >= std::min(config.p, config.q)) {
    throw Error(ErrorKind::InvalidArgument, "need 1 <= d < min(p,q)");
  }
  if (config.n < MatrixSeries::kMinLength || config.burn_in < 0) {
    throw Error(ErrorKind::InvalidArgument, "need n >= 3 and burn_in >= 0");
  }
  if (!config.ar_override.empty() && static_cast<Index>(config.ar_override.size()) != config.d) {
    throw Error(ErrorKind::InvalidArgument, "ar_override needs d coefficients");
  }
  Rng rng(config.seed);
  const MatrixXd A_star = detail::uniform_full_rank(rng, config.p, config.d);
  const MatrixXd B_star = detail::uniform_full_rank(rng, config.q, config.d);

  GroundTruth truth;
  truth.ar_coefficients.resize(config.d);
  std::uniform_real_distribution<double> magnitude(0.6, 0.95);
  std::bernoulli_distribution negative(0.5);
  for (Index l = 0; l < config.d; ++l) {
    const double phi = magnitude(rng);
    truth.ar_coefficients(l) = negative(rng) ? -phi : phi;
  }
  for (std::size_t l = 0; l < config.ar_override.size(); ++l) {
    truth.ar_coefficients(static_cast<Index>(l)) = config.ar_override[l];
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd x_tilde(config.n, config.d);
  for (Index l = 0; l < config.d; ++l) {
    double x = 0.0;
    for (Index t = -config.burn_in; t < config.n; ++t) {
      x = truth.ar_coefficients(l) * x + normal(rng);
      if (t >= 0) x_tilde(t, l) = x;
    }
  }

  const VectorXd a_norm = A_star.colwise().norm();
  const VectorXd b_norm = B_star.colwise().norm();
  truth.A = A_star * a_norm.cwiseInverse().asDiagonal();
  truth.B = B_star * b_norm.cwiseInverse().asDiagonal();
  truth.factors = x_tilde * a_norm.cwiseProduct(b_norm).asDiagonal();

  const Index pq = config.p * config.q;
  MatrixXd stacked(pq, config.n);
  for (Index t = 0; t < config.n; ++t) {
    const MatrixXd y = A_star * x_tilde.row(t).asDiagonal() * B_star.transpose();
    stacked.col(t) = y.reshaped();
    if (config.noise) {
      for (Index r = 0; r < pq; ++r) stacked(r, t) += normal(rng);
    }
  }
  return {MatrixSeries(config.p, config.q, std::move(stacked)), std::move(truth)};
}

struct GridCell {
  Index p = 0;
  Index q = 0;
  Index d = 0;
  Index n = 0;
};

/// Seed of replication `rep` in `cell`. Depends only on the cell's values, not its position.
inline std::uint64_t replication_seed(std::uint64_t master, const GridCell& cell, Index rep) {
  std::uint64_t h = mix_seed(static_cast<std::uint64_t>(cell.p));
  h = mix_seed(h ^ static_cast<std::uint64_t>(cell.q));
  h = mix_seed(h ^ static_cast<std::uint64_t>(cell.d));
  h = mix_seed(h ^ static_cast<std::uint64_t>(cell.n));
  return derive_seed(derive_seed(master, h), static_cast<std::uint64_t>(rep));
}

/// Runs `body(rep)` for rep in [0, reps) across `jobs` threads.
template <typename Body>
void parallel_for_reps(Index reps, unsigned jobs, Body&& body) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || reps < 2) {
    for (Index r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (Index r = next++; r < reps; r = next++) body(r);
    });
  }
  for (auto& th : pool) th.join();
}

struct MethodSpec {
  Method method = Method::Refined;
  int K = 3;
  ProxyStrategy proxy = ProxyStrategy::Pca;
};

struct BenchmarkOptions {
  Index reps = 200;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// delta1, delta2, c_n, alpha are taken from here; K and proxy from the MethodSpec.
  EstimatorConfig base;
};

struct RankRow {
  GridCell cell;
  MethodSpec spec;
  Index reps = 0;
  Index hits = 0;
  Index failures = 0;
  std::uint64_t seed = 0;
  double frequency() const { return reps > 0 ? static_cast<double>(hits) / reps : 0.0; }
};

inline EstimatorConfig config_for(const BenchmarkOptions& options, const MethodSpec& spec,
                                  std::uint64_t rep_seed) {
  EstimatorConfig config = options.base;
  config.K = spec.K;
  config.proxy = spec.proxy;
  config.seed = derive_seed(rep_seed, 2);
  return config;
}

/// Fraction of replications with d_hat == d in each cell. Rank-selection failures count
/// as misses and are tallied separately.
inline std::vector<RankRow> run_rank_benchmark(const std::vector<GridCell>& grid,
                                               const MethodSpec& spec,
                                               const BenchmarkOptions& options) {
  std::vector<RankRow> rows;
  for (const auto& cell : grid) {
    std::vector<int> outcome(static_cast<std::size_t>(options.reps), 0);  // 1 hit, -1 failure
    parallel_for_reps(options.reps, options.jobs, [&](Index rep) {
      const std::uint64_t seed = replication_seed(options.seed, cell, rep);
      const auto data = generate_dgp({cell.p, cell.q, cell.d, cell.n, seed, true, 200, {}});
      const EstimatorConfig config = config_for(options, spec, seed);
      try {
        const ProxySeries xi = make_proxy(data.series, config.proxy, config.seed);
        const auto rank = estimate_order(data.series, xi, spec.method, config);
        outcome[static_cast<std::size_t>(rep)] = rank.d_hat == cell.d ? 1 : 0;
      } catch (const Error&) {
        outcome[static_cast<std::size_t>(rep)] = -1;
      }
    });
    RankRow row{cell, spec, options.reps, 0, 0, options.seed};
    for (int o : outcome) {
      row.hits += o == 1;
      row.failures += o == -1;
    }
    rows.push_back(row);
  }
  return rows;
}

struct AccuracyRow {
  GridCell cell;
  MethodSpec spec;
  Index reps = 0;
  Index failures = 0;
  std::uint64_t seed = 0;
  double mean_A = 0.0;
  double sd_A = 0.0;
  double mean_B = 0.0;
  double sd_B = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

/// Mean and sd (divisor reps - 1) of rho2(A, A_hat), rho2(B, B_hat) per cell and method.
/// Every method sees the same simulated data; a failed estimate scores rho2 = 1.
inline std::vector<AccuracyRow> run_accuracy_benchmark(const std::vector<GridCell>& grid,
                                                       const std::vector<MethodSpec>& methods,
                                                       const BenchmarkOptions& options,
                                                       bool noise = true) {
  std::vector<AccuracyRow> rows;
  for (const auto& cell : grid) {
    const std::size_t reps = static_cast<std::size_t>(options.reps);
    std::vector<std::vector<double>> rho_a(methods.size(), std::vector<double>(reps, 1.0));
    std::vector<std::vector<double>> rho_b(methods.size(), std::vector<double>(reps, 1.0));
    std::vector<std::vector<char>> failed(methods.size(), std::vector<char>(reps, 0));
    parallel_for_reps(options.reps, options.jobs, [&](Index rep) {
      const std::uint64_t seed = replication_seed(options.seed, cell, rep);
      const auto data = generate_dgp({cell.p, cell.q, cell.d, cell.n, seed, noise, 200, {}});
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto r = static_cast<std::size_t>(rep);
        try {
          const CPEstimate est =
              estimate(data.series, methods[m].method, config_for(options, methods[m], seed));
          rho_a[m][r] = rho2(data.truth.A, est.A);
          rho_b[m][r] = rho2(data.truth.B, est.B);
        } catch (const Error&) {
          failed[m][r] = 1;
        }
      }
    });
    for (std::size_t m = 0; m < methods.size(); ++m) {
      AccuracyRow row{cell, methods[m], options.reps, 0, options.seed};
      for (char f : failed[m]) row.failures += f;
      std::tie(row.mean_A, row.sd_A) = detail::mean_sd(rho_a[m]);
      std::tie(row.mean_B, row.sd_B) = detail::mean_sd(rho_b[m]);
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_rank_csv(std::ostream& out, const std::vector<RankRow>& rows) {
  out << "p,q,d,n,method,K,proxy,reps,seed,frequency,hits,failures\n";
  for (const auto& r : rows) {
    out << r.cell.p << ',' << r.cell.q << ',' << r.cell.d << ',' << r.cell.n << ','
        << to_string(r.spec.method) << ',' << r.spec.K << ',' << to_string(r.spec.proxy) << ','
        << r.reps << ',' << r.seed << ',' << r.frequency() << ',' << r.hits << ',' << r.failures
        << '\n';
  }
}

inline void write_accuracy_csv(std::ostream& out, const std::vector<AccuracyRow>& rows) {
  out << "p,q,d,n,method,K,proxy,reps,seed,mean_rho2_A,sd_rho2_A,mean_rho2_B,sd_rho2_B,failures\n";
  for (const auto& r : rows) {
    out << r.cell.p << ',' << r.cell.q << ',' << r.cell.d << ',' << r.cell.n << ','
        << to_string(r.spec.method) << ',' << r.spec.K << ',' << to_string(r.spec.proxy) << ','
        << r.reps << ',' << r.seed << ',' << r.mean_A << ',' << r.sd_A << ',' << r.mean_B << ','
        << r.sd_B << ',' << r.failures << '\n';
  }
}

}  // namespace mtcp

#endif  // MTCP_SIMULATION_HPP
