#include "mtcp/json_io.hpp"
#include "mtcp/mtcp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace mtcp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEstimation = 3;

/// Configuration problems map to exit 2, numerical failures to exit 3.
bool is_config_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonFiniteEntry:
    case ErrorKind::SeriesTooShort:
    case ErrorKind::InvalidArgument:
    case ErrorKind::LagTooLarge:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::WindowTooLong:
      return true;
    default:
      return false;
  }
}

struct PreparedSeries {
  MatrixSeries series;
  MatrixXd means;
  MatrixXd sds;
  bool standardized = false;
};

/// Load, impute any missing entries, then optionally standardize.
PreparedSeries prepare(const std::string& path, bool standardize_series) {
  MaskedSeries loaded = load_masked_series(path, format_from_path(path));
  MatrixSeries series = loaded.mask.count() > 0 ? impute_missing(loaded.series, loaded.mask)
                                                : std::move(loaded.series);
  PreparedSeries out;
  if (standardize_series) {
    StandardizedSeries st = standardize(series);
    out.series = std::move(st.series);
    out.means = std::move(st.means);
    out.sds = std::move(st.sds);
    out.standardized = true;
  } else {
    out.series = std::move(series);
  }
  return out;
}

Method parse_method(const std::string& s) { return s == "direct" ? Method::Direct : Method::Refined; }
ProxyStrategy parse_proxy(const std::string& s) {
  return s == "random" ? ProxyStrategy::Random : ProxyStrategy::Pca;
}

std::vector<GridCell> read_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open grid file " + path);
  std::vector<GridCell> grid;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#' || body.rfind("p,", 0) == 0) continue;
    std::string copy(body);
    for (char& c : copy) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(copy);
    long p = 0, q = 0, d = 0, n = 0;
    std::string extra;
    if (!(fields >> p >> q >> d >> n) || (fields >> extra) || p < 2 || q < 2 || d < 1 || n < 3) {
      throw Error(ErrorKind::ParseError, "grid line " + std::to_string(lineno) + " is not 'p,q,d,n'");
    }
    if (d >= std::min(p, q)) {
      throw Error(ErrorKind::ParseError, "grid line " + std::to_string(lineno) + " has d >= min(p,q)");
    }
    grid.push_back({p, q, d, n});
  }
  if (grid.empty()) throw Error(ErrorKind::ParseError, "grid file has no cells");
  return grid;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error(ErrorKind::ParseError, "cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix time series CP-decomposition: estimate, forecast, simulate, benchmark"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate the CP factor model with AR(1) factors");
  DGPConfig dgp;
  std::string noise = "on";
  std::string sim_out;
  std::string sim_truth;
  sim->add_option("--p", dgp.p, "Rows")->required()->check(CLI::PositiveNumber);
  sim->add_option("--q", dgp.q, "Columns")->required()->check(CLI::PositiveNumber);
  sim->add_option("--d", dgp.d, "CP rank")->required()->check(CLI::PositiveNumber);
  sim->add_option("--n", dgp.n, "Length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", dgp.seed, "Seed")->required();
  sim->add_option("--noise", noise, "Add N(0,1) noise")->check(CLI::IsMember({"on", "off"}));
  sim->add_option("--out", sim_out, "Output series (.mts or .csv)")->required();
  sim->add_option("--truth", sim_truth, "Optional ground-truth JSON");

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "Estimate loadings, factors and rank");
  std::string est_in;
  std::string est_out;
  std::string method_name = "refined";
  std::string proxy_name = "pca";
  bool est_standardize = false;
  EstimatorConfig config;
  est_cmd->add_option("--in", est_in, "Input series (.mts or .csv)")->required();
  est_cmd->add_option("--method", method_name, "direct|refined")
      ->check(CLI::IsMember({"direct", "refined"}));
  est_cmd->add_option("--K", config.K, "Number of lags in M1/M2")->check(CLI::PositiveNumber);
  est_cmd->add_option("--proxy", proxy_name, "pca|random")->check(CLI::IsMember({"pca", "random"}));
  est_cmd->add_option("--delta1", config.delta1, "Threshold for lag covariances")->check(CLI::NonNegativeNumber);
  est_cmd->add_option("--delta2", config.delta2, "Threshold for projected covariances")
      ->check(CLI::NonNegativeNumber);
  est_cmd->add_option("--cn", config.c_n, "Ridge shift in the eigenvalue ratio")->check(CLI::NonNegativeNumber);
  est_cmd->add_option("--alpha", config.alpha, "Ratio search range R = floor(alpha min(p,q))")
      ->check(CLI::Range(0.0, 1.0));
  est_cmd->add_option("--seed", config.seed, "Seed for the random proxy");
  est_cmd->add_flag("--standardize", est_standardize, "Standardize each component series first");
  est_cmd->add_option("--out", est_out, "Output JSON (stdout if omitted)");

  // forecast
  auto* fc = app.add_subcommand("forecast", "Forecast future matrices from an estimate");
  fc->set_help_flag("--help", "Print this help message and exit");
  std::string fc_in;
  std::string fc_est;
  std::string fc_out;
  Index horizon = 1;
  int p_max = kDefaultMaxArOrder;
  fc->add_option("--in", fc_in, "Series the estimate was fitted on")->required();
  fc->add_option("--estimate", fc_est, "Estimate JSON")->required();
  fc->add_option("--h", horizon, "Horizon")->check(CLI::PositiveNumber);
  fc->add_option("--pmax", p_max, "Largest AR order")->check(CLI::NonNegativeNumber);
  fc->add_option("--out", fc_out, "Output series of h slices")->required();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Monte Carlo rank or accuracy benchmark");
  std::string suite = "rank";
  std::string grid_path;
  std::string bench_out;
  std::string bench_method = "refined";
  std::string bench_proxy = "pca";
  BenchmarkOptions options;
  int bench_K = 3;
  bench->add_option("--suite", suite, "rank|accuracy")->check(CLI::IsMember({"rank", "accuracy"}));
  bench->add_option("--grid", grid_path, "Grid file, lines 'p,q,d,n'")->required();
  bench->add_option("--reps", options.reps, "Replications per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", options.seed, "Master seed");
  bench->add_option("--jobs", options.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--method", bench_method, "direct|refined|both")
      ->check(CLI::IsMember({"direct", "refined", "both"}));
  bench->add_option("--K", bench_K, "Lags for the refined method")->check(CLI::PositiveNumber);
  bench->add_option("--proxy", bench_proxy, "pca|random")->check(CLI::IsMember({"pca", "random"}));
  bench->add_option("--out", bench_out, "Output CSV (stdout if omitted)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Compare loadings (rho^2) or fitted series (RMSE/MAE)");
  std::string ev_truth, ev_est, ev_actual, ev_fitted;
  auto* o_truth = ev->add_option("--truth", ev_truth, "Truth or reference estimate JSON");
  auto* o_est = ev->add_option("--estimate", ev_est, "Estimate JSON");
  auto* o_actual = ev->add_option("--actual", ev_actual, "Observed series");
  auto* o_fitted = ev->add_option("--fitted", ev_fitted, "Fitted series");
  o_truth->needs(o_est);
  o_est->needs(o_truth);
  o_actual->needs(o_fitted);
  o_fitted->needs(o_actual);
  o_truth->excludes(o_actual);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      dgp.noise = noise == "on";
      const SimulatedData data = generate_dgp(dgp);
      save_series(sim_out, data.series, format_from_path(sim_out));
      if (!sim_truth.empty()) write_json(sim_truth, truth_to_json(data.truth));
    } else if (*est_cmd) {
      config.proxy = parse_proxy(proxy_name);
      const PreparedSeries prepared = prepare(est_in, est_standardize);
      const CPEstimate est = estimate(prepared.series, parse_method(method_name), config);
      for (const auto& w : est.warnings) std::cerr << "warning: " << w << '\n';
      Json j = estimate_to_json(est);
      j["preprocess"] = {{"standardize", prepared.standardized}};
      if (prepared.standardized) {
        j["preprocess"]["means"] = detail::real_rows(prepared.means);
        j["preprocess"]["sds"] = detail::real_rows(prepared.sds);
      }
      if (est_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        write_json(est_out, j);
      }
    } else if (*fc) {
      const Json j = read_json(fc_est);
      CPEstimate est = estimate_from_json(j);
      const bool standardized = j.contains("preprocess") && j["preprocess"].value("standardize", false);
      const PreparedSeries prepared = prepare(fc_in, standardized);
      est.factors = recover_factors(prepared.series, est.A, est.B);
      const ForecastResult result = forecast_matrices(est, horizon, p_max);
      std::vector<MatrixXd> slices = result.matrices;
      if (standardized) {
        for (auto& s : slices) s = destandardize(s, prepared.means, prepared.sds);
      }
      save_series(fc_out, MatrixSeries(slices, 1), format_from_path(fc_out));
    } else if (*bench) {
      const std::vector<GridCell> grid = read_grid(grid_path);
      std::ofstream file;
      std::ostream& out = open_out(bench_out, file);
      const ProxyStrategy proxy = parse_proxy(bench_proxy);
      std::vector<MethodSpec> methods;
      if (bench_method != "refined") methods.push_back({Method::Direct, bench_K, proxy});
      if (bench_method != "direct") methods.push_back({Method::Refined, bench_K, proxy});
      if (suite == "rank") {
        std::vector<RankRow> rows;
        for (const auto& spec : methods) {
          auto part = run_rank_benchmark(grid, spec, options);
          rows.insert(rows.end(), part.begin(), part.end());
        }
        write_rank_csv(out, rows);
      } else {
        write_accuracy_csv(out, run_accuracy_benchmark(grid, methods, options));
      }
    } else if (*ev) {
      Json result;
      if (!ev_truth.empty()) {
        const LoadingPair truth = loadings_from_json(read_json(ev_truth));
        const LoadingPair est = loadings_from_json(read_json(ev_est));
        if (truth.A.rows() != est.A.rows() || truth.B.rows() != est.B.rows()) {
          throw Error(ErrorKind::ShapeMismatch, "truth and estimate have different dimensions");
        }
        result = {{"rho2_A", rho2(truth.A, est.A)}, {"rho2_B", rho2(truth.B, est.B)}};
      } else if (!ev_actual.empty()) {
        const MatrixSeries actual = load_series(ev_actual, format_from_path(ev_actual), 1);
        const MatrixSeries fitted = load_series(ev_fitted, format_from_path(ev_fitted), 1);
        const FitErrors errors = fit_errors(actual, fitted);
        result = {{"rmse", errors.rmse}, {"mae", errors.mae}};
      } else {
        std::cerr << "evaluate needs --truth/--estimate or --actual/--fitted\n" << ev->help();
        return kExitUsage;
      }
      std::cout << result.dump() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_config_error(e.kind()) ? kExitUsage : kExitEstimation;
  } catch (const Json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
