#ifndef MTCP_JSON_IO_HPP
#define MTCP_JSON_IO_HPP

#include "mtcp/simulation.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <string>

namespace mtcp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline Json real_rows(const MatrixXd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline MatrixXd real_matrix(const Json& rows, const char* field) {
  if (!rows.is_array()) throw Error(ErrorKind::ParseError, std::string(field) + " is not an array");
  const Index r = static_cast<Index>(rows.size());
  const Index c = r > 0 && rows[0].is_array() ? static_cast<Index>(rows[0].size()) : 0;
  MatrixXd m(r, c);
  for (Index i = 0; i < r; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) {
      throw Error(ErrorKind::ParseError, std::string(field) + " has ragged rows");
    }
    for (Index j = 0; j < c; ++j) {
      const Json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string(field) + " entry is not a number");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

inline const Json& require(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + field + "\"");
  }
  return j.at(field);
}

}  // namespace detail

/// {"re": [[...]], "im": [[...]]}, rows of the matrix.
inline Json complex_to_json(const MatrixXcd& m) {
  return {{"re", detail::real_rows(m.real())}, {"im", detail::real_rows(m.imag())}};
}

/// Accepts {"re", "im"} (im optional) or a bare real array of rows.
inline MatrixXcd complex_from_json(const Json& j, const char* field) {
  if (j.is_array()) return detail::real_matrix(j, field).cast<cplx>();
  const MatrixXd re = detail::real_matrix(detail::require(j, "re"), field);
  MatrixXd im = MatrixXd::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = detail::real_matrix(j.at("im"), field);
    if (im.rows() != re.rows() || im.cols() != re.cols()) {
      throw Error(ErrorKind::ParseError, std::string(field) + ": re and im differ in shape");
    }
  }
  MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

inline Json config_to_json(const EstimatorConfig& c) {
  return {{"K", c.K},         {"delta1", c.delta1}, {"delta2", c.delta2}, {"c_n", c.c_n},
          {"alpha", c.alpha}, {"proxy", to_string(c.proxy)}, {"seed", c.seed}};
}

inline EstimatorConfig config_from_json(const Json& j) {
  EstimatorConfig c;
  if (!j.is_object()) return c;
  c.K = j.value("K", c.K);
  c.delta1 = j.value("delta1", c.delta1);
  c.delta2 = j.value("delta2", c.delta2);
  c.c_n = j.value("c_n", c.c_n);
  c.alpha = j.value("alpha", c.alpha);
  c.seed = j.value("seed", c.seed);
  const std::string proxy = j.value("proxy", std::string("pca"));
  if (proxy != "pca" && proxy != "random") throw Error(ErrorKind::ParseError, "unknown proxy " + proxy);
  c.proxy = proxy == "pca" ? ProxyStrategy::Pca : ProxyStrategy::Random;
  return c;
}

inline Json estimate_to_json(const CPEstimate& est) {
  Json eig = Json::array();
  for (Index l = 0; l < est.eigenvalues.size(); ++l) {
    eig.push_back({{"re", est.eigenvalues(l).real()}, {"im", est.eigenvalues(l).imag()}});
  }
  Json pairs = Json::array();
  for (const auto& pr : est.pair_map.pairs) pairs.push_back({pr.first, pr.second, pr.kappa});
  Json rank_eigs = Json::array();
  for (Index i = 0; i < est.rank.eigenvalues.size(); ++i) rank_eigs.push_back(est.rank.eigenvalues(i));
  return {{"schema_version", kSchemaVersion},
          {"d_hat", est.d_hat},
          {"method", to_string(est.method)},
          {"A", complex_to_json(est.A)},
          {"B", complex_to_json(est.B)},
          {"factors", complex_to_json(est.factors)},
          {"eigenvalues", std::move(eig)},
          {"pairs", std::move(pairs)},
          {"reals", est.pair_map.reals},
          {"config", config_to_json(est.config)},
          {"rank", {{"source", to_string(est.rank.source)}, {"R", est.rank.R}, {"eigenvalues", rank_eigs}}},
          {"warnings", est.warnings}};
}

inline CPEstimate estimate_from_json(const Json& j) {
  if (detail::require(j, "schema_version") != kSchemaVersion) {
    throw Error(ErrorKind::ParseError, "unsupported schema_version");
  }
  CPEstimate est;
  const std::string method = detail::require(j, "method").get<std::string>();
  if (method != "direct" && method != "refined") throw Error(ErrorKind::ParseError, "unknown method " + method);
  est.method = method == "direct" ? Method::Direct : Method::Refined;
  est.d_hat = detail::require(j, "d_hat").get<Index>();
  est.A = complex_from_json(detail::require(j, "A"), "A");
  est.B = complex_from_json(detail::require(j, "B"), "B");
  if (j.contains("factors")) est.factors = complex_from_json(j.at("factors"), "factors");
  if (est.A.cols() != est.d_hat || est.B.cols() != est.d_hat ||
      (est.factors.size() > 0 && est.factors.cols() != est.d_hat)) {
    throw Error(ErrorKind::ParseError, "loading or factor columns disagree with d_hat");
  }
  const Json& eig = detail::require(j, "eigenvalues");
  est.eigenvalues.resize(static_cast<Index>(eig.size()));
  for (std::size_t l = 0; l < eig.size(); ++l) {
    est.eigenvalues(static_cast<Index>(l)) = {eig[l].at("re").get<double>(), eig[l].at("im").get<double>()};
  }
  for (const auto& pr : detail::require(j, "pairs")) {
    if (!pr.is_array() || pr.size() != 3) throw Error(ErrorKind::ParseError, "pairs entries need 3 items");
    est.pair_map.pairs.push_back({pr[0].get<Index>(), pr[1].get<Index>(), pr[2].get<int>()});
  }
  est.pair_map.reals = detail::require(j, "reals").get<std::vector<Index>>();
  est.config = config_from_json(j.value("config", Json::object()));
  return est;
}

inline Json truth_to_json(const GroundTruth& truth) {
  return {{"schema_version", kSchemaVersion},
          {"d", truth.A.cols()},
          {"A", detail::real_rows(truth.A)},
          {"B", detail::real_rows(truth.B)},
          {"factors", detail::real_rows(truth.factors)},
          {"ar_coefficients", std::vector<double>(truth.ar_coefficients.data(),
                                                  truth.ar_coefficients.data() + truth.ar_coefficients.size())}};
}

/// Loadings of a truth file or of an estimate file; both carry "A" and "B".
struct LoadingPair {
  MatrixXcd A;
  MatrixXcd B;
};

inline LoadingPair loadings_from_json(const Json& j) {
  if (detail::require(j, "schema_version") != kSchemaVersion) {
    throw Error(ErrorKind::ParseError, "unsupported schema_version");
  }
  return {complex_from_json(detail::require(j, "A"), "A"), complex_from_json(detail::require(j, "B"), "B")};
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace mtcp

#endif  // MTCP_JSON_IO_HPP
