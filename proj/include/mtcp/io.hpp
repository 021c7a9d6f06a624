#ifndef MTCP_IO_HPP
#define MTCP_IO_HPP

#include "mtcp/core.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>

namespace mtcp {

enum class SeriesFormat { MtsText, CsvLong };

/// ".csv" selects csv-long, anything else mts-text.
inline SeriesFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".csv") return SeriesFormat::CsvLong;
  return SeriesFormat::MtsText;
}

/// A series whose masked entries hold 0 until imputed.
struct MaskedSeries {
  MatrixSeries series;
  SeriesMask mask;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line) + ": non-numeric token '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFiniteEntry,
                "line " + std::to_string(line) + ": non-finite entry '" + std::string(token) + "'");
  }
  return value;
}

inline long parse_index(std::string_view token, std::size_t line) {
  long value = 0;
  token = trim(token);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 1) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad index '" +
                                           std::string(token) + "'");
  }
  return value;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return in;
}

inline MatrixSeries parse_mts(std::istream& in, Index min_length) {
  std::string line;
  std::size_t line_no = 0;
  Index p = 0, q = 0, n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  {
    std::istringstream header(line);
    std::string magic, version;
    header >> magic >> version >> p >> q >> n;
    if (!header || magic != "MTS" || version != "v1") {
      throw Error(ErrorKind::ParseError, "expected header 'MTS v1 <p> <q> <n>'");
    }
    if (p < 1 || q < 1 || n < 0) throw Error(ErrorKind::DimensionMismatch, "bad header dimensions");
  }
  MatrixXd data(p * q, n);
  Index rows_read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (rows_read >= p * n) {
      throw Error(ErrorKind::DimensionMismatch, "more rows than header declares");
    }
    const Index t = rows_read / p;
    const Index i = rows_read % p;
    Index j = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
      const auto start = body.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      auto stop = body.find_first_of(" \t", start);
      if (stop == std::string_view::npos) stop = body.size();
      if (j >= q) {
        throw Error(ErrorKind::DimensionMismatch,
                    "line " + std::to_string(line_no) + ": more than q entries");
      }
      data(i + j * p, t) = parse_double(body.substr(start, stop - start), line_no);
      ++j;
      pos = stop;
    }
    if (j != q) {
      throw Error(ErrorKind::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": expected " + std::to_string(q) + " entries");
    }
    ++rows_read;
  }
  if (rows_read != p * n) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(p * n) + " rows, read " +
                                                  std::to_string(rows_read));
  }
  return MatrixSeries(p, q, std::move(data), min_length);
}

inline MaskedSeries parse_csv_long(std::istream& in, Index min_length) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != "t,i,j,value") {
    throw Error(ErrorKind::ParseError, "expected header 't,i,j,value'");
  }
  ++line_no;
  // (t, i, j) -> value; nullopt-like flag for missing.
  std::map<std::tuple<long, long, long>, std::pair<double, bool>> cells;
  long n = 0, p = 0, q = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::string_view fields[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const auto comma = body.find(',', start);
      if (f < 3 && comma == std::string_view::npos) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 4 fields");
      }
      fields[f] = f < 3 ? body.substr(start, comma - start) : body.substr(start);
      start = comma + 1;
    }
    if (fields[3].find(',') != std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": too many fields");
    }
    const long t = parse_index(fields[0], line_no);
    const long i = parse_index(fields[1], line_no);
    const long j = parse_index(fields[2], line_no);
    const auto value_field = trim(fields[3]);
    const bool missing = value_field.empty();
    const double value = missing ? 0.0 : parse_double(value_field, line_no);
    if (!cells.emplace(std::make_tuple(t, i, j), std::make_pair(value, missing)).second) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": duplicate cell");
    }
    n = std::max(n, t);
    p = std::max(p, i);
    q = std::max(q, j);
  }
  if (static_cast<long>(cells.size()) != n * p * q) {
    throw Error(ErrorKind::DimensionMismatch,
                "csv-long covers " + std::to_string(cells.size()) + " of " +
                    std::to_string(n * p * q) + " cells");
  }
  MatrixXd data(p * q, n);
  SeriesMask mask(p, q, n);
  for (const auto& [key, cell] : cells) {
    const auto [t, i, j] = key;
    data((i - 1) + (j - 1) * p, t - 1) = cell.first;
    if (cell.second) mask.set(i - 1, j - 1, t - 1);
  }
  return {MatrixSeries(p, q, std::move(data), min_length), std::move(mask)};
}

}  // namespace detail

/// Loads a series that may contain missing values (csv-long empty value fields).
inline MaskedSeries load_masked_series(const std::string& path, SeriesFormat format,
                                       Index min_length = MatrixSeries::kMinLength) {
  auto in = detail::open_input(path);
  if (format == SeriesFormat::CsvLong) return detail::parse_csv_long(in, min_length);
  MatrixSeries series = detail::parse_mts(in, min_length);
  SeriesMask mask(series.p(), series.q(), series.n());
  return {std::move(series), std::move(mask)};
}

/// Loads a complete series; missing values are an error.
inline MatrixSeries load_series(const std::string& path, SeriesFormat format,
                                Index min_length = MatrixSeries::kMinLength) {
  MaskedSeries loaded = load_masked_series(path, format, min_length);
  if (loaded.mask.count() > 0) {
    throw Error(ErrorKind::MissingValues,
                std::to_string(loaded.mask.count()) + " missing entries; impute first");
  }
  return std::move(loaded.series);
}

inline MatrixSeries read_mts(std::istream& in, Index min_length = MatrixSeries::kMinLength) {
  return detail::parse_mts(in, min_length);
}

/// Writes mts-text using shortest round-trip decimal representation.
inline void write_mts(std::ostream& out, const MatrixSeries& series) {
  out << "MTS v1 " << series.p() << ' ' << series.q() << ' ' << series.n() << '\n';
  for (Index t = 0; t < series.n(); ++t) {
    if (t > 0) out << '\n';
    const auto y = series.slice(t);
    for (Index i = 0; i < series.p(); ++i) {
      for (Index j = 0; j < series.q(); ++j) {
        if (j > 0) out << ' ';
        out << detail::format_double(y(i, j));
      }
      out << '\n';
    }
  }
}

inline void write_csv_long(std::ostream& out, const MatrixSeries& series,
                           const SeriesMask* mask = nullptr) {
  out << "t,i,j,value\n";
  for (Index t = 0; t < series.n(); ++t) {
    for (Index i = 0; i < series.p(); ++i) {
      for (Index j = 0; j < series.q(); ++j) {
        out << t + 1 << ',' << i + 1 << ',' << j + 1 << ',';
        if (mask == nullptr || !(*mask)(i, j, t)) out << detail::format_double(series(i, j, t));
        out << '\n';
      }
    }
  }
}

inline void save_series(const std::string& path, const MatrixSeries& series,
                        SeriesFormat format = SeriesFormat::MtsText) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + path + "'");
  if (format == SeriesFormat::CsvLong) {
    write_csv_long(out, series);
  } else {
    write_mts(out, series);
  }
}

}  // namespace mtcp

#endif  // MTCP_IO_HPP
