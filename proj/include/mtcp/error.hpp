#ifndef MTCP_ERROR_HPP
#define MTCP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mtcp {

/// Machine-readable failure categories. The CLI prints `name()` on stderr.
enum class ErrorKind {
  DimensionMismatch,
  ParseError,
  NonFiniteEntry,
  SeriesTooShort,
  MissingValues,
  ZeroVariance,
  InsufficientHistory,
  DegenerateCovariance,
  LagTooLarge,
  NonOrthonormalProjection,
  AllZeroSpectrum,
  InvalidArgument,
  EigenvalueCollision,
  RankDeficientLoadings,
  SingularGram,
  UnmatchedComplexEigenvalue,
  ResidualImaginaryPart,
  TooShort,
  ShapeMismatch,
  WindowTooLong,
  ConstructionFailure,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::SeriesTooShort: return "SeriesTooShort";
    case ErrorKind::MissingValues: return "MissingValues";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorKind::LagTooLarge: return "LagTooLarge";
    case ErrorKind::NonOrthonormalProjection: return "NonOrthonormalProjection";
    case ErrorKind::AllZeroSpectrum: return "AllZeroSpectrum";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EigenvalueCollision: return "EigenvalueCollision";
    case ErrorKind::RankDeficientLoadings: return "RankDeficientLoadings";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::UnmatchedComplexEigenvalue: return "UnmatchedComplexEigenvalue";
    case ErrorKind::ResidualImaginaryPart: return "ResidualImaginaryPart";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::WindowTooLong: return "WindowTooLong";
    case ErrorKind::ConstructionFailure: return "ConstructionFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace mtcp

#endif  // MTCP_ERROR_HPP
