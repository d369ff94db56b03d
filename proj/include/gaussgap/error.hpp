#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussgap {

/// Machine-readable failure codes. The CLI prints these verbatim.
enum class ErrorCode {
  DimensionMismatch,
  NotHermitian,
  NotSymmetric,
  DependentKraus,
  NonFinite,
  Unstable,
  SingularLyapunov,
  NotPositiveDefinite,
  NotFaithful,
  NoFaithfulState,
  RouteMismatch,
  RangeExceeded,
  InvalidArgument,
  EmptyCombination,
  NotRealCoefficients,
  NonCommutingHamiltonian,
  DegenerateDiffusion,
  DimensionTooLarge,
  OutsideEnvelope,
  ParseError,
  ShapeError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DependentKraus: return "DependentKraus";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::SingularLyapunov: return "SingularLyapunov";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotFaithful: return "NotFaithful";
    case ErrorCode::NoFaithfulState: return "NoFaithfulState";
    case ErrorCode::RouteMismatch: return "RouteMismatch";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCombination: return "EmptyCombination";
    case ErrorCode::NotRealCoefficients: return "NotRealCoefficients";
    case ErrorCode::NonCommutingHamiltonian: return "NonCommutingHamiltonian";
    case ErrorCode::DegenerateDiffusion: return "DegenerateDiffusion";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::OutsideEnvelope: return "OutsideEnvelope";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeError: return "ShapeError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gaussgap
