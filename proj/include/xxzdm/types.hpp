#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xxzdm {

using Real = double;
using Complex = std::complex<Real>;

using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Vector4r = Eigen::Matrix<Real, 4, 1>;

// Shared numerical guards.
inline constexpr Real gap_eps = 1e-8;    // adjacent levels closer than this count as degenerate
inline constexpr Real denom_eps = 1e-10; // closed-form denominators below this trigger the fallback path

enum class ErrorKind {
  PreconditionViolated,
  NumericalFailure,
  NotHermitian,
  NoConvergence,
  DegenerateFormula,
  NotAnEigenvalue,
  DegenerateLevel,
  GridTooCoarse,
  StepGuard,
  TrackingAmbiguous,
};

inline const char* error_name(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateFormula: return "DegenerateFormula";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::DegenerateLevel: return "DegenerateLevel";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::StepGuard: return "StepGuard";
    case ErrorKind::TrackingAmbiguous: return "TrackingAmbiguous";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace xxzdm
