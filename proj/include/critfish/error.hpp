#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace critfish {

enum class Errc {
  InvalidMatrix,
  NotPSD,
  DimMismatch,
  InvalidDimension,
  InvalidParameter,
  BeyondCriticality,
  TruncationNotConverged,
  InvalidTemperature,
  GapTooSmall,
  NoFDConvergence,
  DegenerateLevel,
  ZeroVariance,
  UndefinedForZeroCoupling,
  ConfigError,
};

/// Stable name of an error code, used in status columns and C API messages.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the finite-difference ladder; carries the last two estimates.
class FdConvergenceError : public Error {
 public:
  FdConvergenceError(const std::string& what, double coarse, double fine)
      : Error(Errc::NoFDConvergence, what), coarse_(coarse), fine_(fine) {}
  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

/// Raised when the adaptive Fock truncation hits its cap.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double previous, double last)
      : Error(Errc::TruncationNotConverged, what), previous_(previous), last_(last) {}
  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace critfish
