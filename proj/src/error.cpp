#include "critfish/error.hpp"

namespace critfish {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidMatrix: return "InvalidMatrix";
    case Errc::NotPSD: return "NotPSD";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::BeyondCriticality: return "BeyondCriticality";
    case Errc::TruncationNotConverged: return "TruncationNotConverged";
    case Errc::InvalidTemperature: return "InvalidTemperature";
    case Errc::GapTooSmall: return "GapTooSmall";
    case Errc::NoFDConvergence: return "NoFDConvergence";
    case Errc::DegenerateLevel: return "DegenerateLevel";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::UndefinedForZeroCoupling: return "UndefinedForZeroCoupling";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace critfish
