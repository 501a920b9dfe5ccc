#pragma once

#include <limits>

#include "critfish/linalg.hpp"

namespace critfish {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

/// Gibbs state over a spectrum (k_B = 1). beta = +inf is the ground-state
/// limit: uniform weight over levels within 1e-12*scale of E_0.
struct ThermalState {
  Spectrum spectrum;
  double beta;
  Vector probs;
  double log_z;

  bool zero_temperature() const noexcept { return beta == kInfiniteBeta; }
};

/// Temperature as either an explicit beta or a beta*gap ratio; both may be
/// +inf. The ratio form is resolved against the gap of a specific spectrum.
struct TemperatureSpec {
  enum class Kind { Beta, GapRatio };
  Kind kind = Kind::Beta;
  double value = kInfiniteBeta;

  static TemperatureSpec beta(double b) { return {Kind::Beta, b}; }
  static TemperatureSpec gap_ratio(double r) { return {Kind::GapRatio, r}; }
};

/// Throws InvalidTemperature unless beta > 0.
ThermalState gibbs(Spectrum spectrum, double beta);

/// rho = V diag(p) V^T with the Gibbs weights kept exact.
DensityMatrix density_matrix(const ThermalState& state);

/// E_1 - E_0 (no degeneracy skipping). InvalidDimension for dim < 2.
double gap(const Spectrum& spectrum);

/// beta = ratio / gap. GapTooSmall when the gap is below 1e-14*scale.
double beta_from_gap_ratio(double ratio, const Spectrum& spectrum);

double resolve_beta(const TemperatureSpec& temperature, const Spectrum& spectrum);

/// tr(rho A) evaluated in the eigenbasis as sum_n p_n (V^T A V)_nn.
double thermal_expectation(const ThermalState& state, const SymmetricMatrix& a);

/// tr(rho (A - <A>)^2), evaluated as a sum of squares so it stays >= 0.
double thermal_variance(const ThermalState& state, const SymmetricMatrix& a);

}  // namespace critfish
