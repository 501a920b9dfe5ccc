#pragma once

// Closed-form Fisher information for the squeezing toy model
// H = omega a^dag a - (g/4)(a + a^dag)^2 in its normal phase g < omega.
//
// With xi = ln(1 - g/omega)/4 the squeezing parameter and
// omega_eff = omega sqrt(1 - g/omega) the effective frequency:
//
//   eigenstate n:   I_n = 2 (d xi)^2 (n^2 + n + 1)
//   quantum term:   2 (d xi)^2 tanh(beta w)/tanh(beta w/2)            -> 4 (d xi)^2
//   classical term: beta^2 (2 - g/omega)^2 csch^2(beta w/2) / (16 (1 - g/omega))
//                                            -> (2 - g/omega)^2 / (4 omega^2 (1 - g/omega)^2)
//
// where w = omega_eff and the arrows give the high-temperature companions.
//
// Adiabatic preparation (ramping g up from 0) keeps the level structure of
// the free oscillator: the quantum term uses w = omega, and the classical
// term sets g/omega = 0 in its prefactors with w = omega, i.e.
//
//   classical (adiabatic) = beta^2 csch^2(beta omega/2) / 4   -> 1/omega^2
//
// This reading of the adiabatic substitution has not been checked against a
// simulated ramp.

namespace critfish::toy {

enum class Preparation { Direct, Adiabatic };

struct ToyParams {
  double omega;
  double g;
  double beta;  // may be +inf
  Preparation prep = Preparation::Direct;

  /// Throws InvalidParameter / BeyondCriticality / InvalidTemperature.
  void validate() const;
  double squeezing() const;
  double d_squeezing() const;
  double omega_eff() const;
};

/// Exact value with its high-temperature approximation alongside.
struct ThermalTerm {
  double exact;
  double high_temperature;
};

double qfi_eigenstate(const ToyParams& p, int n);
ThermalTerm qfi_thermal_quantum(const ToyParams& p);
/// Zero at beta = +inf.
ThermalTerm qfi_thermal_classical(const ToyParams& p);

struct QuadratureMoments {
  double mean2;  // <(a + a^dag)^2>
  double var2;   // Var[(a + a^dag)^2] = 2 mean2^2
};
QuadratureMoments quadrature_moments(const ToyParams& p);

/// Error-propagation Fisher information of measuring (a + a^dag)^2:
/// 2 (d xi)^2 [beta w (2 omega/g - 1) csch(beta w) + 1]^2.
/// Direct preparation only; throws UndefinedForZeroCoupling at g = 0.
double fi_errprop_closed(const ToyParams& p);

}  // namespace critfish::toy
