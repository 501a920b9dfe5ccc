#include "critfish/toy_analytic.hpp"

#include <cmath>

#include "critfish/error.hpp"
#include "critfish/thermal.hpp"

namespace critfish::toy {

namespace {

// x csch(x), continuous at 0 and vanishing at +inf.
double x_csch(double x) {
  if (x == kInfiniteBeta) return 0.0;
  if (std::abs(x) < 1e-8) return 1.0;
  return x / std::sinh(x);
}

}  // namespace

void ToyParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(Errc::InvalidParameter, "omega must be > 0");
  if (!(g >= 0.0)) throw Error(Errc::InvalidParameter, "g must be >= 0");
  if (g >= omega) throw Error(Errc::BeyondCriticality, "toy model requires g < omega");
  if (!(beta > 0.0)) throw Error(Errc::InvalidTemperature, "beta must be > 0");
}

double ToyParams::squeezing() const { return 0.25 * std::log1p(-g / omega); }

double ToyParams::d_squeezing() const { return g / (4.0 * omega * omega * (1.0 - g / omega)); }

double ToyParams::omega_eff() const { return omega * std::sqrt(1.0 - g / omega); }

double qfi_eigenstate(const ToyParams& p, int n) {
  p.validate();
  const double dxi = p.d_squeezing();
  const double nn = n;
  return 2.0 * dxi * dxi * (nn * nn + nn + 1.0);
}

ThermalTerm qfi_thermal_quantum(const ToyParams& p) {
  p.validate();
  const double dxi = p.d_squeezing();
  const double w = p.prep == Preparation::Direct ? p.omega_eff() : p.omega;
  const double x = p.beta * w;
  const double ratio = std::tanh(x) / std::tanh(0.5 * x);
  return {2.0 * dxi * dxi * ratio, 4.0 * dxi * dxi};
}

ThermalTerm qfi_thermal_classical(const ToyParams& p) {
  p.validate();
  const double r = p.prep == Preparation::Direct ? p.g / p.omega : 0.0;
  const double w = p.prep == Preparation::Direct ? p.omega_eff() : p.omega;
  const double high_t = (2.0 - r) * (2.0 - r) / (4.0 * p.omega * p.omega * (1.0 - r) * (1.0 - r));
  if (p.beta == kInfiniteBeta) return {0.0, high_t};
  // beta^2 csch^2(beta w/2) = (2/w)^2 [y csch(y)]^2 with y = beta w/2.
  const double y_csch = x_csch(0.5 * p.beta * w);
  const double beta_csch_sq = 4.0 / (w * w) * y_csch * y_csch;
  return {beta_csch_sq * (2.0 - r) * (2.0 - r) / (16.0 * (1.0 - r)), high_t};
}

QuadratureMoments quadrature_moments(const ToyParams& p) {
  p.validate();
  const double coth = p.beta == kInfiniteBeta ? 1.0 : 1.0 / std::tanh(0.5 * p.beta * p.omega_eff());
  const double mean2 = std::exp(-2.0 * p.squeezing()) * coth;
  return {mean2, 2.0 * mean2 * mean2};
}

double fi_errprop_closed(const ToyParams& p) {
  p.validate();
  if (p.g == 0.0) throw Error(Errc::UndefinedForZeroCoupling, "closed form needs g > 0");
  const double dxi = p.d_squeezing();
  const double bracket = x_csch(p.beta * p.omega_eff()) * (2.0 * p.omega / p.g - 1.0) + 1.0;
  return 2.0 * dxi * dxi * bracket * bracket;
}

}  // namespace critfish::toy
