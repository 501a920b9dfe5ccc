#include "critfish/thermal.hpp"

#include <cmath>

#include "critfish/error.hpp"

namespace critfish {

ThermalState gibbs(Spectrum spectrum, double beta) {
  if (!(beta > 0.0)) throw Error(Errc::InvalidTemperature, "beta must be > 0");
  const Vector& e = spectrum.eigenvalues;
  const Eigen::Index n = e.size();
  const double e0 = e(0);
  Vector p(n);
  double log_z = 0.0;

  if (beta == kInfiniteBeta) {
    const double tol = 1e-12 * spectrum.scale();
    Eigen::Index ground = 0;
    for (Eigen::Index i = 0; i < n; ++i) ground += (e(i) - e0 <= tol) ? 1 : 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = i < ground ? 1.0 / static_cast<double>(ground) : 0.0;
    }
    log_z = e0 == 0.0 ? std::log(static_cast<double>(ground)) : (e0 < 0.0 ? kInfiniteBeta : -kInfiniteBeta);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) p(i) = std::exp(-beta * (e(i) - e0));
    const double sum = p.sum();
    p /= sum;
    log_z = -beta * e0 + std::log(sum);
  }
  return ThermalState{std::move(spectrum), beta, std::move(p), log_z};
}

DensityMatrix density_matrix(const ThermalState& state) {
  return DensityMatrix(state.probs, state.spectrum.eigenvectors);
}

double gap(const Spectrum& spectrum) {
  if (spectrum.dim() < 2) throw Error(Errc::InvalidDimension, "gap needs at least two levels");
  return spectrum.eigenvalues(1) - spectrum.eigenvalues(0);
}

double beta_from_gap_ratio(double ratio, const Spectrum& spectrum) {
  if (!(ratio > 0.0)) throw Error(Errc::InvalidTemperature, "beta*gap ratio must be > 0");
  if (ratio == kInfiniteBeta) return kInfiniteBeta;
  const double delta = gap(spectrum);
  if (delta < 1e-14 * spectrum.scale()) {
    throw Error(Errc::GapTooSmall, "ground-state gap " + std::to_string(delta) + " is degenerate");
  }
  return ratio / delta;
}

double resolve_beta(const TemperatureSpec& temperature, const Spectrum& spectrum) {
  if (temperature.kind == TemperatureSpec::Kind::Beta) {
    if (!(temperature.value > 0.0)) throw Error(Errc::InvalidTemperature, "beta must be > 0");
    return temperature.value;
  }
  return beta_from_gap_ratio(temperature.value, spectrum);
}

namespace {

Matrix rotated(const ThermalState& state, const SymmetricMatrix& a) {
  if (a.dim() != state.spectrum.dim()) throw Error(Errc::DimMismatch, "observable vs state");
  const Matrix& v = state.spectrum.eigenvectors;
  return v.transpose() * a.matrix() * v;
}

}  // namespace

double thermal_expectation(const ThermalState& state, const SymmetricMatrix& a) {
  const Matrix b = rotated(state, a);
  return state.probs.dot(b.diagonal());
}

double thermal_variance(const ThermalState& state, const SymmetricMatrix& a) {
  Matrix b = rotated(state, a);
  const double mean = state.probs.dot(b.diagonal());
  b.diagonal().array() -= mean;
  // (B - <A>)^2 diagonal = squared column norms.
  return state.probs.dot(b.colwise().squaredNorm().transpose());
}

}  // namespace critfish
