#include "critfish/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "critfish/error.hpp"

namespace critfish {

namespace {

constexpr double kDegeneracyRel = 1e-10;

// dH in the eigenbasis of H, rotated inside degenerate subspaces so that it is
// diagonal there. `group[n]` labels the degenerate subspace of level n.
struct RotatedGenerator {
  Matrix d;
  std::vector<Eigen::Index> group;
  double tol;
};

RotatedGenerator rotate_generator(const ModelInstance& model, const Spectrum& spectrum) {
  if (model.d_hamiltonian.dim() != spectrum.dim()) {
    throw Error(Errc::DimMismatch, "state and model dimensions differ");
  }
  const Matrix& v = spectrum.eigenvectors;
  const Vector& e = spectrum.eigenvalues;
  const Eigen::Index n = e.size();
  RotatedGenerator out{v.transpose() * model.d_hamiltonian.matrix() * v,
                       std::vector<Eigen::Index>(static_cast<std::size_t>(n)),
                       kDegeneracyRel * spectrum.scale()};

  Eigen::Index start = 0;
  Eigen::Index label = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && e(end) - e(end - 1) <= out.tol) ++end;
    for (Eigen::Index i = start; i < end; ++i) out.group[static_cast<std::size_t>(i)] = label;
    const Eigen::Index k = end - start;
    if (k > 1) {
      const Matrix block = out.d.block(start, start, k, k);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (block + block.transpose()));
      const Matrix& u = solver.eigenvectors();
      out.d.middleCols(start, k) = (out.d.middleCols(start, k) * u).eval();
      out.d.middleRows(start, k) = (u.transpose() * out.d.middleRows(start, k)).eval();
    }
    start = end;
    ++label;
  }
  return out;
}

// 2 (p_n - p_m)^2/(p_n + p_m) |<n|dH|m>|^2/(E_m - E_n)^2 for every ordered pair.
Matrix pair_terms(const ThermalState& state, const RotatedGenerator& gen) {
  const Vector& e = state.spectrum.eigenvalues;
  const Vector& p = state.probs;
  const Eigen::Index n = e.size();
  Matrix q = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (gen.group[static_cast<std::size_t>(i)] == gen.group[static_cast<std::size_t>(j)]) continue;
      const double sum = p(i) + p(j);
      if (sum < 1e-15) continue;
      const double de = e(j) - e(i);
      // p_i - p_j without cancellation: p_j = p_i exp(-beta de).
      const double diff = state.zero_temperature() ? p(i) - p(j) : -p(i) * std::expm1(-state.beta * de);
      const double overlap = gen.d(i, j) / de;
      const double t = 2.0 * diff * diff / sum * overlap * overlap;
      q(i, j) = t;
      q(j, i) = t;
    }
  }
  return q;
}

template <class Estimate>
FdEstimate fd_ladder(Estimate&& estimate, double omega, const FdOptions& options) {
  double delta = options.delta_omega > 0.0 ? options.delta_omega : 1e-4 * omega;
  const double min_delta = options.min_delta_rel * omega;
  double coarse = estimate(delta);
  while (true) {
    const double half = 0.5 * delta;
    if (half < min_delta) {
      throw FdConvergenceError("finite-difference ladder stalled at delta " + std::to_string(delta),
                               coarse, coarse);
    }
    const double fine = estimate(half);
    if (std::abs(fine - coarse) <=
        options.rel_tol * std::max(std::abs(fine), std::abs(coarse)) + options.abs_floor) {
      return FdEstimate{fine, half, coarse};
    }
    if (0.5 * half < min_delta) {
      throw FdConvergenceError("no finite-difference convergence down to delta " + std::to_string(half),
                               coarse, fine);
    }
    coarse = fine;
    delta = half;
  }
}

ThermalState state_at(const ModelFactory& factory, double omega, double beta) {
  return gibbs(eigh(factory(omega).hamiltonian), beta);
}

}  // namespace

FisherBreakdown qfi_spectral(const ModelInstance& model, const ThermalState& state) {
  const auto gen = rotate_generator(model, state.spectrum);
  const Vector& p = state.probs;

  FisherBreakdown out;
  out.method = FisherMethod::Spectral;
  out.meta.degeneracy_tol = gen.tol;
  out.meta.truncation = model.kind == ModelKind::Toy ? model.size : 0;

  if (!state.zero_temperature()) {
    const Vector de = gen.d.diagonal();
    const double mean = p.dot(de);
    double classical = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) < 1e-300) continue;
      const double c = de(i) - mean;
      classical += p(i) * c * c;
    }
    out.classical_part = state.beta * state.beta * classical;
  }
  out.quantum_part = pair_terms(state, gen).sum();
  out.classical_part = std::max(out.classical_part, 0.0);
  out.quantum_part = std::max(out.quantum_part, 0.0);
  out.total = out.classical_part + out.quantum_part;
  return out;
}

Matrix quantum_pair_terms(const ModelInstance& model, const ThermalState& state) {
  return pair_terms(state, rotate_generator(model, state.spectrum));
}

double qfi_pure(const ModelInstance& model, const Spectrum& spectrum, Eigen::Index level) {
  if (model.d_hamiltonian.dim() != spectrum.dim()) {
    throw Error(Errc::DimMismatch, "spectrum and model dimensions differ");
  }
  if (level < 0 || level >= spectrum.dim()) throw Error(Errc::InvalidDimension, "level out of range");
  const Vector& e = spectrum.eigenvalues;
  const double tol = kDegeneracyRel * spectrum.scale();
  if ((level > 0 && e(level) - e(level - 1) <= tol) ||
      (level + 1 < e.size() && e(level + 1) - e(level) <= tol)) {
    throw Error(Errc::DegenerateLevel, "level " + std::to_string(level) + " is degenerate");
  }
  const Matrix& v = spectrum.eigenvectors;
  const Vector column = v.transpose() * (model.d_hamiltonian.matrix() * v.col(level));
  double sum = 0.0;
  for (Eigen::Index m = 0; m < e.size(); ++m) {
    if (m == level) continue;
    const double r = column(m) / (e(level) - e(m));
    sum += r * r;
  }
  return 4.0 * sum;
}

double qfi_from_fidelity(const DensityMatrix& minus, const DensityMatrix& plus, double delta) {
  return 4.0 * bures_distance_sq(minus, plus) / (delta * delta);
}

FdEstimate qfi_fidelity_fd(const ModelFactory& factory, double omega,
                           const TemperatureSpec& temperature, const FdOptions& options) {
  const double beta = resolve_beta(temperature, eigh(factory(omega).hamiltonian));
  auto estimate = [&](double delta) {
    const auto minus = density_matrix(state_at(factory, omega - 0.5 * delta, beta));
    const auto plus = density_matrix(state_at(factory, omega + 0.5 * delta, beta));
    return qfi_from_fidelity(minus, plus, delta);
  };
  return fd_ladder(estimate, omega, options);
}

FdEstimate cfi_projective(const ModelFactory& factory, double omega,
                          const TemperatureSpec& temperature, const SymmetricMatrix& observable,
                          const FdOptions& options) {
  const auto center_model = factory(omega);
  if (observable.dim() != center_model.hamiltonian.dim()) {
    throw Error(Errc::DimMismatch, "observable vs model");
  }
  const ThermalState center = [&] {
    auto spectrum = eigh(center_model.hamiltonian);
    const double beta = resolve_beta(temperature, spectrum);
    return gibbs(std::move(spectrum), beta);
  }();

  const Spectrum outcomes = eigh(observable);
  std::vector<Eigen::Index> outcome_of(static_cast<std::size_t>(outcomes.dim()));
  Eigen::Index n_outcomes = 0;
  {
    const double tol = 1e-10 * outcomes.scale();
    for (Eigen::Index i = 0; i < outcomes.dim(); ++i) {
      if (i > 0 && outcomes.eigenvalues(i) - outcomes.eigenvalues(i - 1) > tol) ++n_outcomes;
      outcome_of[static_cast<std::size_t>(i)] = n_outcomes;
    }
    ++n_outcomes;
  }
  const Matrix ut = outcomes.eigenvectors.transpose();

  auto outcome_probs = [&](const ThermalState& s) {
    const Matrix overlap = (ut * s.spectrum.eigenvectors).cwiseAbs2();
    const Vector per_vector = overlap * s.probs;
    Vector probs = Vector::Zero(n_outcomes);
    for (Eigen::Index i = 0; i < per_vector.size(); ++i) {
      probs(outcome_of[static_cast<std::size_t>(i)]) += per_vector(i);
    }
    return probs;
  };
  const Vector p_center = outcome_probs(center);

  auto estimate = [&](double delta) {
    const Vector minus = outcome_probs(state_at(factory, omega - 0.5 * delta, center.beta));
    const Vector plus = outcome_probs(state_at(factory, omega + 0.5 * delta, center.beta));
    double sum = 0.0;
    for (Eigen::Index k = 0; k < n_outcomes; ++k) {
      if (p_center(k) < 1e-12) continue;
      const double dp = (plus(k) - minus(k)) / delta;
      sum += dp * dp / p_center(k);
    }
    return sum;
  };
  return fd_ladder(estimate, omega, options);
}

FdEstimate fi_error_propagation(const ModelFactory& factory, double omega,
                                const TemperatureSpec& temperature,
                                const SymmetricMatrix& observable, const FdOptions& options) {
  const auto center_model = factory(omega);
  if (observable.dim() != center_model.hamiltonian.dim()) {
    throw Error(Errc::DimMismatch, "observable vs model");
  }
  auto spectrum = eigh(center_model.hamiltonian);
  const double beta = resolve_beta(temperature, spectrum);
  const ThermalState center = gibbs(std::move(spectrum), beta);

  const double variance = thermal_variance(center, observable);
  const double scale = observable.max_abs();
  if (variance <= 1e-14 * scale * scale) {
    throw Error(Errc::ZeroVariance, "observable has no thermal fluctuations");
  }
  auto estimate = [&](double delta) {
    const double minus = thermal_expectation(state_at(factory, omega - 0.5 * delta, beta), observable);
    const double plus = thermal_expectation(state_at(factory, omega + 0.5 * delta, beta), observable);
    const double slope = (plus - minus) / delta;
    return slope * slope / variance;
  };
  return fd_ladder(estimate, omega, options);
}

}  // namespace critfish
