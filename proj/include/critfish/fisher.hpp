#pragma once

#include <limits>

#include "critfish/linalg.hpp"
#include "critfish/models.hpp"
#include "critfish/thermal.hpp"

namespace critfish {

enum class FisherMethod { Spectral, FidelityFD, Pure };

/// Fisher information about omega, in units of 1/omega^2.
struct FisherBreakdown {
  double total = 0.0;
  double classical_part = 0.0;
  double quantum_part = 0.0;
  FisherMethod method = FisherMethod::Spectral;
  struct Meta {
    double degeneracy_tol = 0.0;
    double delta_omega = std::numeric_limits<double>::quiet_NaN();
    int truncation = 0;
  } meta;
};

/// Mixed-state QFI of a Gibbs state,
///
///   I = sum_n (d p_n)^2 / p_n + 2 sum_{n,m} (p_n - p_m)^2/(p_n + p_m) |<n|d m>|^2,
///
/// with <n|d m> = <n|dH|m>/(E_m - E_n) and d E_n = <n|dH|n>. Inside a
/// degenerate subspace (|E_i - E_j| <= 1e-10*scale) the basis is rotated to
/// diagonalize dH first, so intra-subspace quantum terms vanish. Derivatives
/// are taken at fixed beta. At beta = +inf the classical part is zero.
FisherBreakdown qfi_spectral(const ModelInstance& model, const ThermalState& state);

/// Per-pair quantum-term contributions Q(n, m) (symmetric, zero diagonal) in
/// energy-ordered level indices; they sum to qfi_spectral(...).quantum_part.
Matrix quantum_pair_terms(const ModelInstance& model, const ThermalState& state);

/// Pure-state QFI of level n: 4 sum_{m != n} |<m|dH|n>|^2 / (E_n - E_m)^2.
/// Throws DegenerateLevel if E_n is degenerate within 1e-10*scale.
double qfi_pure(const ModelInstance& model, const Spectrum& spectrum, Eigen::Index level);

/// Finite-difference ladder settings. The step starts at delta_omega (or
/// 1e-4*omega when zero) and is halved until two consecutive estimates agree
/// within rel_tol (plus abs_floor); below min_delta_rel*omega the ladder
/// gives up with NoFDConvergence.
struct FdOptions {
  double delta_omega = 0.0;
  double rel_tol = 1e-3;
  double min_delta_rel = 1e-8;
  double abs_floor = 1e-12;
};

struct FdEstimate {
  double value;
  double delta_omega;  // step of the returned (finer) estimate
  double coarse;       // estimate at twice that step
};

/// 8 (1 - sqrt(F)) / delta^2 with F the Uhlmann fidelity of the two states,
/// evaluated as 4 d_B^2 / delta^2 from the squared Bures distance. Using F
/// itself instead of sqrt(F) would double the QFI.
double qfi_from_fidelity(const DensityMatrix& minus, const DensityMatrix& plus, double delta);

/// QFI from the fidelity between Gibbs states at omega -/+ delta/2. beta is
/// resolved once at the central omega and held fixed for both states.
FdEstimate qfi_fidelity_fd(const ModelFactory& factory, double omega,
                           const TemperatureSpec& temperature, const FdOptions& options = {});

/// Classical Fisher information of a projective measurement of `observable`.
/// Eigenvalues within 1e-10*scale are merged into one outcome; outcomes with
/// probability below 1e-12 are skipped.
FdEstimate cfi_projective(const ModelFactory& factory, double omega,
                          const TemperatureSpec& temperature, const SymmetricMatrix& observable,
                          const FdOptions& options = {});

/// Error-propagation bound (d<A>/d omega)^2 / Var(A). Throws ZeroVariance
/// when Var(A) <= 1e-14 * max|A_ij|^2.
FdEstimate fi_error_propagation(const ModelFactory& factory, double omega,
                                const TemperatureSpec& temperature,
                                const SymmetricMatrix& observable, const FdOptions& options = {});

}  // namespace critfish
