#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "critfish/linalg.hpp"

namespace critfish {

enum class ModelKind { Toy, Lmg, Ising };

std::string_view model_name(ModelKind kind) noexcept;
/// Parses "toy", "lmg" or "ising" (case-insensitive); throws ConfigError.
ModelKind parse_model(std::string_view name);

/// One Hamiltonian H(omega, g) with its exact omega-derivative dH, in units
/// hbar = 1.
///
///   Toy:   H = omega a^dag a - (g/4)(a + a^dag)^2,   dH = a^dag a
///   LMG:   H = omega Sz - (g/N) Sx^2,                dH = Sz
///   Ising: H = sum_n omega sz_n - g sx_n sx_{n+1},   dH = sum_n sz_n
///
/// `width` is the width observable used for measurement-based estimators:
/// (a + a^dag)^2 for Toy, Sx^2 for LMG and (sum_n sx_n)^2 for Ising.
struct ModelInstance {
  ModelKind kind;
  double omega;
  double g;
  int size;  // n_max for Toy, number of spins otherwise
  SymmetricMatrix hamiltonian;
  SymmetricMatrix d_hamiltonian;
  SymmetricMatrix width;
  bool doubled_bond = false;
};

/// Rejects omega <= 0 or g < 0 (InvalidParameter), a Toy model at g >= omega
/// (BeyondCriticality) and sizes outside the Hilbert-space builders' bounds.
ModelInstance build_model(ModelKind kind, double omega, double g, int size);

/// Rebuilds a model at a shifted omega with everything else fixed.
using ModelFactory = std::function<ModelInstance(double omega)>;
ModelFactory model_factory(ModelKind kind, double g, int size);

inline constexpr int kToyTruncationStart = 64;
inline constexpr int kToyTruncationCap = 4096;

/// Smallest n_max in 64, 128, ..., cap whose thermal QFI differs from the
/// next size by less than 1e-8 relative. Throws TruncationError past the cap.
int toy_converged_truncation(double omega, double g, double beta, int cap = kToyTruncationCap);

}  // namespace critfish
