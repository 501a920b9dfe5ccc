#include "critfish/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "critfish/error.hpp"
#include "critfish/fisher.hpp"
#include "critfish/hilbert.hpp"
#include "critfish/thermal.hpp"

namespace critfish {

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Toy: return "toy";
    case ModelKind::Lmg: return "lmg";
    case ModelKind::Ising: return "ising";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "toy") return ModelKind::Toy;
  if (lower == "lmg") return ModelKind::Lmg;
  if (lower == "ising") return ModelKind::Ising;
  throw Error(Errc::ConfigError, "unknown model '" + std::string(name) + "'");
}

ModelInstance build_model(ModelKind kind, double omega, double g, int size) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(Errc::InvalidParameter, "omega must be positive and finite");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw Error(Errc::InvalidParameter, "g must be non-negative and finite");
  }
  switch (kind) {
    case ModelKind::Toy: {
      if (g >= omega) {
        throw Error(Errc::BeyondCriticality, "toy model requires g < omega (normal phase)");
      }
      auto ops = make_fock_ops(size);
      auto h = omega * ops.num - (0.25 * g) * ops.x2;
      return ModelInstance{kind, omega, g, size, std::move(h), ops.num, ops.x2};
    }
    case ModelKind::Lmg: {
      auto ops = make_dicke_ops(size);
      auto h = omega * ops.sz - (g / size) * ops.sx2;
      return ModelInstance{kind, omega, g, size, std::move(h), ops.sz, ops.sx2};
    }
    case ModelKind::Ising: {
      auto ops = make_chain_ops(size);
      auto h = omega * ops.sz_total - g * ops.xx_pbc;
      return ModelInstance{kind,           omega,         g, size, std::move(h), ops.sz_total,
                           ops.sx_total.squared(), ops.doubled_bond};
    }
  }
  throw Error(Errc::InvalidParameter, "unknown model kind");
}

ModelFactory model_factory(ModelKind kind, double g, int size) {
  return [kind, g, size](double omega) { return build_model(kind, omega, g, size); };
}

int toy_converged_truncation(double omega, double g, double beta, int cap) {
  if (g >= omega) throw Error(Errc::BeyondCriticality, "toy model requires g < omega");
  auto qfi_at = [&](int n_max) {
    const auto model = build_model(ModelKind::Toy, omega, g, n_max);
    const auto state = gibbs(eigh(model.hamiltonian), beta);
    return qfi_spectral(model, state).total;
  };
  int n = kToyTruncationStart;
  double current = qfi_at(n);
  double previous = current;
  for (; 2 * n <= cap; n *= 2) {
    const double next = qfi_at(2 * n);
    if (std::abs(next - current) <= 1e-8 * std::max(std::abs(current), std::abs(next))) return n;
    previous = current;
    current = next;
  }
  throw TruncationError("no convergence up to n_max = " + std::to_string(n), previous, current);
}

}  // namespace critfish
