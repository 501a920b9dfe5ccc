#include <doctest.h>

#include <cmath>

#include "critfish/error.hpp"
#include "critfish/fisher.hpp"
#include "critfish/hilbert.hpp"
#include "critfish/models.hpp"
#include "critfish/thermal.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace critfish;
using testing::rel_err;

namespace {

ThermalState state_of(const ModelInstance& m, double beta) { return gibbs(eigh(m.hamiltonian), beta); }

ModelInstance converged_toy(double g, double beta) {
  return build_model(ModelKind::Toy, 1.0, g, toy_converged_truncation(1.0, g, beta));
}

}  // namespace

TEST_CASE("commuting case: g = 0") {
  struct Case {
    ModelKind kind;
    int size;
  };
  for (const Case c : {Case{ModelKind::Toy, 80}, Case{ModelKind::Lmg, 9}, Case{ModelKind::Ising, 4}}) {
    for (double beta : {0.3, 1.0, 4.0}) {
      const auto m = build_model(c.kind, 1.0, 0.0, c.size);
      const auto s = state_of(m, beta);
      const auto q = qfi_spectral(m, s);
      CHECK(q.quantum_part == 0.0);
      const double expect = beta * beta * thermal_variance(s, m.d_hamiltonian);
      CHECK(rel_err(q.total, expect) <= 1e-10);
      CHECK(q.total == q.classical_part + q.quantum_part);
      CHECK(q.method == FisherMethod::Spectral);
    }
  }
}

TEST_CASE("toy model matches the closed forms") {
  for (double g : {0.3, 0.6}) {
    for (double y : {0.5, 3.0}) {
      const double beta = y / std::sqrt(1.0 - g);
      const auto m = converged_toy(g, beta);
      const auto q = qfi_spectral(m, state_of(m, beta));
      const oracle::Toy o{1.0, g, beta};
      CHECK(rel_err(q.quantum_part, o.quantum()) <= 1e-6);
      CHECK(rel_err(q.classical_part, o.classical()) <= 1e-6);
      CHECK(rel_err(q.total, o.total()) <= 1e-6);
    }
  }
}

TEST_CASE("pure-state QFI") {
  const auto m = build_model(ModelKind::Toy, 1.0, 0.5, 256);
  const auto sp = eigh(m.hamiltonian);
  CHECK(qfi_pure(m, sp, 0) == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(qfi_pure(m, sp, 1) == doctest::Approx(0.375).epsilon(1e-9));
  for (auto kind : {ModelKind::Toy, ModelKind::Lmg}) {
    const auto free = build_model(kind, 1.0, 0.0, 8);
    CHECK(qfi_pure(free, eigh(free.hamiltonian), 0) == 0.0);
  }
  const auto ising = build_model(ModelKind::Ising, 1.0, 0.0, 4);
  CHECK_THROWS_AS(qfi_pure(ising, eigh(ising.hamiltonian), 1), Error);
}

TEST_CASE("low-temperature limit reaches the ground-state QFI") {
  struct Case {
    ModelKind kind;
    double g;
    int size;
  };
  for (const Case c : {Case{ModelKind::Toy, 0.5, 128}, Case{ModelKind::Lmg, 0.7, 12}, Case{ModelKind::Ising, 0.6, 5}}) {
    const auto m = build_model(c.kind, 1.0, c.g, c.size);
    const auto sp = eigh(m.hamiltonian);
    const double beta = 1e6 / gap(sp);
    CHECK(rel_err(qfi_spectral(m, gibbs(sp, beta)).total, qfi_pure(m, sp, 0)) <= 1e-4);
    CHECK(rel_err(qfi_spectral(m, gibbs(sp, kInfiniteBeta)).total, qfi_pure(m, sp, 0)) <= 1e-10);
  }
}

TEST_CASE("fidelity finite differences") {
  const auto lmg = model_factory(ModelKind::Lmg, 0.5, 8);
  const auto m = lmg(1.0);
  const double spectral = qfi_spectral(m, state_of(m, 5.0)).total;
  const auto fd = qfi_fidelity_fd(lmg, 1.0, TemperatureSpec::beta(5.0));
  CHECK(rel_err(fd.value, spectral) <= 1e-4);
  CHECK(fd.delta_omega > 0.0);
  CHECK(rel_err(fd.value, fd.coarse) <= 1e-3);

  const auto toy = model_factory(ModelKind::Toy, 0.5, 128);
  CHECK(qfi_fidelity_fd(toy, 1.0, TemperatureSpec::beta(kInfiniteBeta)).value == doctest::Approx(0.125).epsilon(1e-4));

  const auto rho = density_matrix(state_of(m, 5.0));
  CHECK(qfi_from_fidelity(rho, rho, 1e-4) == doctest::Approx(0.0));

  // gap ratio is resolved once at the centre
  const double r = 2.0;
  const double beta = r / gap(eigh(m.hamiltonian));
  const auto by_ratio = qfi_fidelity_fd(lmg, 1.0, TemperatureSpec::gap_ratio(r));
  const auto by_beta = qfi_fidelity_fd(lmg, 1.0, TemperatureSpec::beta(beta));
  CHECK(by_ratio.value == by_beta.value);
}

TEST_CASE("finite-difference ladder gives up") {
  const auto lmg = model_factory(ModelKind::Lmg, 0.5, 8);
  FdOptions o;
  o.rel_tol = 1e-15;
  o.abs_floor = 0.0;
  o.min_delta_rel = 1e-5;
  try {
    qfi_fidelity_fd(lmg, 1.0, TemperatureSpec::beta(5.0), o);
    FAIL("expected NoFDConvergence");
  } catch (const FdConvergenceError& e) {
    CHECK(e.code() == Errc::NoFDConvergence);
    CHECK(std::isfinite(e.fine()));
  }
}

TEST_CASE("projective classical Fisher information") {
  const auto f = model_factory(ModelKind::Lmg, 0.8, 10);
  const auto m = f(1.0);
  for (double beta : {0.5, 2.0}) {
    const auto q = qfi_spectral(m, state_of(m, beta));
    const auto energy = cfi_projective(f, 1.0, TemperatureSpec::beta(beta), m.hamiltonian);
    CHECK(rel_err(energy.value, q.classical_part) <= 1e-4);
    const auto id = cfi_projective(f, 1.0, TemperatureSpec::beta(beta), SymmetricMatrix::identity(m.hamiltonian.dim()));
    CHECK(id.value == 0.0);
  }
}

TEST_CASE("error propagation") {
  for (double g : {0.3, 0.6}) {
    for (double y : {0.5, 3.0}) {
      const double beta = y / std::sqrt(1.0 - g);
      const int n = toy_converged_truncation(1.0, g, beta);
      const auto f = model_factory(ModelKind::Toy, g, n);
      const auto e = fi_error_propagation(f, 1.0, TemperatureSpec::beta(beta), f(1.0).width);
      CHECK(rel_err(e.value, oracle::Toy{1.0, g, beta}.errprop()) <= 1e-5);
    }
  }
  // free oscillator: <x2> = coth(beta/2), F = beta^2 csch^2(beta) / 2
  const auto f0 = model_factory(ModelKind::Toy, 0.0, 128);
  for (double beta : {0.7, 2.0}) {
    const double s = std::sinh(beta);
    const auto e = fi_error_propagation(f0, 1.0, TemperatureSpec::beta(beta), f0(1.0).width);
    CHECK(rel_err(e.value, beta * beta / (s * s) / 2.0) <= 1e-5);
    CHECK(e.value > 0.0);
  }
  const auto m = f0(1.0);
  try {
    fi_error_propagation(f0, 1.0, TemperatureSpec::beta(1.0), SymmetricMatrix::identity(m.hamiltonian.dim()));
    FAIL("expected ZeroVariance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroVariance);
  }
}

TEST_CASE("estimator ordering on random points") {
  testing::Gen gen(606);
  for (int trial = 0; trial < 12; ++trial) {
    const bool lmg = trial % 2 == 0;
    const auto kind = lmg ? ModelKind::Lmg : ModelKind::Ising;
    const double g = gen.uniform(0.0, 1.6);
    const double beta = std::pow(10.0, gen.uniform(-0.5, 1.2));
    const auto f = model_factory(kind, g, lmg ? 7 : 4);
    const auto m = f(1.0);
    const double q = qfi_spectral(m, state_of(m, beta)).total;
    const double c = cfi_projective(f, 1.0, TemperatureSpec::beta(beta), m.width).value;
    const double e = fi_error_propagation(f, 1.0, TemperatureSpec::beta(beta), m.width).value;
    CAPTURE(g);
    CAPTURE(beta);
    CHECK(e <= c + 1e-6);
    CHECK(c <= q + 1e-6);
  }
}

TEST_CASE("toy quantum term only couples levels two apart") {
  for (double g : {0.3, 0.9}) {
    const double beta = 1.0 / std::sqrt(1.0 - g);
    const auto m = converged_toy(g, beta);
    const auto s = state_of(m, beta);
    const Matrix pairs = quantum_pair_terms(m, s);
    const double total = qfi_spectral(m, s).quantum_part;
    CHECK(rel_err(pairs.sum(), total) <= 1e-12);
    double outside = 0.0;
    for (Eigen::Index i = 0; i < pairs.rows(); ++i)
      for (Eigen::Index j = 0; j < pairs.cols(); ++j)
        if (std::abs(i - j) != 2) outside += std::abs(pairs(i, j));
    CHECK(outside < 1e-12 * total);
  }
}

TEST_CASE("toy quantum term grows with temperature") {
  const double g = 0.9;
  const double w = std::sqrt(1.0 - g);
  const auto cold = converged_toy(g, kInfiniteBeta);
  const double base = qfi_spectral(cold, state_of(cold, kInfiniteBeta)).quantum_part;
  double last = base;
  for (double y : {20.0, 5.0, 2.0, 1.0, 0.5, 0.2}) {
    const auto m = converged_toy(g, y / w);
    const double q = qfi_spectral(m, state_of(m, y / w)).quantum_part;
    CHECK(q >= last * (1.0 - 1e-9));
    CHECK(q <= 2.0 * base * (1.0 + 1e-9));
    last = q;
  }
  CHECK(last > 1.9 * base);
}

TEST_CASE("degenerate Ising levels get a well-defined QFI") {
  // periodic chain at g = 0 has degenerate single-flip levels; dH is diagonal
  // there, so the rotation must leave quantum_part exactly zero
  const auto m = build_model(ModelKind::Ising, 1.0, 0.0, 6);
  const auto q = qfi_spectral(m, state_of(m, 0.4));
  CHECK(q.quantum_part == 0.0);
  CHECK(q.meta.degeneracy_tol > 0.0);
  // and with coupling the spectral and fidelity routes still agree
  const auto f = model_factory(ModelKind::Ising, 1.2, 6);
  const auto mi = f(1.0);
  const double spectral = qfi_spectral(mi, state_of(mi, 2.0)).total;
  CHECK(rel_err(qfi_fidelity_fd(f, 1.0, TemperatureSpec::beta(2.0)).value, spectral) <= 1e-4);
}
