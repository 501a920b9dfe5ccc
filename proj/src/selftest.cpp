#include "critfish/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <vector>

#include "critfish/fisher.hpp"
#include "critfish/sweep.hpp"
#include "critfish/toy_analytic.hpp"

namespace critfish {

namespace {

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

struct Check {
  const char* name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

bool run_selftest(const std::function<void(const std::string&)>& sink) {
  const std::vector<Check> checks = {
      {"toy spectral QFI vs closed form (g=0.5, beta*w=1)",
       [] {
         const double omega = 1.0, g = 0.5;
         const double beta = 1.0 / (omega * std::sqrt(1.0 - g / omega));
         const int n = toy_converged_truncation(omega, g, beta);
         const auto model = build_model(ModelKind::Toy, omega, g, n);
         const double numeric = qfi_spectral(model, gibbs(eigh(model.hamiltonian), beta)).total;
         const toy::ToyParams p{omega, g, beta};
         const double exact = toy::qfi_thermal_quantum(p).exact + toy::qfi_thermal_classical(p).exact;
         const double d = rel_diff(numeric, exact);
         return std::pair{d <= 1e-6, fmt("rel diff %.3g (n_max %.0f)", d, n)};
       }},
      {"zero-temperature closed forms agree",
       [] {
         const toy::ToyParams p{1.0, 0.5, kInfiniteBeta};
         const double ground = toy::qfi_eigenstate(p, 0);
         const bool ok = toy::qfi_thermal_quantum(p).exact == ground &&
                         rel_diff(toy::fi_errprop_closed(p), ground) <= 1e-12 && ground == 0.125;
         return std::pair{ok, fmt("ground-state QFI %.17g", ground)};
       }},
      {"LMG N=8 spectral vs fidelity QFI",
       [] {
         const auto factory = model_factory(ModelKind::Lmg, 0.5, 8);
         const auto model = factory(1.0);
         const double spectral = qfi_spectral(model, gibbs(eigh(model.hamiltonian), 5.0)).total;
         const double fd = qfi_fidelity_fd(factory, 1.0, TemperatureSpec::beta(5.0)).value;
         const double d = rel_diff(spectral, fd);
         return std::pair{d <= 1e-4, fmt("rel diff %.3g", d)};
       }},
      {"commuting case g=0 (Ising N=4)",
       [] {
         const auto model = build_model(ModelKind::Ising, 1.0, 0.0, 4);
         const auto state = gibbs(eigh(model.hamiltonian), 0.7);
         const auto b = qfi_spectral(model, state);
         const double expect = 0.49 * thermal_variance(state, model.d_hamiltonian);
         const double d = rel_diff(b.total, expect);
         return std::pair{b.quantum_part == 0.0 && d <= 1e-10, fmt("rel diff %.3g", d)};
       }},
      {"estimator ordering (Ising N=4, g=0.8, beta=2)",
       [] {
         const auto factory = model_factory(ModelKind::Ising, 0.8, 4);
         const auto model = factory(1.0);
         const auto t = TemperatureSpec::beta(2.0);
         const double q = qfi_spectral(model, gibbs(eigh(model.hamiltonian), 2.0)).total;
         const double c = cfi_projective(factory, 1.0, t, model.width).value;
         const double e = fi_error_propagation(factory, 1.0, t, model.width).value;
         return std::pair{e <= c + 1e-6 && c <= q + 1e-6, fmt("errprop %.6g <= cfi ... qfi %.6g", e, q)};
       }},
      {"CSV round trip",
       [] {
         SweepConfig c;
         c.model = ModelKind::Lmg;
         c.size = 6;
         c.g_values = {0.3, 0.9};
         c.temperatures = {kInfiniteBeta, 2.0};
         c.estimators = EstimatorSet::all();
         c.threads = 1;
         const auto rows = run_sweep(c);
         return std::pair{parse_csv(to_csv(rows)) == rows, std::string("4 rows")};
       }},
  };

  bool all_ok = true;
  for (const auto& check : checks) {
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = check.run();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    all_ok = all_ok && ok;
    sink(std::string(ok ? "PASS " : "FAIL ") + check.name + " (" + detail + ")");
  }
  return all_ok;
}

}  // namespace critfish
