// critfish command line: single points, config sweeps, figure presets, self test.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "critfish/critfish.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

const char* kUnits =
    "Units: hbar = k_B = 1. omega is the energy unit, g is given in the same units,\n"
    "beta in 1/omega, and every Fisher information is reported in 1/omega^2.\n"
    "Temperatures are set either as beta directly or as beta*gap, where gap is\n"
    "E1 - E0 of the model at that grid point. Use 'inf' for zero temperature.";

int report(critfish_status s, const char* what) {
  std::fprintf(stderr, "critfish %s: %s\n", what, critfish_last_error());
  return s == CRITFISH_ERR_NUMERIC ? kExitNumeric : kExitConfig;
}

void warn_doubled_bond(const std::string& model, int n) {
  std::string m = model;
  for (auto& ch : m) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (m == "ising" && n == 2) {
    std::fprintf(stderr,
                 "warning: Ising N=2 with periodic boundaries couples the same pair twice "
                 "(bond strength 2g)\n");
  }
}

struct Owned {
  critfish_config* config = nullptr;
  critfish_table* table = nullptr;
  ~Owned() {
    critfish_table_free(table);
    critfish_config_free(config);
  }
};

// Applies --out/--format/--threads, runs the sweep and writes the table.
int run_and_write(Owned& h, const std::string& out, const std::string& format, int threads) {
  critfish_status s = critfish_config_set_output(h.config, out.empty() ? nullptr : out.c_str(),
                                                 format.empty() ? nullptr : format.c_str());
  if (s != CRITFISH_OK) return report(s, "output");
  if (threads >= 0 && (s = critfish_config_set_threads(h.config, threads)) != CRITFISH_OK) {
    return report(s, "threads");
  }
  if ((s = critfish_run_sweep(h.config, &h.table)) != CRITFISH_OK) return report(s, "sweep");
  s = critfish_table_write(h.table, critfish_config_output_path(h.config),
                           critfish_config_output_format(h.config));
  if (s != CRITFISH_OK) return report(s, "write");
  return kExitOk;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("critfish: Fisher information of critical quantum models at finite temperature.\n") +
               kUnits};
  app.require_subcommand(1);
  app.set_version_flag("--version", critfish_version());

  // point
  auto* point = app.add_subcommand("point", "Evaluate one (g, temperature) grid point; prints a JSON row");
  std::string p_model;
  int p_size = 0;
  double p_omega = 1.0, p_g = 0.0, p_beta_gap = 0.0, p_beta = 0.0;
  std::string p_estimators = "qfi_spectral";
  point->add_option("--model", p_model, "toy, lmg or ising")->required();
  point->add_option("-N,--size", p_size, "spin count (lmg, ising) or Fock cutoff n_max (toy, 0 = adaptive)");
  point->add_option("--omega", p_omega, "level splitting omega (energy unit)")->capture_default_str();
  point->add_option("-g", p_g, "coupling g in units of energy")->required();
  auto* pbg = point->add_option("--beta-gap", p_beta_gap, "inverse temperature as beta*gap (or inf)");
  auto* pb = point->add_option("--beta", p_beta, "inverse temperature beta in 1/omega (or inf)");
  pbg->excludes(pb);
  point->add_option("--estimators", p_estimators,
                    "comma list of qfi_spectral, qfi_fidelity, cfi_sx2, fi_errprop, toy_analytic, or all")
      ->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a JSON sweep configuration");
  std::string s_config, s_out, s_format;
  int s_threads = -1;
  sweep->add_option("--config", s_config, "path of the JSON config")->required();
  sweep->add_option("--out", s_out, "output path, '-' for stdout (overrides the config)");
  sweep->add_option("--format", s_format, "csv or json (overrides the config)");
  sweep->add_option("--threads", s_threads, "worker count, 0 = hardware concurrency");

  // fig1
  auto* fig1 = app.add_subcommand("fig1", "QFI over the g grid and a beta*gap ladder from 0.1 to 1000 plus inf");
  std::string f1_model, f1_out = "-", f1_format;
  int f1_size = 0, f1_threads = -1;
  fig1->add_option("--model", f1_model, "lmg or ising")->required();
  fig1->add_option("-N,--size", f1_size, "spin count")->required();
  fig1->add_option("--out", f1_out, "output path, '-' for stdout")->capture_default_str();
  fig1->add_option("--format", f1_format, "csv or json");
  fig1->add_option("--threads", f1_threads, "worker count, 0 = hardware concurrency");

  // fig2
  auto* fig2 = app.add_subcommand("fig2", "QFI(T=0), QFI(T), CFI(Sx^2, T) and error propagation vs g");
  std::string f2_model, f2_out = "-", f2_format;
  int f2_size = 0, f2_threads = -1;
  double f2_ratio = 0.0;
  fig2->add_option("--model", f2_model, "lmg or ising")->required();
  fig2->add_option("-N,--size", f2_size, "spin count")->required();
  fig2->add_option("--beta-gap", f2_ratio, "finite temperature as beta*gap")->required();
  fig2->add_option("--out", f2_out, "output path, '-' for stdout")->capture_default_str();
  fig2->add_option("--format", f2_format, "csv or json");
  fig2->add_option("--threads", f2_threads, "worker count, 0 = hardware concurrency");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle agreement checks");
  for (auto* sub : {point, sweep, fig1, fig2}) sub->footer(kUnits);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  Owned h;
  critfish_status s = CRITFISH_OK;

  if (*point) {
    if (!*pbg && !*pb) {
      std::cerr << "error: point needs --beta-gap or --beta\n\n" << point->help();
      return kExitConfig;
    }
    warn_doubled_bond(p_model, p_size);
    const bool ratio = static_cast<bool>(*pbg);
    s = critfish_config_point(p_model.c_str(), p_size, p_omega, p_g, ratio ? 1 : 0,
                              ratio ? p_beta_gap : p_beta, p_estimators.c_str(), &h.config);
    if (s != CRITFISH_OK) return report(s, "point");
    const critfish_status run = critfish_run_point(h.config, &h.table);
    if (!h.table) return report(run, "point");
    std::string kind = critfish_last_error_kind();
    std::string message = critfish_last_error();
    char* text = nullptr;
    if ((s = critfish_table_render(h.table, "json", &text)) != CRITFISH_OK) return report(s, "render");
    const auto rows = nlohmann::json::parse(text);
    critfish_string_free(text);
    std::cout << rows.at(0).dump(2) << '\n';
    if (run != CRITFISH_OK) {
      std::fprintf(stderr, "critfish point: %s (%s)\n", kind.c_str(), message.c_str());
      return kExitNumeric;
    }
    return kExitOk;
  }

  if (*sweep) {
    std::string text;
    try {
      text = read_file(s_config);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "critfish sweep: %s\n", e.what());
      return kExitConfig;
    }
    if ((s = critfish_config_from_json(text.c_str(), &h.config)) != CRITFISH_OK) return report(s, "config");
    return run_and_write(h, s_out, s_format, s_threads);
  }

  if (*fig1) {
    warn_doubled_bond(f1_model, f1_size);
    if ((s = critfish_config_fig1(f1_model.c_str(), f1_size, &h.config)) != CRITFISH_OK) return report(s, "fig1");
    return run_and_write(h, f1_out, f1_format, f1_threads);
  }

  if (*fig2) {
    warn_doubled_bond(f2_model, f2_size);
    if ((s = critfish_config_fig2(f2_model.c_str(), f2_size, f2_ratio, &h.config)) != CRITFISH_OK) {
      return report(s, "fig2");
    }
    return run_and_write(h, f2_out, f2_format, f2_threads);
  }

  if (*selftest) {
    s = critfish_selftest([](const char* line, void*) { std::puts(line); }, nullptr);
    if (s != CRITFISH_OK) {
      std::fprintf(stderr, "selftest: %s\n", critfish_last_error());
      return kExitNumeric;
    }
    std::puts("selftest: all checks passed");
    return kExitOk;
  }
  return kExitConfig;
}
