#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "critfish/fisher.hpp"
#include "critfish/models.hpp"
#include "critfish/thermal.hpp"

namespace critfish {

enum class OutputFormat { Csv, Json };

struct EstimatorSet {
  bool qfi_spectral = false;
  bool qfi_fidelity = false;
  bool cfi_sx2 = false;
  bool fi_errprop = false;
  bool toy_analytic = false;

  bool any() const noexcept {
    return qfi_spectral || qfi_fidelity || cfi_sx2 || fi_errprop || toy_analytic;
  }
  static EstimatorSet all() { return {true, true, true, true, true}; }
};

/// Parses a comma-separated list such as "qfi_spectral,cfi_sx2".
EstimatorSet parse_estimators(std::string_view list);

/// One sweep over a (g, temperature) grid. Units: hbar = k_B = 1, omega is
/// the energy unit and Fisher values are in 1/omega^2.
struct SweepConfig {
  ModelKind model = ModelKind::Lmg;
  int size = 0;  // n_max for Toy (0 = adaptive truncation), spin count otherwise
  double omega = 1.0;
  std::vector<double> g_values;
  TemperatureSpec::Kind temperature_kind = TemperatureSpec::Kind::GapRatio;
  std::vector<double> temperatures;  // beta*gap ratios or betas, +inf allowed
  EstimatorSet estimators;
  std::string output_path = "-";
  OutputFormat format = OutputFormat::Csv;
  FdOptions fd;
  int threads = 0;  // 0 = hardware concurrency
};

/// Builds a config from its JSON document. Errors are ConfigError with the
/// offending field path in the message.
SweepConfig parse_config(const nlohmann::json& doc);
/// Throws ConfigError. `point_mode` skips the Toy g < omega check so that the
/// evaluation itself reports BeyondCriticality.
void validate_config(const SweepConfig& config, bool point_mode = false);

/// A numeric cell that is either a value or null. Nulls produced by failures
/// are explained in the row's status.
using Cell = std::optional<double>;

struct SweepRow {
  std::string model;
  int n = 0;
  double omega = 0.0;
  double g = 0.0;
  Cell beta;
  Cell beta_gap_ratio;
  Cell gap;
  Cell qfi_fidelity;
  Cell qfi_spectral_total;
  Cell qfi_classical_part;
  Cell qfi_quantum_part;
  Cell cfi_sx2;
  Cell fi_errprop;
  Cell analytic_qfi_total;
  Cell analytic_qfi_quantum;
  Cell analytic_qfi_classical;
  Cell analytic_fi_errprop;
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
  bool operator==(const SweepRow&) const = default;
};

/// Column names in output order.
const std::vector<std::string>& sweep_columns();

/// Evaluates one grid point. Never throws for numerical failures; they are
/// recorded in the status column.
SweepRow evaluate_point(const SweepConfig& config, double g, double temperature);

/// One row per (g, temperature) pair, g-major, in grid order regardless of
/// which worker finished first. Worker count: config.threads (or hardware
/// concurrency), capped by the CRITFISH_THREADS environment variable.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// CSV: header row, LF line endings, 17 significant digits, empty cell for
/// null and `inf` for infinite temperatures.
std::string to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::string_view text);
/// JSON array of row objects with the CSV column names; null for missing
/// cells and the string "inf" for infinite temperatures.
nlohmann::json to_json(const std::vector<SweepRow>& rows);
nlohmann::json to_json(const SweepRow& row);

std::string render(const std::vector<SweepRow>& rows, OutputFormat format);
/// Writes to `path`, or stdout for "-".
void write_output(const std::vector<SweepRow>& rows, const std::string& path, OutputFormat format);

/// `fig1` grid: g/omega in [0.5, 1.3] (60 points) against beta*gap in
/// {inf, 180} plus 25 log-spaced ratios from 0.1 to 1000.
SweepConfig preset_fig1(ModelKind model, int size);
/// `fig2` grid: g/omega in [0.5, 1.3] (60 points) at beta*gap in
/// {inf, ratio}, with QFI, projective width-measurement CFI and the
/// error-propagation bound.
SweepConfig preset_fig2(ModelKind model, int size, double beta_gap);

}  // namespace critfish
