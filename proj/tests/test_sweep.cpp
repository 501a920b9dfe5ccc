#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "critfish/error.hpp"
#include "critfish/sweep.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace critfish;
using nlohmann::json;
using testing::rel_err;

namespace {

json base_config() {
  return json::parse(R"({
    "model": "lmg", "size": 6, "omega": 1.0,
    "g_grid": [0.2, 0.9, 1.4],
    "temperature": {"beta_gap": ["inf", 2.0]},
    "estimators": ["qfi_spectral", "qfi_fidelity", "cfi_sx2", "fi_errprop"]
  })");
}

std::string config_error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    return e.what();
  }
  return {};
}

bool bit_equal(const Cell& a, const Cell& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return std::memcmp(&*a, &*b, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("estimator lists") {
  const auto e = parse_estimators("qfi_spectral,cfi_sx2");
  CHECK(e.qfi_spectral);
  CHECK(e.cfi_sx2);
  CHECK_FALSE(e.qfi_fidelity);
  CHECK(parse_estimators("all").toy_analytic);
  CHECK_FALSE(parse_estimators("").any());
  CHECK_THROWS_AS(parse_estimators("qfi_magic"), Error);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(base_config());
  CHECK(c.model == ModelKind::Lmg);
  CHECK(c.size == 6);
  CHECK(c.g_values.size() == 3);
  CHECK(c.temperature_kind == TemperatureSpec::Kind::GapRatio);
  CHECK(std::isinf(c.temperatures[0]));
  CHECK(c.temperatures[1] == 2.0);

  auto doc = base_config();
  doc["g_grid"] = json::parse(R"({"min": 0.5, "max": 1.3, "count": 5, "spacing": "linear"})");
  const auto lin = parse_config(doc);
  CHECK(lin.g_values.size() == 5);
  CHECK(lin.g_values.front() == doctest::Approx(0.5));
  CHECK(lin.g_values.back() == doctest::Approx(1.3));

  doc["model"] = "toy";
  doc["size"] = "adaptive";
  doc["g_grid"] = json::parse(R"({"min": 0.9, "max": 0.9999, "count": 4, "spacing": "log-approach"})");
  const auto log = parse_config(doc);
  CHECK(log.size == 0);
  for (int k = 1; k <= 4; ++k) CHECK(log.g_values[k - 1] == doctest::Approx(1.0 - std::pow(10.0, -k)));

  doc = base_config();
  doc["temperature"] = json::parse(R"({"beta": [0.5, "inf"]})");
  doc["output"] = json::parse(R"({"path": "x.json", "format": "json"})");
  doc["fd"] = json::parse(R"({"rel_tol": 1e-4})");
  doc["threads"] = 3;
  const auto full = parse_config(doc);
  CHECK(full.temperature_kind == TemperatureSpec::Kind::Beta);
  CHECK(full.format == OutputFormat::Json);
  CHECK(full.output_path == "x.json");
  CHECK(full.fd.rel_tol == 1e-4);
  CHECK(full.threads == 3);
}

TEST_CASE("config errors carry the field path") {
  auto doc = base_config();
  doc["g_grid"] = json::parse("[0.5, -0.1]");
  CHECK(config_error_of(doc).find("g_grid[1]") != std::string::npos);

  doc = base_config();
  doc["model"] = "toy";
  doc["size"] = 64;
  doc["g_grid"] = json::parse("[0.5, 1.0]");
  CHECK(config_error_of(doc).find("g_grid[1]") != std::string::npos);

  doc = base_config();
  doc["estimators"] = json::array();
  CHECK(config_error_of(doc).find("estimators") != std::string::npos);

  doc = base_config();
  doc["temperature"] = json::parse(R"({"beta_gap": [1.0], "beta": [1.0]})");
  CHECK(config_error_of(doc).find("temperature") != std::string::npos);

  doc = base_config();
  doc["temperature"] = json::parse(R"({"beta_gap": [0.0]})");
  CHECK(config_error_of(doc).find("temperature") != std::string::npos);

  doc = base_config();
  doc["model"] = "ising";
  doc["size"] = 40;
  CHECK(config_error_of(doc).find("size") != std::string::npos);

  doc = base_config();
  doc["output"] = json::parse(R"({"format": "xml"})");
  CHECK(config_error_of(doc).find("output.format") != std::string::npos);

  doc = base_config();
  doc.erase("model");
  CHECK(config_error_of(doc).find("model") != std::string::npos);
  CHECK(config_error_of(json::array()).find("$") != std::string::npos);
}

TEST_CASE("toy point with every estimator agrees with the closed forms") {
  SweepConfig c;
  c.model = ModelKind::Toy;
  c.size = 0;
  c.g_values = {0.5};
  c.temperature_kind = TemperatureSpec::Kind::Beta;
  c.temperatures = {1.0};
  c.estimators = EstimatorSet::all();
  const auto row = evaluate_point(c, 0.5, 1.0);
  CHECK(row.status == "ok");
  CHECK(row.n >= 64);
  const oracle::Toy o{1.0, 0.5, 1.0};
  CHECK(rel_err(*row.qfi_spectral_total, o.total()) <= 1e-6);
  CHECK(rel_err(*row.analytic_qfi_total, o.total()) <= 1e-12);
  CHECK(rel_err(*row.qfi_fidelity, *row.analytic_qfi_total) <= 1e-4);
  CHECK(rel_err(*row.fi_errprop, *row.analytic_fi_errprop) <= 1e-5);
  CHECK(*row.cfi_sx2 <= *row.qfi_spectral_total + 1e-6);
  CHECK(*row.fi_errprop <= *row.cfi_sx2 + 1e-6);
}

TEST_CASE("failed cells become null with a status") {
  SweepConfig c;
  c.model = ModelKind::Toy;
  c.size = 32;
  c.g_values = {0.0};
  c.temperature_kind = TemperatureSpec::Kind::Beta;
  c.temperatures = {1.0};
  c.estimators = EstimatorSet::all();
  const auto row = evaluate_point(c, 0.0, 1.0);
  CHECK_FALSE(row.analytic_fi_errprop.has_value());
  CHECK(row.status.find("analytic_fi_errprop:UndefinedForZeroCoupling") != std::string::npos);
  CHECK(row.qfi_spectral_total.has_value());

  c.model = ModelKind::Lmg;
  c.size = 4;
  const auto beyond = evaluate_point(c, -1.0, 1.0);
  CHECK_FALSE(beyond.ok());
  CHECK_FALSE(beyond.qfi_spectral_total.has_value());
}

TEST_CASE("LMG and Ising reference sweeps have 240 rows") {
  for (auto [kind, n] : {std::pair{ModelKind::Lmg, 20}, std::pair{ModelKind::Ising, 6}}) {
    SweepConfig c;
    c.model = kind;
    c.size = n;
    for (int i = 0; i < 60; ++i) c.g_values.push_back(0.5 + 0.8 * i / 59.0);
    c.temperatures = {INFINITY, 180.0, 20.0, 2.0};
    c.estimators = parse_estimators("qfi_spectral");
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 240);
    for (const auto& r : rows) {
      CHECK(r.qfi_spectral_total.has_value());
      CHECK(std::isfinite(*r.qfi_spectral_total));
    }
    CHECK(rows[0].g == 0.5);
    CHECK(std::isinf(*rows[0].beta_gap_ratio));
    CHECK(*rows[1].beta_gap_ratio == 180.0);
    CHECK(rows[4].g == rows[5].g);
  }
}

TEST_CASE("CSV round trip is bit exact") {
  auto c = parse_config(base_config());
  c.model = ModelKind::Ising;
  c.size = 4;
  auto rows = run_sweep(c);
  // add a row with failures and awkward values
  SweepRow odd;
  odd.model = "toy";
  odd.n = 64;
  odd.omega = 1.0 / 3.0;
  odd.g = 0.1;
  odd.beta = 1e-300;
  odd.beta_gap_ratio = INFINITY;
  odd.qfi_spectral_total = 5e-324;
  odd.status = "qfi_fidelity:NoFDConvergence;cfi_sx2:ZeroVariance";
  rows.push_back(odd);

  const std::string text = to_csv(rows);
  CHECK(text.find("nan") == std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.substr(0, text.find('\n')).find("model,N,omega,g,beta,beta_gap_ratio,gap,qfi_fidelity") == 0);
  const auto back = parse_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].model == rows[i].model);
    CHECK(back[i].n == rows[i].n);
    CHECK(back[i].status == rows[i].status);
    CHECK(bit_equal(back[i].beta, rows[i].beta));
    CHECK(bit_equal(back[i].beta_gap_ratio, rows[i].beta_gap_ratio));
    CHECK(bit_equal(back[i].qfi_spectral_total, rows[i].qfi_spectral_total));
    CHECK(bit_equal(back[i].qfi_fidelity, rows[i].qfi_fidelity));
    CHECK(bit_equal(back[i].cfi_sx2, rows[i].cfi_sx2));
    CHECK(bit_equal(back[i].fi_errprop, rows[i].fi_errprop));
    CHECK(back[i] == rows[i]);
  }
  CHECK(to_csv(back) == text);
}

TEST_CASE("JSON output") {
  const auto rows = run_sweep(parse_config(base_config()));
  const auto doc = to_json(rows);
  REQUIRE(doc.is_array());
  CHECK(doc.size() == rows.size());
  CHECK(doc[0]["beta"] == "inf");
  CHECK(doc[0]["beta_gap_ratio"] == "inf");
  CHECK(doc[0]["N"] == 6);
  for (const auto& name : sweep_columns()) CHECK(doc[0].contains(name));
  CHECK(json::parse(render(rows, OutputFormat::Json)) == doc);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  auto c = parse_config(base_config());
  c.threads = 1;
  const auto serial = run_sweep(c);
  c.threads = 4;
  const auto parallel = run_sweep(c);
  const auto again = run_sweep(c);
  CHECK(to_csv(serial) == to_csv(parallel));
  CHECK(to_csv(parallel) == to_csv(again));
  CHECK(serial == parallel);
}

TEST_CASE("write_output to a file") {
  const auto rows = run_sweep(parse_config(base_config()));
  const auto path = std::filesystem::temp_directory_path() / "critfish_sweep_test.csv";
  write_output(rows, path.string(), OutputFormat::Csv);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == to_csv(rows));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_output(rows, "/nonexistent-dir/x.csv", OutputFormat::Csv), Error);
}

TEST_CASE("figure presets") {
  const auto f1 = preset_fig1(ModelKind::Lmg, 20);
  CHECK(f1.g_values.size() == 60);
  CHECK(f1.g_values.front() == doctest::Approx(0.5));
  CHECK(f1.g_values.back() == doctest::Approx(1.3));
  CHECK(std::isinf(f1.temperatures[0]));
  CHECK(f1.temperatures[1] == 180.0);
  CHECK(f1.temperatures.size() == 27);
  CHECK(f1.estimators.qfi_spectral);
  const auto f2 = preset_fig2(ModelKind::Ising, 6, 2.0);
  CHECK(f2.temperatures.size() == 2);
  CHECK(f2.estimators.cfi_sx2);
  CHECK(f2.estimators.fi_errprop);
  CHECK_NOTHROW(validate_config(f1));
  CHECK_NOTHROW(validate_config(f2));
}
