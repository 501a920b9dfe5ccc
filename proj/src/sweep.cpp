#include "critfish/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "critfish/error.hpp"
#include "critfish/hilbert.hpp"
#include "critfish/toy_analytic.hpp"

namespace critfish {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
  throw Error(Errc::ConfigError, path + ": " + message);
}

double parse_temperature(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInfiniteBeta;
    config_error(path, "expected a number or \"inf\"");
  }
  if (!v.is_number()) config_error(path, "expected a number or \"inf\"");
  return v.get<double>();
}

double number_at(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) config_error(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(path + "." + key, "expected a number");
  return v.get<double>();
}

std::vector<double> parse_g_grid(const json& v, double omega) {
  if (v.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) config_error("g_grid[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  if (!v.is_object()) config_error("g_grid", "expected an array or a range object");
  const double lo = number_at(v, "min", "g_grid");
  const double hi = number_at(v, "max", "g_grid");
  if (!v.contains("count") || !v.at("count").is_number_integer()) {
    config_error("g_grid.count", "expected an integer");
  }
  const int count = v.at("count").get<int>();
  if (count < 1) config_error("g_grid.count", "must be >= 1");
  if (hi < lo) config_error("g_grid.max", "must be >= min");
  const std::string spacing = v.value("spacing", std::string("linear"));

  std::vector<double> out(static_cast<std::size_t>(count));
  if (spacing == "linear") {
    for (int i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
  } else if (spacing == "log-approach") {
    // g = g_c (1 - 10^-k), k evenly spaced; g_c = omega.
    if (!(hi < omega) || lo < 0.0) config_error("g_grid", "log-approach needs 0 <= min <= max < omega");
    const double k_lo = -std::log10(1.0 - lo / omega);
    const double k_hi = -std::log10(1.0 - hi / omega);
    for (int i = 0; i < count; ++i) {
      const double k = count == 1 ? k_lo : k_lo + (k_hi - k_lo) * i / (count - 1);
      out[static_cast<std::size_t>(i)] = omega * (1.0 - std::pow(10.0, -k));
    }
  } else {
    config_error("g_grid.spacing", "expected \"linear\" or \"log-approach\"");
  }
  return out;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s) {
  const std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw Error(Errc::ConfigError, "malformed numeric cell '" + text + "'");
  }
  return v;
}

int worker_count(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CRITFISH_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

// Pointers to the numeric cells in column order (after model and N).
template <class Row>
auto numeric_cells(Row& r) {
  return std::array{&r.beta,
                    &r.beta_gap_ratio,
                    &r.gap,
                    &r.qfi_fidelity,
                    &r.qfi_spectral_total,
                    &r.qfi_classical_part,
                    &r.qfi_quantum_part,
                    &r.cfi_sx2,
                    &r.fi_errprop,
                    &r.analytic_qfi_total,
                    &r.analytic_qfi_quantum,
                    &r.analytic_qfi_classical,
                    &r.analytic_fi_errprop};
}

const std::vector<std::string> kCellNames = {
    "beta",           "beta_gap_ratio",     "gap",
    "qfi_fidelity",   "qfi_spectral_total", "qfi_classical_part",
    "qfi_quantum_part", "cfi_sx2",          "fi_errprop",
    "analytic_qfi_total", "analytic_qfi_quantum", "analytic_qfi_classical",
    "analytic_fi_errprop"};

}  // namespace

EstimatorSet parse_estimators(std::string_view list) {
  EstimatorSet set;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto next = std::min(list.find(',', pos), list.size());
    const auto name = list.substr(pos, next - pos);
    if (name == "qfi_spectral") set.qfi_spectral = true;
    else if (name == "qfi_fidelity") set.qfi_fidelity = true;
    else if (name == "cfi_sx2") set.cfi_sx2 = true;
    else if (name == "fi_errprop") set.fi_errprop = true;
    else if (name == "toy_analytic") set.toy_analytic = true;
    else if (name == "all") set = EstimatorSet::all();
    else if (!name.empty()) throw Error(Errc::ConfigError, "estimators: unknown '" + std::string(name) + "'");
    pos = next + 1;
  }
  return set;
}

SweepConfig parse_config(const json& doc) {
  if (!doc.is_object()) config_error("$", "config must be a JSON object");
  SweepConfig c;
  if (!doc.contains("model") || !doc.at("model").is_string()) config_error("model", "expected a string");
  c.model = parse_model(doc.at("model").get<std::string>());

  if (doc.contains("size")) {
    const auto& s = doc.at("size");
    if (s.is_string() && s.get<std::string>() == "adaptive") {
      if (c.model != ModelKind::Toy) config_error("size", "adaptive truncation is Toy-only");
      c.size = 0;
    } else if (s.is_number_integer()) {
      c.size = s.get<int>();
    } else {
      config_error("size", "expected an integer or \"adaptive\"");
    }
  } else if (c.model != ModelKind::Toy) {
    config_error("size", "missing");
  }

  if (doc.contains("omega")) {
    if (!doc.at("omega").is_number()) config_error("omega", "expected a number");
    c.omega = doc.at("omega").get<double>();
  }
  if (!doc.contains("g_grid")) config_error("g_grid", "missing");
  c.g_values = parse_g_grid(doc.at("g_grid"), c.omega);

  if (!doc.contains("temperature") || !doc.at("temperature").is_object()) {
    config_error("temperature", "expected an object with \"beta_gap\" or \"beta\"");
  }
  const auto& t = doc.at("temperature");
  const bool by_ratio = t.contains("beta_gap");
  if (by_ratio == t.contains("beta")) config_error("temperature", "give exactly one of beta_gap, beta");
  const std::string key = by_ratio ? "beta_gap" : "beta";
  c.temperature_kind = by_ratio ? TemperatureSpec::Kind::GapRatio : TemperatureSpec::Kind::Beta;
  const auto& list = t.at(key);
  if (!list.is_array()) config_error("temperature." + key, "expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    c.temperatures.push_back(parse_temperature(list[i], "temperature." + key + "[" + std::to_string(i) + "]"));
  }

  if (!doc.contains("estimators") || !doc.at("estimators").is_array()) {
    config_error("estimators", "expected an array");
  }
  for (const auto& e : doc.at("estimators")) {
    if (!e.is_string()) config_error("estimators", "expected strings");
    const auto one = parse_estimators(e.get<std::string>());
    c.estimators.qfi_spectral |= one.qfi_spectral;
    c.estimators.qfi_fidelity |= one.qfi_fidelity;
    c.estimators.cfi_sx2 |= one.cfi_sx2;
    c.estimators.fi_errprop |= one.fi_errprop;
    c.estimators.toy_analytic |= one.toy_analytic;
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) config_error("output", "expected an object");
    if (o.contains("path")) c.output_path = o.at("path").get<std::string>();
    const std::string fmt = o.value("format", std::string("csv"));
    if (fmt == "csv") c.format = OutputFormat::Csv;
    else if (fmt == "json") c.format = OutputFormat::Json;
    else config_error("output.format", "expected \"csv\" or \"json\"");
  }
  if (doc.contains("fd")) {
    const auto& f = doc.at("fd");
    if (!f.is_object()) config_error("fd", "expected an object");
    if (f.contains("delta_omega")) c.fd.delta_omega = number_at(f, "delta_omega", "fd");
    if (f.contains("rel_tol")) c.fd.rel_tol = number_at(f, "rel_tol", "fd");
    if (f.contains("min_delta_rel")) c.fd.min_delta_rel = number_at(f, "min_delta_rel", "fd");
  }
  if (doc.contains("threads")) {
    if (!doc.at("threads").is_number_integer()) config_error("threads", "expected an integer");
    c.threads = doc.at("threads").get<int>();
  }
  validate_config(c);
  return c;
}

void validate_config(const SweepConfig& c, bool point_mode) {
  if (!(c.omega > 0.0) || !std::isfinite(c.omega)) config_error("omega", "must be positive and finite");
  if (c.g_values.empty()) config_error("g_grid", "must contain at least one value");
  for (std::size_t i = 0; i < c.g_values.size(); ++i) {
    const double g = c.g_values[i];
    const auto path = "g_grid[" + std::to_string(i) + "]";
    if (!(g >= 0.0) || !std::isfinite(g)) config_error(path, "must be finite and >= 0");
    if (!point_mode && c.model == ModelKind::Toy && g >= c.omega) {
      config_error(path, "Toy model needs g < omega");
    }
  }
  if (c.temperatures.empty()) config_error("temperature", "must contain at least one value");
  for (std::size_t i = 0; i < c.temperatures.size(); ++i) {
    if (!(c.temperatures[i] > 0.0)) {
      config_error("temperature[" + std::to_string(i) + "]", "must be > 0");
    }
  }
  switch (c.model) {
    case ModelKind::Toy:
      if (c.size != 0 && c.size < 2) config_error("size", "Toy truncation must be >= 2 or adaptive");
      break;
    case ModelKind::Lmg:
      if (c.size < 1) config_error("size", "LMG needs N >= 1");
      break;
    case ModelKind::Ising:
      if (c.size < 1 || c.size > kMaxChainSites) {
        config_error("size", "Ising needs 1 <= N <= " + std::to_string(kMaxChainSites));
      }
      break;
  }
  if (!c.estimators.any()) config_error("estimators", "select at least one estimator");
  if (!(c.fd.rel_tol > 0.0)) config_error("fd.rel_tol", "must be > 0");
  if (c.fd.delta_omega < 0.0) config_error("fd.delta_omega", "must be >= 0");
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c{"model", "N", "omega", "g"};
    c.insert(c.end(), kCellNames.begin(), kCellNames.end());
    c.push_back("status");
    return c;
  }();
  return columns;
}

SweepRow evaluate_point(const SweepConfig& config, double g, double temperature) {
  SweepRow row;
  row.model = std::string(model_name(config.model));
  row.n = config.size;
  row.omega = config.omega;
  row.g = g;
  std::vector<std::string> failures;
  auto fail = [&](const char* column, const std::exception& e) {
    const auto* err = dynamic_cast<const Error*>(&e);
    failures.push_back(std::string(column) + ":" +
                       (err ? std::string(errc_name(err->code())) : std::string("InternalError")));
  };
  auto finish = [&] {
    if (!failures.empty()) {
      row.status.clear();
      for (std::size_t i = 0; i < failures.size(); ++i) row.status += (i ? ";" : "") + failures[i];
    }
    return row;
  };
  const bool by_ratio = config.temperature_kind == TemperatureSpec::Kind::GapRatio;
  if (by_ratio) row.beta_gap_ratio = temperature;
  else row.beta = temperature;

  std::optional<ModelInstance> built;
  std::optional<Spectrum> spectrum;
  try {
    int size = config.size;
    if (config.model == ModelKind::Toy && size == 0) {
      if (g >= config.omega) throw Error(Errc::BeyondCriticality, "toy model requires g < omega");
      // The gap is not known before truncating; the analytic effective
      // frequency picks beta for the convergence run.
      const double w = config.omega * std::sqrt(1.0 - g / config.omega);
      size = toy_converged_truncation(config.omega, g, by_ratio ? temperature / w : temperature);
    }
    built = build_model(config.model, config.omega, g, size);
    row.n = built->size;
    spectrum = eigh(built->hamiltonian);
  } catch (const std::exception& e) {
    fail("model", e);
    return finish();
  }
  const ModelInstance& model = *built;

  double beta = 0.0;
  try {
    row.gap = gap(*spectrum);
    if (by_ratio) {
      beta = beta_from_gap_ratio(temperature, *spectrum);
      row.beta = beta;
    } else {
      beta = temperature;
      row.beta_gap_ratio = beta == kInfiniteBeta ? kInfiniteBeta : beta * *row.gap;
    }
  } catch (const std::exception& e) {
    fail("beta", e);
    return finish();
  }

  const ThermalState state = gibbs(*spectrum, beta);
  const auto factory = model_factory(config.model, g, model.size);
  const auto fixed_beta = TemperatureSpec::beta(beta);
  const auto& est = config.estimators;

  if (est.qfi_spectral) {
    try {
      const auto b = qfi_spectral(model, state);
      row.qfi_spectral_total = b.total;
      row.qfi_classical_part = b.classical_part;
      row.qfi_quantum_part = b.quantum_part;
    } catch (const std::exception& e) {
      fail("qfi_spectral", e);
    }
  }
  if (est.qfi_fidelity) {
    try {
      row.qfi_fidelity = qfi_fidelity_fd(factory, config.omega, fixed_beta, config.fd).value;
    } catch (const std::exception& e) {
      fail("qfi_fidelity", e);
    }
  }
  if (est.cfi_sx2) {
    try {
      row.cfi_sx2 = cfi_projective(factory, config.omega, fixed_beta, model.width, config.fd).value;
    } catch (const std::exception& e) {
      fail("cfi_sx2", e);
    }
  }
  if (est.fi_errprop) {
    try {
      row.fi_errprop = fi_error_propagation(factory, config.omega, fixed_beta, model.width, config.fd).value;
    } catch (const std::exception& e) {
      fail("fi_errprop", e);
    }
  }
  if (est.toy_analytic && config.model == ModelKind::Toy) {
    const toy::ToyParams p{config.omega, g, beta};
    const double quantum = toy::qfi_thermal_quantum(p).exact;
    const double classical = toy::qfi_thermal_classical(p).exact;
    row.analytic_qfi_quantum = quantum;
    row.analytic_qfi_classical = classical;
    row.analytic_qfi_total = quantum + classical;
    try {
      row.analytic_fi_errprop = toy::fi_errprop_closed(p);
    } catch (const std::exception& e) {
      fail("analytic_fi_errprop", e);
    }
  }
  return finish();
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate_config(config);
  const std::size_t n_temps = config.temperatures.size();
  const std::size_t jobs = config.g_values.size() * n_temps;
  std::vector<SweepRow> rows(jobs);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      const double g = config.g_values[i / n_temps];
      const double t = config.temperatures[i % n_temps];
      try {
        rows[i] = evaluate_point(config, g, t);
      } catch (const std::exception& e) {
        SweepRow r;
        r.model = std::string(model_name(config.model));
        r.n = config.size;
        r.omega = config.omega;
        r.g = g;
        if (config.temperature_kind == TemperatureSpec::Kind::GapRatio) r.beta_gap_ratio = t;
        else r.beta = t;
        const auto* err = dynamic_cast<const Error*>(&e);
        r.status = "model:" + (err ? std::string(errc_name(err->code())) : std::string("InternalError"));
        rows[i] = std::move(r);
      }
    }
  };

  const int workers = worker_count(config.threads, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << r.n << ',' << fmt_double(r.omega) << ',' << fmt_double(r.g);
    for (const Cell* c : numeric_cells(r)) {
      out << ',';
      if (*c) out << fmt_double(**c);
    }
    out << ',' << r.status << '\n';
  }
  return out.str();
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  const auto n_cols = sweep_columns().size();
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != n_cols) {
      throw Error(Errc::ConfigError, "CSV line has " + std::to_string(fields.size()) + " fields");
    }
    if (header) {
      header = false;
      continue;
    }
    SweepRow r;
    r.model = std::string(fields[0]);
    r.n = static_cast<int>(parse_double(fields[1]));
    r.omega = parse_double(fields[2]);
    r.g = parse_double(fields[3]);
    auto cells = numeric_cells(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto f = fields[4 + i];
      if (f.empty()) *cells[i] = std::nullopt;
      else *cells[i] = parse_double(f);
    }
    r.status = std::string(fields.back());
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const SweepRow& r) {
  json o = json::object();
  o["model"] = r.model;
  o["N"] = r.n;
  o["omega"] = r.omega;
  o["g"] = r.g;
  const auto cells = numeric_cells(r);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = *cells[i];
    if (!c) o[kCellNames[i]] = nullptr;
    else if (std::isinf(*c)) o[kCellNames[i]] = *c > 0 ? "inf" : "-inf";
    else o[kCellNames[i]] = *c;
  }
  o["status"] = r.status;
  return o;
}

json to_json(const std::vector<SweepRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return a;
}

std::string render(const std::vector<SweepRow>& rows, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(rows) : to_json(rows).dump(2) + "\n";
}

void write_output(const std::vector<SweepRow>& rows, const std::string& path, OutputFormat format) {
  const std::string text = render(rows, format);
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ConfigError, "output.path: cannot open '" + path + "'");
  out << text;
}

SweepConfig preset_fig1(ModelKind model, int size) {
  SweepConfig c;
  c.model = model;
  c.size = size;
  c.g_values = parse_g_grid(json{{"min", 0.5}, {"max", 1.3}, {"count", 60}}, c.omega);
  c.temperature_kind = TemperatureSpec::Kind::GapRatio;
  c.temperatures = {kInfiniteBeta, 180.0};
  for (int i = 0; i < 25; ++i) c.temperatures.push_back(std::pow(10.0, -1.0 + 4.0 * i / 24.0));
  c.estimators.qfi_spectral = true;
  c.estimators.qfi_fidelity = true;
  return c;
}

SweepConfig preset_fig2(ModelKind model, int size, double beta_gap) {
  SweepConfig c;
  c.model = model;
  c.size = size;
  c.g_values = parse_g_grid(json{{"min", 0.5}, {"max", 1.3}, {"count", 60}}, c.omega);
  c.temperature_kind = TemperatureSpec::Kind::GapRatio;
  c.temperatures = {kInfiniteBeta, beta_gap};
  c.estimators.qfi_spectral = true;
  c.estimators.qfi_fidelity = true;
  c.estimators.cfi_sx2 = true;
  c.estimators.fi_errprop = true;
  return c;
}

}  // namespace critfish
