#include "critfish/critfish.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "critfish/error.hpp"
#include "critfish/fisher.hpp"
#include "critfish/selftest.hpp"
#include "critfish/sweep.hpp"

struct critfish_config {
  critfish::SweepConfig config;
};

struct critfish_table {
  std::vector<critfish::SweepRow> rows;
};

struct critfish_model {
  critfish::ModelInstance model;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;

void clear_error() {
  last_error.clear();
  last_kind.clear();
}

critfish_status status_of(critfish::Errc code) {
  using critfish::Errc;
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidParameter:
    case Errc::InvalidDimension:
    case Errc::DimMismatch:
    case Errc::InvalidTemperature:
      return CRITFISH_ERR_CONFIG;
    default:
      return CRITFISH_ERR_NUMERIC;
  }
}

critfish_status fail(critfish_status status, const std::string& kind, const std::string& message) {
  last_kind = kind;
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
critfish_status guarded(Body&& body) {
  clear_error();
  try {
    return body();
  } catch (const critfish::Error& e) {
    return fail(status_of(e.code()), std::string(critfish::errc_name(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(CRITFISH_ERR_CONFIG, "ConfigError", e.what());
  } catch (const std::exception& e) {
    return fail(CRITFISH_ERR_INTERNAL, "InternalError", e.what());
  } catch (...) {
    return fail(CRITFISH_ERR_INTERNAL, "InternalError", "unknown exception");
  }
}

critfish::OutputFormat parse_format(const char* format) {
  const std::string f = format ? format : "csv";
  if (f == "csv") return critfish::OutputFormat::Csv;
  if (f == "json") return critfish::OutputFormat::Json;
  throw critfish::Error(critfish::Errc::ConfigError, "format: expected csv or json, got '" + f + "'");
}

critfish::ModelKind kind_of(critfish_model_kind kind) {
  switch (kind) {
    case CRITFISH_MODEL_TOY: return critfish::ModelKind::Toy;
    case CRITFISH_MODEL_LMG: return critfish::ModelKind::Lmg;
    case CRITFISH_MODEL_ISING: return critfish::ModelKind::Ising;
  }
  throw critfish::Error(critfish::Errc::InvalidParameter, "unknown model kind");
}

critfish::FdOptions fd_options(double delta_omega) {
  critfish::FdOptions o;
  if (delta_omega > 0.0) o.delta_omega = delta_omega;
  return o;
}

critfish::ModelFactory factory_of(const critfish::ModelInstance& m) {
  return critfish::model_factory(m.kind, m.g, m.size);
}

#define REQUIRE_ARG(cond)                                                              \
  do {                                                                                 \
    if (!(cond)) return fail(CRITFISH_ERR_CONFIG, "ConfigError", "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* critfish_version(void) { return "0.1.0"; }

const char* critfish_last_error(void) { return last_error.c_str(); }

const char* critfish_last_error_kind(void) { return last_kind.c_str(); }

critfish_status critfish_config_from_json(const char* json, critfish_config** out) {
  return guarded([&] {
    REQUIRE_ARG(json && out);
    auto doc = nlohmann::json::parse(json);
    *out = new critfish_config{critfish::parse_config(doc)};
    return CRITFISH_OK;
  });
}

critfish_status critfish_config_fig1(const char* model, int size, critfish_config** out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    auto c = critfish::preset_fig1(critfish::parse_model(model), size);
    critfish::validate_config(c);
    *out = new critfish_config{std::move(c)};
    return CRITFISH_OK;
  });
}

critfish_status critfish_config_fig2(const char* model, int size, double beta_gap, critfish_config** out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    auto c = critfish::preset_fig2(critfish::parse_model(model), size, beta_gap);
    critfish::validate_config(c);
    *out = new critfish_config{std::move(c)};
    return CRITFISH_OK;
  });
}

critfish_status critfish_config_point(const char* model, int size, double omega, double g,
                                      int beta_is_ratio, double temperature, const char* estimators,
                                      critfish_config** out) {
  return guarded([&] {
    REQUIRE_ARG(model && estimators && out);
    critfish::SweepConfig c;
    c.model = critfish::parse_model(model);
    c.size = size;
    c.omega = omega;
    c.g_values = {g};
    c.temperature_kind = beta_is_ratio ? critfish::TemperatureSpec::Kind::GapRatio
                                       : critfish::TemperatureSpec::Kind::Beta;
    c.temperatures = {temperature};
    c.estimators = critfish::parse_estimators(estimators);
    critfish::validate_config(c, true);
    *out = new critfish_config{std::move(c)};
    return CRITFISH_OK;
  });
}

critfish_status critfish_config_set_threads(critfish_config* config, int threads) {
  return guarded([&] {
    REQUIRE_ARG(config && threads >= 0);
    config->config.threads = threads;
    return CRITFISH_OK;
  });
}

critfish_status critfish_config_set_output(critfish_config* config, const char* path, const char* format) {
  return guarded([&] {
    REQUIRE_ARG(config);
    if (path) config->config.output_path = path;
    if (format) config->config.format = parse_format(format);
    return CRITFISH_OK;
  });
}

const char* critfish_config_output_path(const critfish_config* config) {
  return config ? config->config.output_path.c_str() : nullptr;
}

const char* critfish_config_output_format(const critfish_config* config) {
  if (!config) return nullptr;
  return config->config.format == critfish::OutputFormat::Json ? "json" : "csv";
}

void critfish_config_free(critfish_config* config) { delete config; }

critfish_status critfish_run_sweep(const critfish_config* config, critfish_table** out) {
  return guarded([&] {
    REQUIRE_ARG(config && out);
    *out = new critfish_table{critfish::run_sweep(config->config)};
    return CRITFISH_OK;
  });
}

critfish_status critfish_run_point(const critfish_config* config, critfish_table** out) {
  return guarded([&] {
    REQUIRE_ARG(config && out);
    const auto& c = config->config;
    critfish::validate_config(c, true);
    auto row = critfish::evaluate_point(c, c.g_values.front(), c.temperatures.front());
    const bool ok = row.ok();
    const std::string status = row.status;
    *out = new critfish_table{{std::move(row)}};
    if (!ok) {
      const auto colon = status.find(':');
      const auto end = status.find(';');
      return fail(CRITFISH_ERR_NUMERIC, status.substr(colon + 1, end - colon - 1), "point evaluation failed: " + status);
    }
    return CRITFISH_OK;
  });
}

size_t critfish_table_rows(const critfish_table* table) { return table ? table->rows.size() : 0; }

critfish_status critfish_table_value(const critfish_table* table, size_t row, const char* column,
                                     double* value) {
  return guarded([&] {
    REQUIRE_ARG(table && column && value && row < table->rows.size());
    auto rendered = critfish::to_json(table->rows[row]);
    if (!rendered.contains(column) || rendered[column].is_string()) {
      if (rendered.contains(column) && rendered[column] == "inf") {
        *value = CRITFISH_INFINITY;
        return CRITFISH_OK;
      }
      return fail(CRITFISH_ERR_CONFIG, "ConfigError", std::string("no numeric column '") + column + "'");
    }
    if (rendered[column].is_null()) {
      return fail(CRITFISH_ERR_NULL_CELL, "NullCell", std::string("cell '") + column + "' is null");
    }
    *value = rendered[column].get<double>();
    return CRITFISH_OK;
  });
}

const char* critfish_table_status(const critfish_table* table, size_t row) {
  if (!table || row >= table->rows.size()) return nullptr;
  return table->rows[row].status.c_str();
}

critfish_status critfish_table_render(const critfish_table* table, const char* format, char** out) {
  return guarded([&] {
    REQUIRE_ARG(table && out);
    const std::string text = critfish::render(table->rows, parse_format(format));
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return CRITFISH_OK;
  });
}

critfish_status critfish_table_write(const critfish_table* table, const char* path, const char* format) {
  return guarded([&] {
    REQUIRE_ARG(table && path);
    try {
      critfish::write_output(table->rows, path, parse_format(format));
    } catch (const critfish::Error& e) {
      if (e.code() == critfish::Errc::ConfigError && std::string(e.what()).find("output.path") != std::string::npos) {
        return fail(CRITFISH_ERR_IO, "IOError", e.what());
      }
      throw;
    }
    return CRITFISH_OK;
  });
}

void critfish_table_free(critfish_table* table) { delete table; }

void critfish_string_free(char* s) { delete[] s; }

critfish_status critfish_model_create(critfish_model_kind kind, double omega, double g, int size,
                                      critfish_model** out) {
  return guarded([&] {
    REQUIRE_ARG(out);
    *out = new critfish_model{critfish::build_model(kind_of(kind), omega, g, size)};
    return CRITFISH_OK;
  });
}

size_t critfish_model_dim(const critfish_model* model) {
  return model ? static_cast<size_t>(model->model.hamiltonian.dim()) : 0;
}

critfish_status critfish_model_gap(const critfish_model* model, double* gap) {
  return guarded([&] {
    REQUIRE_ARG(model && gap);
    *gap = critfish::gap(critfish::eigh(model->model.hamiltonian));
    return CRITFISH_OK;
  });
}

critfish_status critfish_qfi_spectral(const critfish_model* model, double beta, critfish_fisher* out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    const auto state = critfish::gibbs(critfish::eigh(model->model.hamiltonian), beta);
    const auto b = critfish::qfi_spectral(model->model, state);
    *out = critfish_fisher{b.total, b.classical_part, b.quantum_part};
    return CRITFISH_OK;
  });
}

critfish_status critfish_qfi_fidelity(const critfish_model* model, double beta, double delta_omega,
                                      double* out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    *out = critfish::qfi_fidelity_fd(factory_of(model->model), model->model.omega,
                                     critfish::TemperatureSpec::beta(beta), fd_options(delta_omega))
               .value;
    return CRITFISH_OK;
  });
}

critfish_status critfish_cfi_width(const critfish_model* model, double beta, double delta_omega,
                                   double* out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    *out = critfish::cfi_projective(factory_of(model->model), model->model.omega,
                                    critfish::TemperatureSpec::beta(beta), model->model.width,
                                    fd_options(delta_omega))
               .value;
    return CRITFISH_OK;
  });
}

critfish_status critfish_fi_errprop_width(const critfish_model* model, double beta, double delta_omega,
                                          double* out) {
  return guarded([&] {
    REQUIRE_ARG(model && out);
    *out = critfish::fi_error_propagation(factory_of(model->model), model->model.omega,
                                          critfish::TemperatureSpec::beta(beta), model->model.width,
                                          fd_options(delta_omega))
               .value;
    return CRITFISH_OK;
  });
}

void critfish_model_free(critfish_model* model) { delete model; }

critfish_status critfish_selftest(critfish_line_fn sink, void* user) {
  return guarded([&] {
    const bool ok = critfish::run_selftest([&](const std::string& line) {
      if (sink) sink(line.c_str(), user);
    });
    if (!ok) return fail(CRITFISH_ERR_NUMERIC, "SelftestFailed", "one or more self-test checks failed");
    return CRITFISH_OK;
  });
}

}  // extern "C"
