/* C interface to the critfish Fisher-information toolkit.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return a critfish_status; on failure a
 * description is available from critfish_last_error() on the same thread.
 * Units: hbar = k_B = 1, omega is the energy unit, Fisher values are in
 * 1/omega^2. Pass CRITFISH_INFINITY as beta for the zero-temperature limit.
 */
#ifndef CRITFISH_H
#define CRITFISH_H

#include <stddef.h>

#if defined(_WIN32)
#define CRITFISH_API __declspec(dllexport)
#else
#define CRITFISH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum critfish_status {
  CRITFISH_OK = 0,
  CRITFISH_ERR_CONFIG = 1,   /* invalid configuration or argument */
  CRITFISH_ERR_NUMERIC = 2,  /* numerical failure (no convergence, degenerate gap, ...) */
  CRITFISH_ERR_IO = 3,
  CRITFISH_ERR_NULL_CELL = 4, /* requested table cell is null */
  CRITFISH_ERR_INTERNAL = 5
} critfish_status;

typedef enum critfish_model_kind {
  CRITFISH_MODEL_TOY = 0,
  CRITFISH_MODEL_LMG = 1,
  CRITFISH_MODEL_ISING = 2
} critfish_model_kind;

typedef struct critfish_config critfish_config;
typedef struct critfish_table critfish_table;
typedef struct critfish_model critfish_model;

typedef struct critfish_fisher {
  double total;
  double classical_part;
  double quantum_part;
} critfish_fisher;

#define CRITFISH_INFINITY (__builtin_inf())

CRITFISH_API const char* critfish_version(void);
/* Message of the last failure on this thread; empty when none. */
CRITFISH_API const char* critfish_last_error(void);
/* Name of the last error kind ("GapTooSmall", "ConfigError", ...). */
CRITFISH_API const char* critfish_last_error_kind(void);

/* ---- sweep configuration ---- */
CRITFISH_API critfish_status critfish_config_from_json(const char* json, critfish_config** out);
CRITFISH_API critfish_status critfish_config_fig1(const char* model, int size, critfish_config** out);
CRITFISH_API critfish_status critfish_config_fig2(const char* model, int size, double beta_gap,
                                                  critfish_config** out);
/* Single grid point. beta_is_ratio selects beta*gap (nonzero) or plain beta;
 * estimators is a comma list or "all"; size 0 means adaptive Toy truncation.
 * A Toy model with g >= omega is accepted here and fails at evaluation. */
CRITFISH_API critfish_status critfish_config_point(const char* model, int size, double omega, double g,
                                                   int beta_is_ratio, double temperature,
                                                   const char* estimators, critfish_config** out);
CRITFISH_API critfish_status critfish_config_set_threads(critfish_config* config, int threads);
/* "-" writes to stdout. format is "csv" or "json"; NULL keeps the current value. */
CRITFISH_API critfish_status critfish_config_set_output(critfish_config* config, const char* path,
                                                        const char* format);
/* Effective output target of a config. */
CRITFISH_API const char* critfish_config_output_path(const critfish_config* config);
/* "csv" or "json". */
CRITFISH_API const char* critfish_config_output_format(const critfish_config* config);
CRITFISH_API void critfish_config_free(critfish_config* config);

/* ---- sweeps ---- */
CRITFISH_API critfish_status critfish_run_sweep(const critfish_config* config, critfish_table** out);
/* Evaluates the first grid point only, without the Toy g < omega config check.
 * Returns CRITFISH_ERR_NUMERIC when any cell failed; the row is still produced. */
CRITFISH_API critfish_status critfish_run_point(const critfish_config* config, critfish_table** out);
CRITFISH_API size_t critfish_table_rows(const critfish_table* table);
CRITFISH_API critfish_status critfish_table_value(const critfish_table* table, size_t row,
                                                  const char* column, double* value);
/* Status column of a row ("ok" or "column:Reason;..."); NULL when out of range. */
CRITFISH_API const char* critfish_table_status(const critfish_table* table, size_t row);
/* Renders as "csv" or "json"; release with critfish_string_free. */
CRITFISH_API critfish_status critfish_table_render(const critfish_table* table, const char* format,
                                                   char** out);
CRITFISH_API critfish_status critfish_table_write(const critfish_table* table, const char* path,
                                                  const char* format);
CRITFISH_API void critfish_table_free(critfish_table* table);
CRITFISH_API void critfish_string_free(char* s);

/* ---- single models and estimators ---- */
CRITFISH_API critfish_status critfish_model_create(critfish_model_kind kind, double omega, double g,
                                                   int size, critfish_model** out);
CRITFISH_API size_t critfish_model_dim(const critfish_model* model);
CRITFISH_API critfish_status critfish_model_gap(const critfish_model* model, double* gap);
CRITFISH_API critfish_status critfish_qfi_spectral(const critfish_model* model, double beta,
                                                   critfish_fisher* out);
/* Finite-difference estimators; delta_omega <= 0 selects the default step. */
CRITFISH_API critfish_status critfish_qfi_fidelity(const critfish_model* model, double beta,
                                                   double delta_omega, double* out);
CRITFISH_API critfish_status critfish_cfi_width(const critfish_model* model, double beta,
                                                double delta_omega, double* out);
CRITFISH_API critfish_status critfish_fi_errprop_width(const critfish_model* model, double beta,
                                                       double delta_omega, double* out);
CRITFISH_API void critfish_model_free(critfish_model* model);

/* ---- self test ---- */
typedef void (*critfish_line_fn)(const char* line, void* user);
/* Returns CRITFISH_OK when every check passed. */
CRITFISH_API critfish_status critfish_selftest(critfish_line_fn sink, void* user);

#ifdef __cplusplus
}
#endif

#endif /* CRITFISH_H */
