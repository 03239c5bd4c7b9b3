#ifndef JETSOLVE_H
#define JETSOLVE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(JETSOLVE_BUILDING_LIBRARY)
#    define JETSOLVE_API __declspec(dllexport)
#  else
#    define JETSOLVE_API __declspec(dllimport)
#  endif
#else
#  define JETSOLVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum jetsolve_status {
    JETSOLVE_OK = 0,
    JETSOLVE_LEMMA_FAILURE = 1,
    JETSOLVE_NO_CONVERGENCE = 2,
    JETSOLVE_CONFIG_ERROR = 3,
    JETSOLVE_ORACLE_FAILURE = 4,
    JETSOLVE_INTERNAL_ERROR = 5,
    JETSOLVE_INVALID_ARGUMENT = 6
} jetsolve_status;

JETSOLVE_API const char* jetsolve_version(void);

/* Worker threads for node-parallel loops; 0 picks the hardware count. */
JETSOLVE_API void jetsolve_set_threads(int threads);

/* ---- runs ------------------------------------------------------------- */

typedef struct jetsolve_run jetsolve_run;

/* Creates a run from a JSON configuration document. On a JSON syntax error the
 * handle is still created and holds the message; the call returns
 * JETSOLVE_CONFIG_ERROR. */
JETSOLVE_API jetsolve_status jetsolve_run_create(const char* config_json, jetsolve_run** out);

/* Overrides one configuration key before execution. Dotted keys address
 * nested objects ("kobayashi.growth"); the value is parsed as JSON and kept as
 * a string when it does not parse. */
JETSOLVE_API jetsolve_status jetsolve_run_set(jetsolve_run* run, const char* key, const char* value);

/* Validates the configuration and runs it. Returns the run's exit status. */
JETSOLVE_API jetsolve_status jetsolve_run_execute(jetsolve_run* run);

/* Results of the last execute; owned by the handle, valid until the next
 * execute or destroy. report.json text always; field CSV may be empty. */
JETSOLVE_API const char* jetsolve_run_report_json(const jetsolve_run* run);
JETSOLVE_API const char* jetsolve_run_field_csv(const jetsolve_run* run);

/* Output paths from the resolved configuration (after execute). */
JETSOLVE_API const char* jetsolve_run_report_path(const jetsolve_run* run);
JETSOLVE_API const char* jetsolve_run_field_path(const jetsolve_run* run);

/* Writes report.json and field.csv. NULL paths select the configured ones. */
JETSOLVE_API jetsolve_status jetsolve_run_write(jetsolve_run* run, const char* report_path, const char* field_path);

/* Message and configuration key of the last error, "" when none. */
JETSOLVE_API const char* jetsolve_run_last_error(const jetsolve_run* run);
JETSOLVE_API const char* jetsolve_run_error_field(const jetsolve_run* run);

JETSOLVE_API void jetsolve_run_destroy(jetsolve_run* run);

/* ---- grids and fields ------------------------------------------------- */

typedef struct jetsolve_grid jetsolve_grid;

/* Lattice of odd resolution res clipped to the closed ball of radius R in
 * R^n, n in {2, 3}. */
JETSOLVE_API jetsolve_status jetsolve_grid_create(int n, double R, int res, jetsolve_grid** out);
JETSOLVE_API size_t jetsolve_grid_size(const jetsolve_grid* grid);
JETSOLVE_API int jetsolve_grid_dim(const jetsolve_grid* grid);
/* Copies node coordinates, n doubles per node, into out. */
JETSOLVE_API jetsolve_status jetsolve_grid_nodes(const jetsolve_grid* grid, double* out);
JETSOLVE_API void jetsolve_grid_destroy(jetsolve_grid* grid);

/* Newtonian potential of node values f (size() entries) into out. */
JETSOLVE_API jetsolve_status jetsolve_newtonian_potential(const jetsolve_grid* grid, const double* f, double* out);

/* Weighted Hölder norm sup|f| + (2R)^alpha H_alpha[f] over the default pair set. */
JETSOLVE_API jetsolve_status jetsolve_holder_norm(const jetsolve_grid* grid, const double* f, double alpha,
                                                  double* out);

/* Thread-local message for failures of the grid and field calls. */
JETSOLVE_API const char* jetsolve_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
