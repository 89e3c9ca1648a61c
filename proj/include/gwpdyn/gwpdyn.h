#ifndef GWPDYN_H
#define GWPDYN_H

/* C interface to the gwpdyn Gaussian wavepacket library.
 *
 * Every function returns a gwp_status. On failure, gwp_last_error() and
 * gwp_last_error_key() describe the most recent error of the calling thread.
 * Objects are opaque and owned by the caller once created. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GWP_API __declspec(dllexport)
#else
#define GWP_API __attribute__((visibility("default")))
#endif

typedef enum gwp_status {
  GWP_OK = 0,
  GWP_ERR_INVALID_ARGUMENT = 1,
  GWP_ERR_INVALID_STATE = 2,
  GWP_ERR_NOT_NORMALIZED = 3,
  GWP_ERR_DEGENERATE_PAIR = 4,
  GWP_ERR_SUBSTEP_TOO_LARGE = 5,
  GWP_ERR_RANGE = 6,
  GWP_ERR_UNSUPPORTED = 7,
  GWP_ERR_CONFIG = 8,
  GWP_ERR_IO = 9,
  GWP_ERR_CHECK_FAILED = 10,
  GWP_ERR_INTERNAL = 99
} gwp_status;

typedef struct gwp_config gwp_config;
typedef struct gwp_system gwp_system;
typedef struct gwp_state gwp_state;

typedef struct gwp_run_summary {
  long potential_evaluations;
  double wall_seconds;
  int rows_written;
} gwp_run_summary;

GWP_API const char* gwp_version(void);
GWP_API const char* gwp_status_name(gwp_status status);
GWP_API const char* gwp_last_error(void);
/* Configuration key path of the last error, or "" when not applicable. */
GWP_API const char* gwp_last_error_key(void);

/* ---- configurations ---- */

GWP_API gwp_status gwp_config_parse(const char* text, gwp_config** out);
GWP_API gwp_status gwp_config_load(const char* path, gwp_config** out);
GWP_API gwp_status gwp_config_preset(const char* name, int paper_scale, gwp_config** out);
GWP_API gwp_status gwp_config_set(gwp_config* cfg, const char* key, const char* value);
/* Copies the raw value of `key` into buf (NUL-terminated, truncated to len). */
GWP_API gwp_status gwp_config_get(const gwp_config* cfg, const char* key, char* buf, size_t len);
/* Canonical key = value text of the configuration. */
GWP_API gwp_status gwp_config_dump(const gwp_config* cfg, char* buf, size_t len, size_t* needed);
GWP_API void gwp_config_free(gwp_config* cfg);

GWP_API size_t gwp_preset_count(void);
GWP_API const char* gwp_preset_name(size_t index);
GWP_API const char* gwp_preset_description(size_t index);

/* Runs the configured experiment and writes <output_dir>/<prefix>.csv.
 * `summary` may be NULL. */
GWP_API gwp_status gwp_run(const gwp_config* cfg, const char* output_dir, gwp_run_summary* summary);
/* Path of the file written by the last successful gwp_run on this thread. */
GWP_API const char* gwp_last_output_path(void);

/* ---- direct use of systems and states ---- */

/* Potential, masses, hbar and method taken from a configuration. */
GWP_API gwp_status gwp_system_create(const gwp_config* cfg, gwp_system** out);
GWP_API int gwp_system_dim(const gwp_system* sys);
GWP_API void gwp_system_free(gwp_system* sys);

/* Initial state of a configuration (normalized Heller Gaussian). */
GWP_API gwp_status gwp_state_create(const gwp_config* cfg, const gwp_system* sys, gwp_state** out);
/* Normalized Heller Gaussian from q, p and the row-major width matrix A. */
GWP_API gwp_status gwp_state_create_heller(const gwp_system* sys, const double* q, const double* p,
                                           const double* a_real, const double* a_imag,
                                           gwp_state** out);
GWP_API gwp_status gwp_state_clone(const gwp_state* s, gwp_state** out);
GWP_API void gwp_state_free(gwp_state* s);

GWP_API gwp_status gwp_state_position(const gwp_state* s, double* q);
GWP_API gwp_status gwp_state_momentum(const gwp_state* s, double* p);
/* Row-major width matrix A (= P Q^-1 for Hagedorn states). */
GWP_API gwp_status gwp_state_width(const gwp_state* s, double* a_real, double* a_imag);
GWP_API gwp_status gwp_state_norm(const gwp_state* s, const gwp_system* sys, double* norm);
GWP_API gwp_status gwp_state_energy(const gwp_state* s, const gwp_system* sys, double* kinetic,
                                    double* potential);
GWP_API gwp_status gwp_state_distance(const gwp_state* a, const gwp_state* b,
                                      const gwp_system* sys, double* distance);
GWP_API gwp_status gwp_state_overlap(const gwp_state* a, const gwp_state* b,
                                     const gwp_system* sys, double* re, double* im);

/* Propagates in place with an integrator label such as "tvt-optimal-8" or
 * "rk4"; parametrization is "heller" or "hagedorn". */
GWP_API gwp_status gwp_propagate(gwp_state* s, const gwp_system* sys, const char* integrator,
                                 const char* parametrization, double dt, long n_steps,
                                 long* potential_evaluations);

#ifdef __cplusplus
}
#endif

#endif
