#ifndef MUTSIM_MUTSIM_H
#define MUTSIM_MUTSIM_H

/* C interface to the mutualism simulator. Every call returns a status code;
 * on failure mutsim_last_error_json() describes the error for the calling
 * thread. Handles are opaque and owned by the caller until destroyed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MUTSIM_BUILDING_LIBRARY)
#    define MUTSIM_API __declspec(dllexport)
#  else
#    define MUTSIM_API __declspec(dllimport)
#  endif
#else
#  define MUTSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mutsim_status {
    MUTSIM_OK = 0,
    MUTSIM_VALIDATION = 1,   /* bad argument, config key/value, grid mismatch */
    MUTSIM_NUMERICAL = 2,    /* overflow, no convergence, too many failed replicates */
    MUTSIM_VERIFICATION = 3, /* a verification command ran and its check failed */
    MUTSIM_INTERNAL = 4
} mutsim_status;

typedef enum mutsim_scheme {
    MUTSIM_EULER_MARUYAMA = 0,
    MUTSIM_MILSTEIN = 1,
    MUTSIM_LOG_EULER = 2
} mutsim_scheme;

typedef enum mutsim_regime {
    MUTSIM_PERMANENT = 0,
    MUTSIM_X_EXTINCT_Y_PERSISTENT = 1,
    MUTSIM_Y_EXTINCT_X_PERSISTENT = 2,
    MUTSIM_BOTH_EXTINCT = 3,
    MUTSIM_BOUNDARY = 4
} mutsim_regime;

typedef struct mutsim_params {
    double r1, r2, b1, b2, k1, k2, eps1, eps2, alpha1, alpha2, x0, y0;
} mutsim_params;

typedef struct mutsim_point {
    double x, y;
} mutsim_point;

typedef struct mutsim_equilibria {
    mutsim_point e1, e2, e3, e_star;
    double residual;
    mutsim_point newton, fixed_point;
    int newton_converged, fixed_point_converged;
} mutsim_equilibria;

typedef struct mutsim_sandwich {
    double max_violation_x, max_violation_y;
    double raw_violation_x, raw_violation_y;
    int64_t first_violation_x, first_violation_y; /* -1 when none */
    int pass;
} mutsim_sandwich;

typedef struct mutsim_config mutsim_config;
typedef struct mutsim_result mutsim_result;
typedef struct mutsim_path mutsim_path;
typedef struct mutsim_trajectory mutsim_trajectory;
typedef struct mutsim_envelopes mutsim_envelopes;

MUTSIM_API const char* mutsim_version(void);

/* JSON error document of the last failing call on this thread, "" if none. */
MUTSIM_API const char* mutsim_last_error_json(void);

/* ---- configuration ---- */
MUTSIM_API mutsim_status mutsim_config_create(mutsim_config** out);
MUTSIM_API void mutsim_config_destroy(mutsim_config* cfg);
/* Applies `key = value` text on top of the current values. */
MUTSIM_API mutsim_status mutsim_config_parse(mutsim_config* cfg, const char* text);
/* Command-line style override; errors name the key and "command line". */
MUTSIM_API mutsim_status mutsim_config_set(mutsim_config* cfg, const char* key, const char* value);
MUTSIM_API mutsim_status mutsim_config_validate(const mutsim_config* cfg);
/* Canonical text; the pointer lives until the next call on this handle. */
MUTSIM_API const char* mutsim_config_text(mutsim_config* cfg);
MUTSIM_API size_t mutsim_config_key_count(void);
MUTSIM_API const char* mutsim_config_key_name(size_t index);
MUTSIM_API size_t mutsim_command_count(void);
MUTSIM_API const char* mutsim_command_name(size_t index);

/* ---- commands ---- */
/* Runs a command (classify, equilibria, simulate, ensemble, verify_envelopes,
 * converge, figure). On MUTSIM_OK or MUTSIM_VERIFICATION *out holds the result;
 * on other statuses *out is NULL. workers = 0 uses every hardware thread. */
MUTSIM_API mutsim_status mutsim_run(const mutsim_config* cfg, const char* command, unsigned workers,
                                    mutsim_result** out);
MUTSIM_API void mutsim_result_destroy(mutsim_result* res);
MUTSIM_API int mutsim_result_exit_code(const mutsim_result* res);
MUTSIM_API const char* mutsim_result_stdout(const mutsim_result* res);
MUTSIM_API size_t mutsim_result_file_count(const mutsim_result* res);
MUTSIM_API const char* mutsim_result_file(const mutsim_result* res, size_t index);

/* ---- model ---- */
MUTSIM_API mutsim_params mutsim_preset_params(double alpha1, double alpha2);
MUTSIM_API mutsim_status mutsim_classify(const mutsim_params* p, mutsim_regime* tag, double margins[2]);
MUTSIM_API mutsim_status mutsim_equilibria_solve(const mutsim_params* p, double tol, mutsim_equilibria* out);
MUTSIM_API mutsim_status mutsim_moment_bound(const mutsim_params* p, double k, int species, double* out);
MUTSIM_API mutsim_status mutsim_persistence_limits(const mutsim_params* p, double lower_bound[2],
                                                   double solo_limit[2]);

/* ---- paths, trajectories, envelopes ---- */
MUTSIM_API mutsim_status mutsim_path_generate(uint64_t seed, uint32_t stream_id, double dt, size_t n_steps,
                                              mutsim_path** out);
MUTSIM_API mutsim_status mutsim_path_coarsen(const mutsim_path* path, size_t factor, mutsim_path** out);
MUTSIM_API void mutsim_path_destroy(mutsim_path* path);
MUTSIM_API size_t mutsim_path_steps(const mutsim_path* path);
MUTSIM_API double mutsim_path_dt(const mutsim_path* path);
/* component is 1 or 2; returns NULL otherwise. */
MUTSIM_API const double* mutsim_path_increments(const mutsim_path* path, int component);

MUTSIM_API mutsim_status mutsim_simulate(const mutsim_params* p, mutsim_scheme scheme, const mutsim_path* path,
                                         mutsim_trajectory** out);
MUTSIM_API void mutsim_trajectory_destroy(mutsim_trajectory* traj);
MUTSIM_API size_t mutsim_trajectory_length(const mutsim_trajectory* traj); /* n_steps + 1 */
MUTSIM_API const double* mutsim_trajectory_times(const mutsim_trajectory* traj);
MUTSIM_API const double* mutsim_trajectory_x(const mutsim_trajectory* traj);
MUTSIM_API const double* mutsim_trajectory_y(const mutsim_trajectory* traj);
MUTSIM_API size_t mutsim_trajectory_clamps(const mutsim_trajectory* traj);

MUTSIM_API mutsim_status mutsim_envelopes_build(const mutsim_params* p, const mutsim_path* path,
                                                mutsim_envelopes** out);
MUTSIM_API void mutsim_envelopes_destroy(mutsim_envelopes* env);
MUTSIM_API mutsim_status mutsim_check_sandwich(const mutsim_trajectory* traj, const mutsim_envelopes* env,
                                               double rel_tol, mutsim_sandwich* out);

#ifdef __cplusplus
}
#endif

#endif
