/*
 * C API of the NOPA design and simulation library.
 *
 * All entry points return a nopa_status; on failure the thread-local
 * message from nopa_last_error() describes the problem.  Strings returned
 * through char** out-parameters are heap-allocated and must be released
 * with nopa_string_free().  Configurations are opaque handles released
 * with nopa_config_free().
 */
#ifndef NOPA_H
#define NOPA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NOPA_API __declspec(dllexport)
#else
#define NOPA_API __attribute__((visibility("default")))
#endif

typedef enum nopa_status {
  NOPA_OK = 0,
  NOPA_ERR_CONFIG = 1, /* invalid input or configuration */
  NOPA_ERR_MODEL = 2   /* no solution / outside the model's domain */
} nopa_status;

typedef struct nopa_config nopa_config;

NOPA_API unsigned nopa_abi_version(void);

/* Thread-local message describing the most recent failure. */
NOPA_API const char* nopa_last_error(void);

NOPA_API void nopa_string_free(char* str);

/* --- configuration ------------------------------------------------------ */

/* Returns NULL on failure (see nopa_last_error). */
NOPA_API nopa_config* nopa_config_load(const char* path);
NOPA_API void nopa_config_free(nopa_config* cfg);

/* --- commands (JSON / CSV text, matching the CLI output) ---------------- */

NOPA_API nopa_status nopa_cmd_design(const nopa_config* cfg, char** out_json);

NOPA_API nopa_status nopa_cmd_spectrum(const nopa_config* cfg, double f_min_hz,
                                       double f_max_hz, int points,
                                       char** out_csv);

/* mode: "resonant" | "nonresonant" */
NOPA_API nopa_status nopa_cmd_threshold(const nopa_config* cfg,
                                        const char* mode, char** out_json);

/* stage: "single" | "double" | "triple" */
NOPA_API nopa_status nopa_cmd_scan(const nopa_config* cfg, const char* stage,
                                   char** out_csv);

/* quadrature: "x" | "y"; out_stats_json may be NULL if not wanted. */
NOPA_API nopa_status nopa_cmd_noise(const nopa_config* cfg,
                                    const char* quadrature, char** out_csv,
                                    char** out_stats_json);

/* --- scalar operations --------------------------------------------------- */

NOPA_API nopa_status nopa_finesse(double total_transmissivity, double loss,
                                  double* out);

NOPA_API nopa_status nopa_escape_efficiency(double transmissivity, double loss,
                                            double* out);

/* anticorrelated: 0 for the correlated branch, nonzero otherwise. */
NOPA_API nopa_status nopa_correlation_variance(double pump_power_w,
                                               double threshold_power_w,
                                               double frequency_hz,
                                               double kappa_rad_s,
                                               double eta_det, double eta_esc,
                                               int anticorrelated, double* out);

NOPA_API nopa_status nopa_threshold_power(double t0, double l0, double t,
                                          double l, double chi, double* out);

NOPA_API nopa_status nopa_fit_chi(double measured_threshold_w, double t0,
                                  double l0, double t, double l, double* out);

NOPA_API nopa_status nopa_pump_buildup(double t0, double l0, double* out);

NOPA_API nopa_status nopa_infer_pump_loss(double threshold_ratio, double t0,
                                          double* out);

/* deamplify: 0 for amplification, nonzero for deamplification. */
NOPA_API nopa_status nopa_parametric_gain(double pump_power_w,
                                          double threshold_power_w,
                                          int deamplify, double* out);

/* axis: 'x', 'y' or 'z'. */
NOPA_API nopa_status nopa_refractive_index(const nopa_config* cfg, char axis,
                                           double wavelength_m,
                                           double temperature_c, double* out);

NOPA_API nopa_status nopa_phase_matching_temperature(const nopa_config* cfg,
                                                     double* out_c);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NOPA_H */
