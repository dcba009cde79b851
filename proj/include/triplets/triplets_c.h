#ifndef TRIPLETS_C_H
#define TRIPLETS_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TRP_API __declspec(dllexport)
#else
#define TRP_API __attribute__((visibility("default")))
#endif

typedef enum trp_status
{
    TRP_OK = 0,
    TRP_INVALID_ARGUMENT = 1,
    TRP_OUT_OF_RANGE = 2,
    TRP_NON_HERMITIAN = 3,
    TRP_NEGATIVE_RADICAND = 4,
    TRP_INVALID_LENGTH = 5,
    TRP_ZERO_DISPERSION = 6,
    TRP_NO_SIGN_CHANGE = 7,
    TRP_ZERO_KERNEL = 8,
    TRP_EMPTY_FILTER = 9,
    TRP_INVALID_DENSITY = 10,
    TRP_GRID_MISMATCH = 11,
    TRP_NOT_NORMALIZED = 12,
    TRP_CONFIG_ERROR = 13,
    TRP_IO_ERROR = 14,
    TRP_INTERNAL = 99
} trp_status;

typedef enum trp_splitter_convention
{
    TRP_SPLITTER_PAPER = 0,
    TRP_SPLITTER_BOSONIC = 1
} trp_splitter_convention;

typedef struct trp_jsa trp_jsa;

/* Message of the last failure on the calling thread; empty after success. */
TRP_API const char *trp_last_error(void);
TRP_API const char *trp_status_name(trp_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
TRP_API void trp_string_free(char *s);

/* out_dir may be NULL or empty to skip file exports. */
TRP_API trp_status trp_run_config(const char *config_json, const char *out_dir, char **summary_json);
TRP_API trp_status trp_run_preset(const char *name, const char *out_dir, char **summary_json);

TRP_API trp_status trp_sweep(const char *config_json, const char *parameter, const double *values, size_t count,
                             const char *out_dir, char **table_json);

TRP_API trp_status trp_preset_names(char **names_json);
TRP_API trp_status trp_preset_show(const char *name, char **config_json);

TRP_API trp_status trp_jsa_from_config(const char *config_json, trp_jsa **out);
TRP_API void trp_jsa_free(trp_jsa *jsa);

TRP_API trp_status trp_jsa_grid(const trp_jsa *jsa, double *omega_min, double *omega_max, size_t *n_points);
TRP_API trp_status trp_jsa_epsilon_sq(const trp_jsa *jsa, double *out);
TRP_API trp_status trp_jsa_kappa(const trp_jsa *jsa, double *out);

/* psi(i, j, k) at row-major index i*n*n + j*n + k; both arrays hold n^3 values. */
TRP_API trp_status trp_jsa_values(const trp_jsa *jsa, double *re, double *im, size_t count);

/* |eta| and arg(eta) for the local oscillator (re_g + i im_g), normalized internally. */
TRP_API trp_status trp_jsa_overlap(const trp_jsa *jsa, const double *re_g, const double *im_g, size_t n_points,
                                   double *eta_abs, double *eta_phase);

TRP_API trp_status trp_pmf_bandwidth(double length_m, double beta2_s2_per_m, double *out);
TRP_API trp_status trp_quadrature_moments(double epsilon, double eta, double theta, double out[4]);
TRP_API trp_status trp_report_rate(double epsilon_sq, double rep_rate_hz, double *out);
TRP_API trp_status trp_splitter_coincidence(const double re_u[3], const double im_u[3],
                                            trp_splitter_convention convention, double *out);

#ifdef __cplusplus
}
#endif

#endif /* TRIPLETS_C_H */
