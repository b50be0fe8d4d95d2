/* C interface to the archicop library. All functions return an ac_status;
 * on failure ac_last_error() describes the problem (thread-local). Handles
 * are opaque and immutable after creation, so they may be shared between
 * threads. Strings returned through char** are owned by the caller and
 * released with ac_string_free. */
#ifndef ARCHICOP_H
#define ARCHICOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ARCHICOP_BUILDING)
#    define ARCHICOP_API __declspec(dllexport)
#  else
#    define ARCHICOP_API __declspec(dllimport)
#  endif
#else
#  define ARCHICOP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ac_status {
  AC_OK = 0,
  AC_INVALID_PARAMETER = 1,
  AC_DOMAIN = 2,
  AC_NUMERICAL = 3,
  AC_NOT_D_MONOTONE = 4,
  AC_NO_DENSITY = 5,
  AC_NON_IDENTIFIABLE = 6,
  AC_IO = 7,
  AC_INTERNAL = 8
} ac_status;

typedef enum ac_side { AC_LEFT = 0, AC_RIGHT = 1 } ac_side;

typedef struct ac_generator ac_generator;
typedef struct ac_radial ac_radial;

ARCHICOP_API const char* ac_version(void);
ARCHICOP_API const char* ac_last_error(void);
/* "invalid_parameter", "domain", ... ; "ok" for AC_OK. */
ARCHICOP_API const char* ac_status_name(ac_status status);
ARCHICOP_API void ac_string_free(char* s);

/* Generators.
 * params by family:
 *   clayton, power_kink    {theta}
 *   reciprocal_uniform     {a, b}
 *   lower_bound            {} or {order}
 *   discrete_radial        {t1, p1, t2, p2, ...}
 *   independence, piecewise_quadratic {}
 * d_context is the dimension the parameters are validated against (1 for
 * generator-only validation). */
ARCHICOP_API ac_status ac_generator_create(const char* family, const double* params,
                                           size_t n_params, int d_context, ac_generator** out);
/* {"family": ..., "params": {...}, "d_context": d} */
ARCHICOP_API ac_status ac_generator_from_json(const char* json, ac_generator** out);
ARCHICOP_API ac_status ac_generator_to_json(const ac_generator* g, char** out);
ARCHICOP_API void ac_generator_free(ac_generator* g);

ARCHICOP_API ac_status ac_psi(const ac_generator* g, double x, double* out);
ARCHICOP_API ac_status ac_psi_inv(const ac_generator* g, double u, double* out);
ARCHICOP_API ac_status ac_psi_deriv(const ac_generator* g, double x, int k, ac_side side,
                                    double* out);
/* inf{x : psi(x) = 0}; +inf for strict generators. */
ARCHICOP_API ac_status ac_zero_point(const ac_generator* g, double* out);

/* Williamson d-transform of a discrete radial law at x. */
ARCHICOP_API ac_status ac_williamson_transform_atoms(const double* locations, const double* masses,
                                                     size_t n, int d, double x, double* out);
ARCHICOP_API ac_status ac_inverse_williamson(const ac_generator* g, int d, double x, double* out);

/* Radial law of g in dimension d. */
ARCHICOP_API ac_status ac_radial_from_generator(const ac_generator* g, int d, ac_radial** out);
ARCHICOP_API void ac_radial_free(ac_radial* r);
ARCHICOP_API ac_status ac_radial_cdf(const ac_radial* r, double x, double* out);
ARCHICOP_API ac_status ac_radial_quantile(const ac_radial* r, double u, double* out);
/* Copies up to capacity atoms; *count receives the total number. */
ARCHICOP_API ac_status ac_radial_atoms(const ac_radial* r, double* locations, double* masses,
                                       size_t capacity, size_t* count);
/* AC_NO_DENSITY when the radial law has atoms or psi^(d) is not closed form. */
ARCHICOP_API ac_status ac_radial_density(const ac_generator* g, int d, double x, double* out);

/* Samplers write n*d values row-major into out. */
ARCHICOP_API ac_status ac_sample_copula(const ac_generator* g, int d, size_t n, uint64_t seed,
                                        unsigned threads, double* out);
ARCHICOP_API ac_status ac_sample_l1_symmetric(const ac_generator* g, int d, size_t n,
                                              uint64_t seed, unsigned threads, double* out);
ARCHICOP_API ac_status ac_sample_frailty_clayton(double theta, int d, size_t n, uint64_t seed,
                                                 unsigned threads, double* out);

/* Copula functionals; u has d entries. */
ARCHICOP_API ac_status ac_copula_cdf(const ac_generator* g, int d, const double* u, double* out);
/* *numeric is set to 1 when psi^(d) came from finite differences. */
ARCHICOP_API ac_status ac_copula_density(const ac_generator* g, int d, const double* u,
                                         double* out, int* numeric);
ARCHICOP_API ac_status ac_level_set_mass(const ac_generator* g, int d, double s, double* out);
/* Kendall function at n points, by the closed form (k) and through the
 * radial law (k_radial, may be NULL). */
ARCHICOP_API ac_status ac_kendall_function(const ac_generator* g, int d, const double* x,
                                           size_t n, double* k, double* k_radial);
/* Kendall's tau from the quadrature route; via_radial (may be NULL) gets
 * 4 E psi(R) - 1. */
ARCHICOP_API ac_status ac_kendall_tau(const ac_generator* g, double* tau, double* via_radial);
ARCHICOP_API ac_status ac_tau_lower_bound(int d, double* out);
/* Volume of the Frechet-Hoeffding lower bound over the box [lo, hi]. */
ARCHICOP_API ac_status ac_w_volume(int d, const double* lo, const double* hi, double* out);

/* JSON reports. */
ARCHICOP_API ac_status ac_plod_check(const ac_generator* g, int d, int grid_resolution,
                                     char** json);
ARCHICOP_API ac_status ac_check_d_monotone(const ac_generator* g, int d, int grid_points,
                                           unsigned threads, int* pass, char** json);
ARCHICOP_API ac_status ac_max_dimension(const ac_generator* g, int d_max, int* out);

/* Diagnostics on an n x d row-major sample in [0,1]^d. */
ARCHICOP_API ac_status ac_diagnose(const ac_generator* g, const double* u, size_t n, int d,
                                   unsigned threads, int with_kendall, int* pass, char** json);
/* Empirical Kendall function of the sample at m points x. */
ARCHICOP_API ac_status ac_empirical_kendall(const double* u, size_t n, int d, unsigned threads,
                                            const double* x, size_t m, double* out);
/* Fits the scalar parameter of family ("clayton", "power_kink",
 * "reciprocal_uniform" with a = 1) on [lo, hi]. */
ARCHICOP_API ac_status ac_fit(const char* family, const double* u, size_t n, int d, double lo,
                              double hi, unsigned threads, char** json);

#ifdef __cplusplus
}
#endif

#endif
