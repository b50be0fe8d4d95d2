#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "archicop/archicop.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

#define NEAR(a, b, tol) EXPECT(fabs((a) - (b)) <= (tol))

static void test_generator(void) {
  ac_generator* g = NULL;
  double theta = 1.0, v = 0.0, x0 = 0.0;
  char* json = NULL;
  ac_generator* h = NULL;

  EXPECT(ac_generator_create("clayton", &theta, 1, 2, &g) == AC_OK);
  EXPECT(ac_psi(g, 1.0, &v) == AC_OK);
  NEAR(v, 0.5, 1e-15);
  EXPECT(ac_psi_inv(g, 0.5, &v) == AC_OK);
  NEAR(v, 1.0, 1e-12);
  EXPECT(ac_psi_deriv(g, 1.0, 1, AC_RIGHT, &v) == AC_OK);
  NEAR(v, -0.25, 1e-12);
  EXPECT(ac_zero_point(g, &x0) == AC_OK);
  EXPECT(isinf(x0));

  EXPECT(ac_generator_to_json(g, &json) == AC_OK);
  EXPECT(strstr(json, "clayton") != NULL);
  EXPECT(ac_generator_from_json(json, &h) == AC_OK);
  EXPECT(ac_psi(h, 2.0, &v) == AC_OK);
  NEAR(v, 1.0 / 3.0, 1e-15);
  ac_string_free(json);
  ac_generator_free(h);

  EXPECT(ac_kendall_tau(g, &v, NULL) == AC_OK);
  NEAR(v, 1.0 / 3.0, 1e-9);
  ac_generator_free(g);

  theta = -0.9;
  g = NULL;
  EXPECT(ac_generator_create("clayton", &theta, 1, 3, &g) == AC_INVALID_PARAMETER);
  EXPECT(g == NULL);
  EXPECT(strlen(ac_last_error()) > 0);
  EXPECT(ac_generator_create("nope", NULL, 0, 2, &g) == AC_INVALID_PARAMETER);
  EXPECT(strcmp(ac_status_name(AC_NO_DENSITY), "no_density") == 0);
  EXPECT(strcmp(ac_status_name(AC_OK), "ok") == 0);
  EXPECT(strlen(ac_version()) > 0);
}

static void test_radial(void) {
  ac_generator* g = NULL;
  ac_radial* r = NULL;
  double theta = -0.5, loc[4], mass[4], v;
  size_t count = 0;

  EXPECT(ac_generator_create("clayton", &theta, 1, 3, &g) == AC_OK);
  EXPECT(ac_radial_from_generator(g, 3, &r) == AC_OK);
  EXPECT(ac_radial_atoms(r, loc, mass, 4, &count) == AC_OK);
  EXPECT(count == 1);
  NEAR(loc[0], 2.0, 1e-12);
  NEAR(mass[0], 1.0, 1e-12);
  EXPECT(ac_radial_cdf(r, 1.999, &v) == AC_OK);
  NEAR(v, 0.0, 1e-12);
  EXPECT(ac_radial_density(g, 3, 1.0, &v) == AC_NO_DENSITY);
  ac_radial_free(r);
  ac_generator_free(g);

  {
    double t[2] = {1.0, 3.0}, p[2] = {0.5, 0.5};
    EXPECT(ac_williamson_transform_atoms(t, p, 2, 2, 2.0, &v) == AC_OK);
    NEAR(v, 0.5 * (1.0 - 2.0 / 3.0), 1e-15);
  }

  theta = 0.0;
  EXPECT(ac_generator_create("clayton", &theta, 1, 3, &g) == AC_OK);
  EXPECT(ac_radial_from_generator(g, 3, &r) == AC_OK);
  EXPECT(ac_radial_cdf(r, 2.0, &v) == AC_OK);
  NEAR(v, 1.0 - exp(-2.0) * (1.0 + 2.0 + 2.0), 1e-10);
  EXPECT(ac_radial_quantile(r, v, &v) == AC_OK);
  NEAR(v, 2.0, 1e-8);
  EXPECT(ac_inverse_williamson(g, 3, 2.0, &v) == AC_OK);
  NEAR(v, 1.0 - exp(-2.0) * 5.0, 1e-10);
  ac_radial_free(r);
  ac_generator_free(g);
}

static void test_functionals(void) {
  ac_generator* g = NULL;
  double theta = 1.0, u[2] = {0.5, 0.5}, v = 0.0;
  int numeric = -1;
  double lo[3] = {0.5, 0.5, 0.5}, hi[3] = {1, 1, 1};
  double x[3] = {0.1, 0.5, 0.9}, k[3], kr[3];

  EXPECT(ac_generator_create("clayton", &theta, 1, 2, &g) == AC_OK);
  EXPECT(ac_copula_cdf(g, 2, u, &v) == AC_OK);
  NEAR(v, 1.0 / 3.0, 1e-14);
  EXPECT(ac_copula_density(g, 2, u, &v, &numeric) == AC_OK);
  NEAR(v, 2.0 * pow(0.25, -2.0) * pow(3.0, -3.0), 1e-10);
  EXPECT(numeric == 0);
  EXPECT(ac_kendall_function(g, 2, x, 3, k, kr) == AC_OK);
  for (int i = 0; i < 3; ++i) {
    NEAR(k[i], 2.0 * x[i] - x[i] * x[i], 1e-10);
    NEAR(k[i], kr[i], 1e-9);
  }
  u[0] = 0.0;
  EXPECT(ac_copula_density(g, 2, u, &v, &numeric) == AC_DOMAIN);
  ac_generator_free(g);

  EXPECT(ac_w_volume(3, lo, hi, &v) == AC_OK);
  EXPECT(v == -0.5);
  EXPECT(ac_tau_lower_bound(3, &v) == AC_OK);
  NEAR(v, -1.0 / 3.0, 1e-15);

  {
    double p[4] = {1.0, 2.0 / 3.0, 2.0, 1.0 / 3.0};
    EXPECT(ac_generator_create("discrete_radial", p, 4, 2, &g) == AC_OK);
    EXPECT(ac_level_set_mass(g, 2, 0.0, &v) == AC_OK);
    NEAR(v, 1.0 / 3.0, 1e-12);
    EXPECT(ac_level_set_mass(g, 2, 1.0 / 6.0, &v) == AC_OK);
    NEAR(v, 2.0 / 3.0, 1e-12);
    ac_generator_free(g);
  }
}

static void test_reports(void) {
  ac_generator* g = NULL;
  double theta = -0.3;
  int pass = -1, dmax = 0;
  char* json = NULL;
  const size_t n = 2000;
  double* u = malloc(n * 2 * sizeof(double));
  double* u2 = malloc(n * 2 * sizeof(double));
  double xs[2] = {0.2, 0.8}, kh[2];

  EXPECT(ac_generator_create("clayton", &theta, 1, 1, &g) == AC_OK);
  EXPECT(ac_check_d_monotone(g, 5, 512, 2, &pass, &json) == AC_OK);
  EXPECT(pass == 0);
  EXPECT(strstr(json, "\"pass\": false") != NULL);
  ac_string_free(json);
  EXPECT(ac_max_dimension(g, 10, &dmax) == AC_OK);
  EXPECT(dmax == 4);
  ac_generator_free(g);

  theta = 1.0;
  EXPECT(ac_generator_create("clayton", &theta, 1, 2, &g) == AC_OK);
  EXPECT(ac_plod_check(g, 2, 10, &json) == AC_OK);
  EXPECT(strstr(json, "\"pass\": true") != NULL);
  ac_string_free(json);

  EXPECT(ac_sample_copula(g, 2, n, 42, 1, u) == AC_OK);
  EXPECT(ac_sample_copula(g, 2, n, 42, 4, u2) == AC_OK);
  EXPECT(memcmp(u, u2, n * 2 * sizeof(double)) == 0);
  EXPECT(ac_sample_frailty_clayton(1.0, 2, n, 42, 1, u2) == AC_OK);
  EXPECT(ac_sample_l1_symmetric(g, 2, 10, 42, 1, u2) == AC_OK);

  EXPECT(ac_diagnose(g, u, n, 2, 1, 1, &pass, &json) == AC_OK);
  EXPECT(pass == 1);
  ac_string_free(json);
  EXPECT(ac_empirical_kendall(u, n, 2, 1, xs, 2, kh) == AC_OK);
  NEAR(kh[0], 0.36, 0.05);
  NEAR(kh[1], 0.96, 0.05);
  EXPECT(ac_fit("clayton", u, n, 2, 0.1, 5.0, 1, &json) == AC_OK);
  EXPECT(strstr(json, "\"theta\"") != NULL);
  ac_string_free(json);
  EXPECT(ac_fit("clayton", u, n, 2, 1.0, 1.0 + 1e-9, 1, &json) == AC_NON_IDENTIFIABLE);
  ac_generator_free(g);
  free(u);
  free(u2);
}

int main(void) {
  test_generator();
  test_radial();
  test_functionals();
  test_reports();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("capi: ok");
  return 0;
}
