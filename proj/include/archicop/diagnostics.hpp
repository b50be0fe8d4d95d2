#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archicop/generator.hpp"
#include "archicop/radial.hpp"
#include "archicop/sampling.hpp"

namespace archicop {

/// R_k = sum_i psi_inv(U_ki) and S_k = (psi_inv(U_k1), ..., psi_inv(U_kd)) / R_k.
struct Decomposition {
  std::vector<double> radius;
  SampleMatrix angular;       // rows on the unit simplex
  std::size_t excluded = 0;   // rows with R_k = 0 (all coordinates equal to 1)
};

Decomposition radial_angular_decompose(const Generator& g, const SampleMatrix& sample);

/// One-sample KS statistic of `values` against a CDF that may have jumps.
/// `cdf_left` gives F(x-); pass the same function when F is continuous.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left);
double ks_uniform(std::vector<double> values);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Per-coordinate KS of V_j = (1 - S_j)^(d-1) against Uniform(0, 1).
std::vector<double> uniformity_test(const SampleMatrix& angular);

struct AtomCheck {
  double location = 0.0;
  double model_mass = 0.0;
  double empirical_mass = 0.0;
};

struct RadialGof {
  double ks = 0.0;
  std::vector<AtomCheck> atoms;
};

/// KS of the radial values against F_R. Values within 1e-9 (relative) of a
/// model atom are snapped onto it so that tie mass is compared with the
/// jump of F_R.
RadialGof radial_gof(std::vector<double> radius, const RadialDistribution& law);

/// Kendall's tau-b, O(n log n) (Knight's merge-sort algorithm).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Kendall's tau between R and each V_j = (1 - S_j)^(d-1).
std::vector<double> independence_test(std::span<const double> radius, const SampleMatrix& angular);

/// Empirical distribution of the pseudo-observations
/// W_k = #{m != k : U_m < U_k componentwise} / (n - 1).
class EmpiricalKendall {
 public:
  explicit EmpiricalKendall(std::vector<double> w);
  double operator()(double x) const;
  /// Left limit at x.
  double left(double x) const;
  const std::vector<double>& pseudo_observations() const { return w_; }
  std::size_t size() const { return w_.size(); }

 private:
  std::vector<double> w_;  // sorted
};

EmpiricalKendall empirical_kendall(const SampleMatrix& sample, unsigned threads = 1);

/// sup |K_hat - K_C| over the grid x_j = (j/M)^2, j = 0..M, both right and
/// left limits.
double kendall_distance(const EmpiricalKendall& emp, const Generator& g, int d, int grid = 1000);

struct DiagnosticsThresholds {
  double radial_ks = 0.0;
  double uniformity_ks = 0.0;
  double independence_tau = 0.0;
};

struct DiagnosticsOptions {
  /// KS threshold c / sqrt(n).
  double ks_coefficient = 1.95;
  /// Tau threshold z * sd, sd = sqrt(2(2n+5) / (9n(n-1))).
  double tau_z = 3.29;
  /// Compute the empirical Kendall function (quadratic cost for d > 2).
  bool kendall = true;
  unsigned threads = 1;
};

struct DiagnosticsReport {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t excluded = 0;
  RadialGof radial;
  std::vector<double> uniformity_ks;
  std::vector<double> independence_tau;
  double max_abs_tau = 0.0;
  DiagnosticsThresholds thresholds;
  bool radial_pass = true;
  bool uniformity_pass = true;
  bool independence_pass = true;
  bool pass = true;
  std::optional<EmpiricalKendall> kendall;
  std::optional<double> kendall_distance;
};

/// The three model checks (radial GOF, uniform angles, R independent of the
/// angles) plus the empirical Kendall function. Radii within roundoff of a
/// model atom are snapped onto it for both the GOF and the independence test.
DiagnosticsReport diagnose(const Generator& g, const SampleMatrix& sample,
                           const DiagnosticsOptions& opts = {});

struct FitOptions {
  int coarse_points = 33;
  double tolerance = 1e-4;
  unsigned threads = 1;
};

struct FitResult {
  Family family = Family::clayton;
  std::string parameter;  // "theta" or "b" (reciprocal_uniform with a = 1)
  double value = 0.0;
  double distance = 0.0;
  int evaluations = 0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Minimum sup-distance fit of the family's scalar parameter on [lo, hi]:
/// a coarse grid, then golden section on the best cell to `tolerance`.
/// Throws Error(non_identifiable) when the objective varies by less than
/// 1e-6 over the grid.
FitResult fit_generator(Family family, const SampleMatrix& sample, double lo, double hi,
                        const FitOptions& opts = {});
FitResult fit_generator(Family family, const EmpiricalKendall& emp, int d, double lo, double hi,
                        const FitOptions& opts = {});

/// Generator of `family` at scalar parameter v (see FitResult::parameter).
Generator family_at(Family family, double v, int d);

}  // namespace archicop
