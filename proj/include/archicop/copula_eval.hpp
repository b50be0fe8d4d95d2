#pragma once

#include <optional>
#include <span>
#include <vector>

#include "archicop/generator.hpp"
#include "archicop/radial.hpp"

namespace archicop {

/// C(u) = psi(psi_inv(u_1) + ... + psi_inv(u_d)), with +inf-saturating sums.
double copula_cdf(const Generator& g, std::span<const double> u);

/// Delta-volume of the Frechet-Hoeffding lower bound
/// W(u) = max(sum u_i - d + 1, 0) over the box [lo, hi] by 2^d-corner
/// inclusion-exclusion.
double w_volume(std::span<const double> lo, std::span<const double> hi);

/// Delta-volume of copula_cdf(g, .) over the box [lo, hi].
double copula_volume(const Generator& g, std::span<const double> lo, std::span<const double> hi);

struct DensityValue {
  double value = 0.0;
  /// psi^(d) came from finite differences rather than a closed form.
  bool numeric = false;
};

/// c(u) = psi^(d)(sum psi_inv(u_i)) / prod psi'(psi_inv(u_i)) for u in
/// (0,1)^d. Throws Error(no_density) when the radial law has atoms (the
/// (d-1)-th derivative is not absolutely continuous) and Error(domain) for
/// points outside the open cube.
DensityValue copula_density(const Generator& g, int d, std::span<const double> u);

/// P^C(L(s)): the mass the copula puts on the level set {C(u) = s}.
double level_set_mass(const Generator& g, int d, double s);

/// K_C(x) by the two-branch closed form: at x = 0 the zero-level mass
/// (-1)^(d-1) x0^(d-1) psi_-^(d-1)(x0)/(d-1)!, otherwise
/// sum_{k<d-1} (-1)^k y^k psi^(k)(y)/k! + (-1)^(d-1) y^(d-1) psi_-^(d-1)(y)/(d-1)!
/// with y = psi_inv(x).
double kendall_value(const Generator& g, int d, double x);

/// Distribution function of C(U), U ~ C.
class KendallFunction {
 public:
  KendallFunction(Generator g, int d);

  /// Two-branch closed form in terms of psi_inv(x) and derivatives of psi.
  double operator()(double x) const;
  /// 1 - F_R(psi_inv(x)-) through the radial law.
  double via_radial(double x) const;
  /// K_C(0): mass of the zero level set.
  double atom_at_zero() const { return (*this)(0.0); }

  int dimension() const { return d_; }
  const Generator& generator() const { return g_; }
  const RadialDistribution& radial() const { return radial_; }

 private:
  Generator g_;
  int d_;
  RadialDistribution radial_;
};

KendallFunction kendall_function(const Generator& g, int d);

struct KendallTau {
  double value = 0.0;       // 1 - 4 int_0^{x0} t psi'(t)^2 dt
  double via_radial = 0.0;  // 4 E psi(R) - 1 with R the bivariate radial part
};

/// Kendall's tau of the bivariate copula generated by g, computed both ways.
/// Throws Error(internal) if the two routes disagree by more than 1e-6
/// (1e-3 when psi' is only available numerically).
KendallTau kendall_tau_both(const Generator& g);
double kendall_tau(const Generator& g);

/// -1/(2d - 3): lower bound of tau over bivariate margins of d-dimensional
/// Archimedean copulas.
double tau_lower_bound(int d);

struct PlodReport {
  bool pass = true;
  double max_violation = 0.0;  // max of C_L(u) - C(u) over the grid (<= 0 when passing)
  std::vector<double> worst_point;
  std::size_t points_checked = 0;
};

/// Checks C_d^L(u) <= C(u) + 1e-12 on the interior grid
/// {1/(r+1), ..., r/(r+1)}^d with r = grid_resolution.
PlodReport plod_dominates(const Generator& g, int d, int grid_resolution);

}  // namespace archicop
