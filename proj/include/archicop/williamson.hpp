#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "archicop/generator.hpp"
#include "archicop/radial.hpp"

namespace archicop {

/// Absolutely continuous radial law given by its density on [lower, upper].
struct DensityInput {
  std::function<double(double)> density;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  /// Points where the density is not smooth; passed to the quadrature.
  std::vector<double> breakpoints;
};

/// Empirical law of a sample of nonnegative values.
struct EmpiricalInput {
  std::vector<double> values;
};

/// The forms a radial law can be supplied in.
using RadialInput =
    std::variant<std::vector<Atom>, DensityInput, EmpiricalInput, RadialDistribution>;

/// Williamson d-transform E(1 - x/X)_+^(d-1) for x > 0, 1 - F(0) at x = 0.
/// Exact for atoms, sample mean for empirical input, adaptive quadrature
/// (absolute tolerance 1e-10) otherwise.
double williamson_transform(const RadialInput& law, int d, double x);

/// The Williamson d-transform of a radial law packaged as a Generator,
/// with derivatives up to order d-1 obtained by differentiating under the
/// integral. Atom lists give a discrete_radial generator. The law must
/// have no mass at the origin.
Generator williamson_generator(const RadialInput& law, int d);

/// Inverse transform: F_R(x) = 1 - sum_{k<d-1} (-1)^k x^k psi^(k)(x)/k!
///                            - (-1)^(d-1) x^(d-1) psi_+^(d-1)(x)/(d-1)!
/// Results within 1e-9 outside [0, 1] are clamped; larger excursions throw
/// Error(not_d_monotone).
double inverse_williamson(const Generator& g, int d, double x);

/// 1 - inverse_williamson, summed directly (no cancellation in the tail).
double inverse_williamson_survival(const Generator& g, int d, double x);

/// Mass of the radial atom at x:
/// (-1)^(d-1) x^(d-1) (psi_-^(d-1)(x) - psi_+^(d-1)(x)) / (d-1)!.
double radial_jump(const Generator& g, int d, double x);

/// Radial law associated with g in dimension d. Atoms are placed at the
/// declared kinks (and the zero point when finite) where the (d-1)-th
/// derivative jumps; custom generators without kinks get a heuristic scan.
/// The resulting CDF is validated for monotonicity on a grid; failure
/// throws Error(not_d_monotone).
RadialDistribution radial_from_generator(const Generator& g, int d);

/// Density of the radial part, (-1)^d x^(d-1) psi^(d)(x)/(d-1)!, when
/// psi^(d) is available in closed form and the radial law has no atoms.
std::optional<double> radial_density(const Generator& g, int d, double x);

/// Closed-form radial CDF of the Clayton family: the binomial form for
/// theta < 0 (alpha = -1/theta), the product form for theta > 0 and the
/// Erlang(d) CDF at theta = 0.
double clayton_radial_cdf(double theta, int d, double x);

}  // namespace archicop
