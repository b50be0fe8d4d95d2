#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace archicop {

enum class Family {
  clayton,
  independence,
  lower_bound,
  reciprocal_uniform,
  power_kink,
  discrete_radial,
  piecewise_quadratic,
  custom,
};

std::string_view family_name(Family f) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

/// Side of a one-sided derivative.
enum class Side { left, right };

/// A point mass of a radial law.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Family parameters. Only the fields relevant to the family are read:
///   clayton, power_kink : theta
///   reciprocal_uniform  : a, b
///   lower_bound         : order m, psi(x) = (1 - x)_+^(m-1); 0 means "use d_context"
///   discrete_radial     : atoms
struct FamilyParams {
  double theta = 0.0;
  double a = 0.0;
  double b = 0.0;
  int order = 0;
  std::vector<Atom> atoms;
};

namespace detail {

/// Closed-form pieces of a generator. Implementations live in generator.cpp
/// (built-in families) and williamson.cpp (transforms of radial laws).
class GeneratorKernel {
 public:
  virtual ~GeneratorKernel() = default;
  virtual double psi(double x) const = 0;
  /// Closed-form inverse when the family has one.
  virtual std::optional<double> psi_inv(double /*u*/) const { return std::nullopt; }
  /// k-th one-sided derivative for 1 <= k <= max_order().
  virtual double deriv(double x, int k, Side side) const = 0;
  virtual int max_order() const = 0;
  /// inf{x : psi(x) = 0}, +inf for strict generators.
  virtual double zero_point() const = 0;
  virtual std::vector<double> kinks() const = 0;
};

}  // namespace detail

/// An Archimedean generator psi: [0, inf) -> [0, 1] with psi(0) = 1,
/// nonincreasing, continuous, strictly decreasing until it reaches zero.
/// Immutable; copies share the underlying kernel.
class Generator {
 public:
  Generator(std::shared_ptr<const detail::GeneratorKernel> kernel, Family family,
            FamilyParams params, int d_context);

  /// psi(x); x = +inf gives 0.
  double psi(double x) const;
  double operator()(double x) const { return psi(x); }

  /// Generalised inverse on [0, 1]: psi_inv(0) = zero_point() (+inf for
  /// strict generators). Bisection to 1e-13 where no closed form exists;
  /// results within 1e-9 of a declared kink that maps back onto u are
  /// snapped to the kink.
  double psi_inv(double u) const;

  /// One-sided k-th derivative (k >= 0). Orders above max_analytic_order()
  /// fall back to one-sided finite differences of the highest closed-form
  /// derivative. Throws Error(numerical) if the result is not finite.
  double deriv(double x, int k, Side side = Side::right) const;

  /// True when deriv(x, k, .) is closed form (k <= max_analytic_order()).
  bool analytic(int k) const { return k <= max_order_; }

  double zero_point() const { return zero_point_; }
  bool strict() const;
  int max_analytic_order() const { return max_order_; }
  const std::vector<double>& kink_points() const { return kinks_; }

  Family family() const { return family_; }
  const FamilyParams& params() const { return params_; }
  int d_context() const { return d_context_; }

  /// x -> psi(x / k). Generates the same copula; radial law scales by k.
  Generator scaled(double k) const;

  const detail::GeneratorKernel& kernel() const { return *kernel_; }

 private:
  std::shared_ptr<const detail::GeneratorKernel> kernel_;
  Family family_;
  FamilyParams params_;
  int d_context_;
  int max_order_;
  double zero_point_;
  std::vector<double> kinks_;
};

/// Builds a catalogued family, validating the parameters against the
/// admissible set at dimension d_context:
///   clayton            theta >= -1/(d-1) (theta = 0 is exactly exp(-x))
///   independence       no parameters
///   lower_bound        order m >= max(2, d)
///   reciprocal_uniform 0 < a < b, d >= 2 (psi depends on d)
///   power_kink         theta >= 1, d <= 2
///   discrete_radial    locations > 0, masses > 0 summing to 1, d >= 2
///   piecewise_quadratic d <= 2
/// d_context = 1 requests generator-only validation (no dimension
/// constraint), used to build candidates for the monotonicity checker.
/// Throws Error(invalid_parameter) naming the violated constraint.
Generator make_family(Family family, const FamilyParams& params, int d_context);

Generator make_clayton(double theta, int d_context);
Generator make_independence();
Generator make_lower_bound(int order);
Generator make_reciprocal_uniform(double a, double b, int d);
Generator make_power_kink(double theta);
Generator make_discrete_radial(std::vector<Atom> atoms, int d);
Generator make_piecewise_quadratic();

/// A user-defined generator. Derivatives come from `derivative` for orders
/// up to max_order, finite differences beyond. Kinks drive atom detection.
struct CustomGenerator {
  std::function<double(double)> psi;
  std::function<double(double)> psi_inv;  // optional
  std::function<double(double, int, Side)> derivative;  // optional
  int max_order = 0;
  double zero_point = std::numeric_limits<double>::infinity();
  std::vector<double> kinks;
};
Generator make_custom(CustomGenerator spec);

/// One-sided finite-difference derivative of order k, taken on the closed
/// form of order base_order (0 = psi itself). Step
/// h = max(x, 1) * eps^(1/(m+2)) with m = k - base_order and a (m+2)-point
/// one-sided stencil (second order); the step shrinks so the stencil never
/// crosses a declared kink or the origin.
double fd_derivative(const Generator& g, double x, int k, Side side,
                     int base_order = 0);

}  // namespace archicop
