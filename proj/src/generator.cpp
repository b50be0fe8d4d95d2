#include "archicop/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "archicop/error.hpp"
#include "archicop/numerics.hpp"

namespace archicop {

using numerics::factorial;
using numerics::falling_factorial;
using numerics::kInf;

namespace {

constexpr int kUnboundedOrder = 1 << 16;

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

[[noreturn]] void bad_param(const std::string& msg) {
  throw Error(ErrorCode::invalid_parameter, msg);
}

// psi(x) = exp(-x): clayton at theta = 0 and the independence generator.
class ExponentialKernel final : public detail::GeneratorKernel {
 public:
  double psi(double x) const override { return std::exp(-x); }
  std::optional<double> psi_inv(double u) const override {
    return u <= 0.0 ? kInf : -std::log(u);
  }
  double deriv(double x, int k, Side) const override {
    return sign_pow(k) * std::exp(-x);
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return kInf; }
  std::vector<double> kinks() const override { return {}; }
};

// psi(x) = (1 + theta x)_+^(-1/theta), theta != 0.
class ClaytonKernel final : public detail::GeneratorKernel {
 public:
  explicit ClaytonKernel(double theta) : theta_(theta) {}

  double psi(double x) const override {
    const double base = 1.0 + theta_ * x;
    if (base <= 0.0) return 0.0;
    return std::exp(-std::log1p(theta_ * x) / theta_);
  }
  std::optional<double> psi_inv(double u) const override {
    if (u <= 0.0) return zero_point();
    if (u >= 1.0) return 0.0;
    return std::expm1(-theta_ * std::log(u)) / theta_;
  }
  double deriv(double x, int k, Side side) const override {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c *= (1.0 + j * theta_);
    const double expo = -1.0 / theta_ - k;
    const double base = 1.0 + theta_ * x;
    if (base < 0.0) return 0.0;
    if (base == 0.0) {
      // At x0 = -1/theta: right side is identically zero.
      if (side == Side::right || c == 0.0 || expo > 0.0) return 0.0;
      if (expo == 0.0) return sign_pow(k) * c;
      return sign_pow(k) * c * kInf;
    }
    return sign_pow(k) * c * std::exp(expo * std::log1p(theta_ * x));
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return theta_ > 0.0 ? kInf : -1.0 / theta_; }
  std::vector<double> kinks() const override {
    if (theta_ > 0.0) return {};
    return {-1.0 / theta_};
  }

 private:
  double theta_;
};

// psi(x) = (1 - x)_+^(m-1).
class LowerBoundKernel final : public detail::GeneratorKernel {
 public:
  explicit LowerBoundKernel(int m) : n_(m - 1) {}

  double psi(double x) const override {
    return x >= 1.0 ? 0.0 : std::pow(1.0 - x, n_);
  }
  std::optional<double> psi_inv(double u) const override {
    if (u <= 0.0) return 1.0;
    return 1.0 - std::pow(u, 1.0 / n_);
  }
  double deriv(double x, int k, Side side) const override {
    if (k > n_) return 0.0;
    if (k == n_) {
      const bool inside = side == Side::right ? x < 1.0 : x <= 1.0;
      return inside ? sign_pow(k) * factorial(n_) : 0.0;
    }
    if (x >= 1.0) return 0.0;
    return sign_pow(k) * falling_factorial(n_, k) * std::pow(1.0 - x, n_ - k);
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return 1.0; }
  std::vector<double> kinks() const override { return {1.0}; }

 private:
  int n_;
};

// psi(t) = (1 - t^(1/theta))_+, theta >= 1.
class PowerKinkKernel final : public detail::GeneratorKernel {
 public:
  explicit PowerKinkKernel(double theta) : theta_(theta), p_(1.0 / theta) {}

  double psi(double x) const override {
    return x >= 1.0 ? 0.0 : 1.0 - std::pow(x, p_);
  }
  std::optional<double> psi_inv(double u) const override {
    if (u <= 0.0) return 1.0;
    return std::pow(1.0 - u, theta_);
  }
  double deriv(double x, int k, Side side) const override {
    if (x > 1.0 || (x == 1.0 && side == Side::right)) return 0.0;
    return -falling_factorial(p_, k) * std::pow(x, p_ - k);
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return 1.0; }
  std::vector<double> kinks() const override { return {1.0}; }

 private:
  double theta_;
  double p_;
};

// Williamson d-transform of the reciprocal of a Uniform[1/b, 1/a] variable:
// density ab/(b-a) t^-2 on [a, b].
class ReciprocalUniformKernel final : public detail::GeneratorKernel {
 public:
  ReciprocalUniformKernel(double a, double b, int d)
      : a_(a), b_(b), d_(d), c_(a * b / (b - a)) {}

  double psi(double x) const override {
    if (x >= b_) return 0.0;
    const double A = 1.0 - x / b_;
    if (x < a_) {
      // (A^d - B^d) / (A - B) expanded to avoid cancellation near 0.
      const double B = 1.0 - x / a_;
      double sum = 0.0;
      double bp = 1.0;
      for (int j = 0; j < d_; ++j) {
        sum += std::pow(A, d_ - 1 - j) * bp;
        bp *= B;
      }
      return sum / d_;
    }
    return c_ / (x * d_) * std::pow(A, d_);
  }
  double deriv(double x, int k, Side) const override {
    // (-1)^k c (d-1)!/(d-1-k)! * int_{1/b}^{min(1/a, 1/x)} s^k (1 - x s)^(d-1-k) ds
    const double lo = 1.0 / b_;
    const double hi = x > 0.0 ? std::min(1.0 / a_, 1.0 / x) : 1.0 / a_;
    if (hi <= lo) return 0.0;
    const int m = d_ - 1 - k;
    auto integrand = [&](double s) {
      return std::pow(s, k) * (m == 0 ? 1.0 : std::pow(std::max(0.0, 1.0 - x * s), m));
    };
    // Polynomial of degree d-1: exact with 30 Gauss-Legendre nodes for d <= 30.
    const double integral =
        boost::math::quadrature::gauss<double, 30>::integrate(integrand, lo, hi);
    return sign_pow(k) * c_ * falling_factorial(d_ - 1, k) * integral;
  }
  int max_order() const override { return d_ - 1; }
  double zero_point() const override { return b_; }
  std::vector<double> kinks() const override { return {a_, b_}; }

 private:
  double a_, b_;
  int d_;
  double c_;
};

// psi(x) = 8/7 x^2 - 16/7 x + 1 on [0, 1/2), 16/7 x^2 - 24/7 x + 9/7 on
// [1/2, 3/4), 0 beyond: in Psi_2 but not Psi_3.
class PiecewiseQuadraticKernel final : public detail::GeneratorKernel {
 public:
  double psi(double x) const override {
    if (x < 0.5) return (8.0 * x * x - 16.0 * x + 7.0) / 7.0;
    if (x < 0.75) return (16.0 * x * x - 24.0 * x + 9.0) / 7.0;
    return 0.0;
  }
  std::optional<double> psi_inv(double u) const override {
    if (u <= 0.0) return 0.75;
    if (u >= 1.0) return 0.0;
    if (u > 1.0 / 7.0) return 1.0 - std::sqrt(1.0 - 7.0 * (1.0 - u) / 8.0);
    return (3.0 - std::sqrt(7.0 * u)) / 4.0;
  }
  double deriv(double x, int k, Side side) const override {
    const bool right = side == Side::right;
    const int branch = (x < 0.5 || (x == 0.5 && !right))     ? 0
                       : (x < 0.75 || (x == 0.75 && !right)) ? 1
                                                             : 2;
    if (branch == 2 || k > 2) return 0.0;
    if (k == 1) return branch == 0 ? 16.0 / 7.0 * (x - 1.0) : 16.0 / 7.0 * (2.0 * x - 1.5);
    return branch == 0 ? 16.0 / 7.0 : 32.0 / 7.0;
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return 0.75; }
  std::vector<double> kinks() const override { return {0.5, 0.75}; }
};

class ScaledKernel final : public detail::GeneratorKernel {
 public:
  ScaledKernel(std::shared_ptr<const detail::GeneratorKernel> inner, double k)
      : inner_(std::move(inner)), k_(k) {}

  double psi(double x) const override { return inner_->psi(x / k_); }
  std::optional<double> psi_inv(double u) const override {
    auto v = inner_->psi_inv(u);
    if (!v) return std::nullopt;
    return *v * k_;
  }
  double deriv(double x, int n, Side side) const override {
    return inner_->deriv(x / k_, n, side) / std::pow(k_, n);
  }
  int max_order() const override { return inner_->max_order(); }
  double zero_point() const override { return inner_->zero_point() * k_; }
  std::vector<double> kinks() const override {
    auto out = inner_->kinks();
    for (double& x : out) x *= k_;
    return out;
  }

 private:
  std::shared_ptr<const detail::GeneratorKernel> inner_;
  double k_;
};

class CustomKernel final : public detail::GeneratorKernel {
 public:
  explicit CustomKernel(CustomGenerator spec) : spec_(std::move(spec)) {}

  double psi(double x) const override { return spec_.psi(x); }
  std::optional<double> psi_inv(double u) const override {
    if (!spec_.psi_inv) return std::nullopt;
    return spec_.psi_inv(u);
  }
  double deriv(double x, int k, Side side) const override {
    return spec_.derivative(x, k, side);
  }
  int max_order() const override { return spec_.derivative ? spec_.max_order : 0; }
  double zero_point() const override { return spec_.zero_point; }
  std::vector<double> kinks() const override { return spec_.kinks; }

 private:
  CustomGenerator spec_;
};

}  // namespace

namespace detail {
// Shared with williamson.cpp.
std::shared_ptr<const GeneratorKernel> make_discrete_kernel(std::vector<Atom> atoms, int d);
}  // namespace detail

namespace {

// psi(x) = sum_i p_i (1 - x / t_i)_+^(d-1).
class DiscreteRadialKernel final : public detail::GeneratorKernel {
 public:
  DiscreteRadialKernel(std::vector<Atom> atoms, int d) : atoms_(std::move(atoms)), d_(d) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.location < r.location; });
  }

  double psi(double x) const override { return deriv(x, 0, Side::right); }
  double deriv(double x, int k, Side side) const override {
    const int n = d_ - 1;
    if (k > n) return 0.0;
    double sum = 0.0;
    for (const auto& a : atoms_) {
      const double t = a.location;
      if (k == n) {
        const bool inside = side == Side::right ? x < t : x <= t;
        if (inside) sum += a.mass * std::pow(t, -n);
      } else if (x < t) {
        sum += a.mass * std::pow(t, -k) * std::pow(1.0 - x / t, n - k);
      }
    }
    return sign_pow(k) * falling_factorial(n, k) * sum;
  }
  int max_order() const override { return kUnboundedOrder; }
  double zero_point() const override { return atoms_.back().location; }
  std::vector<double> kinks() const override {
    std::vector<double> out;
    for (const auto& a : atoms_) out.push_back(a.location);
    return out;
  }

 private:
  std::vector<Atom> atoms_;
  int d_;
};

}  // namespace

std::shared_ptr<const detail::GeneratorKernel> detail::make_discrete_kernel(
    std::vector<Atom> atoms, int d) {
  return std::make_shared<DiscreteRadialKernel>(std::move(atoms), d);
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::clayton: return "clayton";
    case Family::independence: return "independence";
    case Family::lower_bound: return "lower_bound";
    case Family::reciprocal_uniform: return "reciprocal_uniform";
    case Family::power_kink: return "power_kink";
    case Family::discrete_radial: return "discrete_radial";
    case Family::piecewise_quadratic: return "piecewise_quadratic";
    case Family::custom: return "custom";
  }
  return "custom";
}

std::optional<Family> family_from_name(std::string_view name) noexcept {
  for (Family f : {Family::clayton, Family::independence, Family::lower_bound,
                   Family::reciprocal_uniform, Family::power_kink,
                   Family::discrete_radial, Family::piecewise_quadratic, Family::custom}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

Generator::Generator(std::shared_ptr<const detail::GeneratorKernel> kernel,
                     Family family, FamilyParams params, int d_context)
    : kernel_(std::move(kernel)),
      family_(family),
      params_(std::move(params)),
      d_context_(d_context),
      max_order_(kernel_->max_order()),
      zero_point_(kernel_->zero_point()),
      kinks_(kernel_->kinks()) {
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

double Generator::psi(double x) const {
  if (std::isinf(x)) return 0.0;
  if (x <= 0.0) return 1.0;
  if (x >= zero_point_) return 0.0;
  return kernel_->psi(x);
}

bool Generator::strict() const { return std::isinf(zero_point_); }

double Generator::psi_inv(double u) const {
  if (u >= 1.0) return 0.0;
  if (u <= 0.0) return zero_point_;
  double y;
  if (auto closed = kernel_->psi_inv(u)) {
    y = *closed;
  } else {
    double hi = 1.0;
    while (psi(hi) > u) {
      if (hi >= zero_point_) break;
      hi = std::min(hi * 2.0, zero_point_);
      if (std::isinf(hi)) return hi;
    }
    y = numerics::bisect_first_true([&](double x) { return psi(x) <= u; }, 0.0, hi,
                                    1e-13, 4.0 * std::numeric_limits<double>::epsilon());
  }
  for (double k : kinks_) {
    if (std::abs(y - k) <= 1e-9 * std::max(1.0, k) && std::abs(psi(k) - u) <= 1e-14) {
      return k;
    }
  }
  return y;
}

double Generator::deriv(double x, int k, Side side) const {
  if (k == 0) return psi(x);
  const double v = k <= max_order_ ? kernel_->deriv(x, k, side)
                                   : fd_derivative(*this, x, k, side, max_order_);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "derivative of order " << k << " is not finite at x = " << x;
    throw Error(ErrorCode::numerical, msg.str());
  }
  return v;
}

Generator Generator::scaled(double k) const {
  if (!(k > 0.0) || !std::isfinite(k)) bad_param("scale factor must be positive and finite");
  return Generator(std::make_shared<ScaledKernel>(kernel_, k), Family::custom, params_,
                   d_context_);
}

double fd_derivative(const Generator& g, double x, int k, Side side, int base_order) {
  const int m = k - base_order;
  if (m <= 0) return g.deriv(x, k, side);
  const double eps = std::numeric_limits<double>::epsilon();
  const double h0 = std::max(x, 1.0) * std::pow(eps, 1.0 / (m + 2));
  double h = h0;
  const double span = m + 1;
  const double dir = side == Side::right ? 1.0 : -1.0;
  if (side == Side::left) h = std::min(h, x / (m + 2));
  std::vector<double> barriers = g.kink_points();
  if (std::isfinite(g.zero_point())) barriers.push_back(g.zero_point());
  for (double kink : barriers) {
    const double gap = dir * (kink - x);
    if (gap > 0.0 && gap <= span * h) h = std::max(gap / (m + 2), h0 / 64.0);
  }
  std::vector<double> nodes(m + 2);
  for (int j = 0; j < m + 2; ++j) nodes[j] = x + dir * j * h;
  const auto w = numerics::fd_weights(x, nodes, m);
  double sum = 0.0;
  for (int j = 0; j < m + 2; ++j) {
    const double f = base_order == 0 ? g.psi(nodes[j])
                                     : g.kernel().deriv(nodes[j], base_order, side);
    sum += w[j] * f;
  }
  return sum;
}

Generator make_family(Family family, const FamilyParams& p, int d) {
  if (d < 1) bad_param("d_context must be >= 1");
  switch (family) {
    case Family::clayton: {
      if (!std::isfinite(p.theta)) bad_param("clayton: theta must be finite");
      if (d >= 2 && p.theta < -1.0 / (d - 1)) {
        std::ostringstream msg;
        msg << "clayton: theta = " << p.theta << " < -1/(d-1) = " << -1.0 / (d - 1)
            << " for d = " << d;
        bad_param(msg.str());
      }
      FamilyParams kept;
      kept.theta = p.theta;
      if (p.theta == 0.0) {
        return Generator(std::make_shared<ExponentialKernel>(), family, kept, d);
      }
      return Generator(std::make_shared<ClaytonKernel>(p.theta), family, kept, d);
    }
    case Family::independence:
      return Generator(std::make_shared<ExponentialKernel>(), family, {}, d);
    case Family::lower_bound: {
      const int m = p.order == 0 ? d : p.order;
      if (m < 2) bad_param("lower_bound: order m must be >= 2");
      if (m < d) {
        std::ostringstream msg;
        msg << "lower_bound: order m = " << m << " < d = " << d
            << " (psi is d-monotone only for d <= m)";
        bad_param(msg.str());
      }
      FamilyParams kept;
      kept.order = m;
      return Generator(std::make_shared<LowerBoundKernel>(m), family, kept, d);
    }
    case Family::reciprocal_uniform: {
      if (!(p.a > 0.0) || !(p.b > p.a) || !std::isfinite(p.b)) {
        bad_param("reciprocal_uniform: requires 0 < a < b");
      }
      if (d < 2) bad_param("reciprocal_uniform: d_context must be >= 2");
      if (d > 30) bad_param("reciprocal_uniform: d_context must be <= 30");
      FamilyParams kept;
      kept.a = p.a;
      kept.b = p.b;
      return Generator(std::make_shared<ReciprocalUniformKernel>(p.a, p.b, d), family, kept, d);
    }
    case Family::power_kink: {
      if (!(p.theta >= 1.0) || !std::isfinite(p.theta)) {
        bad_param("power_kink: theta must be >= 1");
      }
      if (d > 2) bad_param("power_kink: only d_context = 2 is admissible");
      FamilyParams kept;
      kept.theta = p.theta;
      return Generator(std::make_shared<PowerKinkKernel>(p.theta), family, kept, d);
    }
    case Family::discrete_radial: {
      if (d < 2) bad_param("discrete_radial: d_context must be >= 2");
      if (p.atoms.empty()) bad_param("discrete_radial: atom list is empty");
      double total = 0.0;
      for (const auto& a : p.atoms) {
        if (!(a.location > 0.0) || !std::isfinite(a.location)) {
          bad_param("discrete_radial: atom locations must be > 0");
        }
        if (!(a.mass > 0.0)) bad_param("discrete_radial: atom masses must be > 0");
        total += a.mass;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "discrete_radial: atom masses sum to " << total << ", not 1";
        bad_param(msg.str());
      }
      FamilyParams kept;
      kept.atoms = p.atoms;
      std::sort(kept.atoms.begin(), kept.atoms.end(),
                [](const Atom& l, const Atom& r) { return l.location < r.location; });
      return Generator(detail::make_discrete_kernel(kept.atoms, d), family, kept, d);
    }
    case Family::piecewise_quadratic:
      if (d > 2) bad_param("piecewise_quadratic: only d_context = 2 is admissible");
      return Generator(std::make_shared<PiecewiseQuadraticKernel>(), family, {}, d);
    case Family::custom:
      bad_param("custom generators are built with make_custom");
  }
  bad_param("unknown family");
}

Generator make_clayton(double theta, int d) {
  FamilyParams p;
  p.theta = theta;
  return make_family(Family::clayton, p, d);
}

Generator make_independence() { return make_family(Family::independence, {}, 1); }

Generator make_lower_bound(int order) {
  FamilyParams p;
  p.order = order;
  return make_family(Family::lower_bound, p, order);
}

Generator make_reciprocal_uniform(double a, double b, int d) {
  FamilyParams p;
  p.a = a;
  p.b = b;
  return make_family(Family::reciprocal_uniform, p, d);
}

Generator make_power_kink(double theta) {
  FamilyParams p;
  p.theta = theta;
  return make_family(Family::power_kink, p, 2);
}

Generator make_discrete_radial(std::vector<Atom> atoms, int d) {
  FamilyParams p;
  p.atoms = std::move(atoms);
  return make_family(Family::discrete_radial, p, d);
}

Generator make_piecewise_quadratic() { return make_family(Family::piecewise_quadratic, {}, 2); }

Generator make_custom(CustomGenerator spec) {
  if (!spec.psi) bad_param("custom: psi must be provided");
  if (!(spec.zero_point > 0.0)) bad_param("custom: zero point must be > 0");
  return Generator(std::make_shared<CustomKernel>(std::move(spec)), Family::custom, {}, 1);
}

}  // namespace archicop
