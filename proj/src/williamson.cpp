#include "archicop/williamson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "archicop/error.hpp"
#include "archicop/numerics.hpp"

namespace archicop {

using numerics::factorial;
using numerics::falling_factorial;
using numerics::kInf;

namespace {

constexpr double kTransformTol = 1e-10;

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Atom> group_sample(const std::vector<double>& values) {
  std::map<double, double> counts;
  for (double v : values) counts[v] += 1.0;
  std::vector<Atom> atoms;
  const double n = static_cast<double>(values.size());
  for (const auto& [loc, c] : counts) atoms.push_back({loc, c / n});
  return atoms;
}

// E[ R^-k (1 - x/R)_+^m ] restricted to R > x (right) or R >= x (left, only
// matters when m = 0) for a law given as a RadialDistribution:
// E[h(R) 1{R > x}] = h(x) S(x) + int_x^inf h'(t) S(t) dt.
double distribution_moment(const RadialDistribution& r, double x, int k, int m, Side side) {
  auto h = [&](double t) { return std::pow(t, -k) * (m == 0 ? 1.0 : std::pow(1.0 - x / t, m)); };
  auto dh = [&](double t) {
    const double base = 1.0 - x / t;
    double v = -k * std::pow(t, -k - 1) * (m == 0 ? 1.0 : std::pow(base, m));
    if (m >= 1) v += std::pow(t, -k) * m * (m == 1 ? 1.0 : std::pow(base, m - 1)) * x / (t * t);
    return v;
  };
  const double lo = std::max(x, 0.0);
  double head = 0.0;
  if (m == 0 && lo > 0.0) {
    const double s = side == Side::right ? 1.0 - r.cdf(lo) : 1.0 - r.cdf_left(lo);
    head = h(lo) * s;
  }
  if (lo >= r.upper()) return head;
  std::vector<double> breaks;
  for (const auto& a : r.atoms()) breaks.push_back(a.location);
  auto integrand = [&](double t) { return dh(t) * (1.0 - r.cdf(t)); };
  if (lo == 0.0 && k > 0) {
    throw Error(ErrorCode::domain, "williamson derivative requested at x = 0");
  }
  return head + numerics::integrate(integrand, lo, r.upper(), breaks, kTransformTol).value;
}

double density_moment(const DensityInput& in, double x, int k, int m) {
  const double lo = std::max(x, in.lower);
  if (lo >= in.upper) return 0.0;
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double w = m == 0 ? 1.0 : std::pow(std::max(0.0, 1.0 - x / t), m);
    return std::pow(t, -k) * w * in.density(t);
  };
  return numerics::integrate(integrand, lo, in.upper, in.breakpoints, kTransformTol).value;
}

// psi = W_d F for a continuous law; derivatives by differentiating under the
// integral sign.
class TransformKernel final : public detail::GeneratorKernel {
 public:
  TransformKernel(RadialInput law, int d, double upper)
      : law_(std::move(law)), d_(d), upper_(upper) {}

  double psi(double x) const override { return williamson_transform(law_, d_, x); }
  double deriv(double x, int k, Side side) const override {
    const int n = d_ - 1;
    const int m = n - k;
    const double moment = std::visit(
        Overloaded{
            [&](const DensityInput& in) { return density_moment(in, x, k, m); },
            [&](const RadialDistribution& r) { return distribution_moment(r, x, k, m, side); },
            [&](const auto&) -> double {
              throw Error(ErrorCode::internal, "unexpected radial input");
            }},
        law_);
    return sign_pow(k) * falling_factorial(n, k) * moment;
  }
  int max_order() const override { return d_ - 1; }
  double zero_point() const override { return upper_; }
  std::vector<double> kinks() const override {
    if (const auto* r = std::get_if<RadialDistribution>(&law_)) {
      std::vector<double> out;
      for (const auto& a : r->atoms()) out.push_back(a.location);
      return out;
    }
    return {};
  }

 private:
  RadialInput law_;
  int d_;
  double upper_;
};

void require_dimension(int d) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
}

// Heuristic jump scan of psi^(d-1) for generators without declared kinks.
std::vector<double> scan_for_jumps(const Generator& g, int d) {
  const int n = d - 1;
  const double upper = std::isfinite(g.zero_point()) ? g.zero_point()
                                                     : std::max(10.0, 2.0 * g.psi_inv(1e-8));
  const double coef_scale = 1.0 / factorial(n);
  auto D = [&](double x, Side s) { return g.deriv(x, n, s); };
  const int points = 2000;
  const double lo = 1e-4 * std::min(1.0, upper);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = lo * std::pow(upper / lo, static_cast<double>(i) / (points - 1));
  }
  std::vector<double> found;
  for (int i = 0; i + 1 < points; ++i) {
    double a = grid[i];
    double b = grid[i + 1];
    const double coef = std::pow(b, n) * coef_scale;
    if (std::abs(D(b, Side::right) - D(a, Side::right)) * coef <= 1e-6) continue;
    for (int it = 0; it < 60 && b - a > 1e-7 * std::max(1.0, a); ++it) {
      const double mid = 0.5 * (a + b);
      const double left = std::abs(D(mid, Side::right) - D(a, Side::right));
      const double right = std::abs(D(b, Side::right) - D(mid, Side::right));
      if (left >= right) b = mid; else a = mid;
    }
    const double x = 0.5 * (a + b);
    const double delta = 1e-7 * std::max(1.0, x);
    const double gap = std::abs(D(x + delta, Side::right) - D(x - delta, Side::left));
    if (gap * std::pow(x, n) * coef_scale > 1e-6) found.push_back(x);
  }
  return found;
}

}  // namespace

double williamson_transform(const RadialInput& law, int d, double x) {
  require_dimension(d);
  if (x < 0.0) throw Error(ErrorCode::domain, "williamson transform: x must be >= 0");
  const int n = d - 1;
  return std::visit(
      Overloaded{
          [&](const std::vector<Atom>& atoms) {
            double s = 0.0;
            for (const auto& a : atoms) {
              if (a.location > x) s += a.mass * std::pow(1.0 - x / a.location, n);
            }
            return s;
          },
          [&](const DensityInput& in) { return density_moment(in, x, 0, n); },
          [&](const EmpiricalInput& in) {
            if (in.values.empty()) {
              throw Error(ErrorCode::invalid_parameter, "empirical radial input is empty");
            }
            double s = 0.0;
            for (double v : in.values) {
              if (v > x) s += std::pow(1.0 - x / v, n);
            }
            return s / static_cast<double>(in.values.size());
          },
          [&](const RadialDistribution& r) {
            if (x == 0.0) return 1.0 - r.cdf(0.0);
            // Substituting t = x / v: (d-1) int_0^1 (1 - v)^(d-2) S(x / v) dv.
            std::vector<double> breaks;
            for (const auto& a : r.atoms()) breaks.push_back(x / a.location);
            if (std::isfinite(r.upper())) breaks.push_back(x / r.upper());
            auto integrand = [&](double v) {
              if (v <= 0.0) return 0.0;
              return n * std::pow(1.0 - v, n - 1) * (1.0 - r.cdf(x / v));
            };
            return numerics::integrate(integrand, 0.0, 1.0, breaks, kTransformTol).value;
          }},
      law);
}

Generator williamson_generator(const RadialInput& law, int d) {
  require_dimension(d);
  if (const auto* atoms = std::get_if<std::vector<Atom>>(&law)) {
    return make_discrete_radial(*atoms, d);
  }
  if (const auto* emp = std::get_if<EmpiricalInput>(&law)) {
    for (double v : emp->values) {
      if (!(v > 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "empirical radial values must be > 0");
      }
    }
    return make_discrete_radial(group_sample(emp->values), d);
  }
  double upper = kInf;
  if (const auto* in = std::get_if<DensityInput>(&law)) {
    upper = in->upper;
  } else if (const auto* r = std::get_if<RadialDistribution>(&law)) {
    if (r->cdf(0.0) > 0.0) {
      throw Error(ErrorCode::invalid_parameter, "radial law has mass at the origin");
    }
    upper = r->upper();
  }
  const double total = williamson_transform(law, d, 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "radial law has total mass " << total << " on (0, inf), expected 1";
    throw Error(ErrorCode::invalid_parameter, msg.str());
  }
  return Generator(std::make_shared<TransformKernel>(law, d, upper), Family::custom, {}, d);
}

double inverse_williamson_survival(const Generator& g, int d, double x) {
  require_dimension(d);
  if (x <= 0.0) return 1.0;
  if (x >= g.zero_point()) return 0.0;
  const int n = d - 1;
  double sum = 0.0;
  double xk_over_kfact = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += sign_pow(k) * g.deriv(x, k, Side::right) * xk_over_kfact;
    xk_over_kfact *= x / (k + 1);
  }
  sum += sign_pow(n) * g.deriv(x, n, Side::right) * xk_over_kfact;
  return sum;
}

double inverse_williamson(const Generator& g, int d, double x) {
  const double f = 1.0 - inverse_williamson_survival(g, d, x);
  const double tol = g.analytic(d - 1) ? 1e-9 : 1e-6;
  if (f < -tol || f > 1.0 + tol) {
    std::ostringstream msg;
    msg << "generator not d-monotone at dimension d = " << d << " (F_R(" << x << ") = " << f
        << ")";
    throw Error(ErrorCode::not_d_monotone, msg.str());
  }
  return std::clamp(f, 0.0, 1.0);
}

double radial_jump(const Generator& g, int d, double x) {
  require_dimension(d);
  if (!(x > 0.0) || std::isinf(x)) return 0.0;
  const int n = d - 1;
  const double gap = g.deriv(x, n, Side::left) - g.deriv(x, n, Side::right);
  return sign_pow(n) * std::pow(x, n) * gap / factorial(n);
}

RadialDistribution radial_from_generator(const Generator& g, int d) {
  require_dimension(d);
  std::vector<double> candidates = g.kink_points();
  if (std::isfinite(g.zero_point())) candidates.push_back(g.zero_point());
  if (g.family() == Family::custom && candidates.empty() && !g.analytic(d - 1)) {
    candidates = scan_for_jumps(g, d);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double tol = g.analytic(d - 1) ? 1e-9 : 1e-6;
  std::vector<Atom> atoms;
  for (double x : candidates) {
    double mass = 0.0;
    try {
      mass = radial_jump(g, d, x);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::numerical) throw;
      std::ostringstream msg;
      msg << "generator not d-monotone at dimension d = " << d << " (order " << d - 1
          << " derivative diverges at x = " << x << ")";
      throw Error(ErrorCode::not_d_monotone, msg.str());
    }
    if (mass < -tol) {
      std::ostringstream msg;
      msg << "generator not d-monotone at dimension d = " << d << " (negative jump " << mass
          << " at x = " << x << ")";
      throw Error(ErrorCode::not_d_monotone, msg.str());
    }
    if (mass > 1e-12) atoms.push_back({x, mass});
  }

  auto continuous = [g, d, atoms](double x) {
    double f = inverse_williamson(g, d, x);
    for (const auto& a : atoms) {
      if (a.location <= x) f -= a.mass;
    }
    return f;
  };
  RadialDistribution r(continuous, atoms, g.zero_point());

  // Monotonicity of the assembled CDF on a validation grid.
  const double hi = std::isfinite(g.zero_point()) ? g.zero_point()
                                                   : std::max(10.0, g.psi_inv(1e-10));
  const int points = 256;
  const double lo = 1e-6 * std::min(1.0, hi);
  double prev = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const double f = r.cdf(x);
    if (f < prev - tol) {
      std::ostringstream msg;
      msg << "generator not d-monotone at dimension d = " << d
          << " (radial CDF decreases near x = " << x << ")";
      throw Error(ErrorCode::not_d_monotone, msg.str());
    }
    prev = std::max(prev, f);
  }
  return r;
}

std::optional<double> radial_density(const Generator& g, int d, double x) {
  require_dimension(d);
  if (!g.analytic(d)) return std::nullopt;
  std::vector<double> candidates = g.kink_points();
  if (std::isfinite(g.zero_point())) candidates.push_back(g.zero_point());
  for (double c : candidates) {
    if (radial_jump(g, d, c) > 1e-12) return std::nullopt;
  }
  if (x <= 0.0 || x >= g.zero_point()) return 0.0;
  return sign_pow(d) * std::pow(x, d - 1) * g.deriv(x, d, Side::right) / factorial(d - 1);
}

double clayton_radial_cdf(double theta, int d, double x) {
  require_dimension(d);
  if (x <= 0.0) return 0.0;
  if (theta == 0.0) return boost::math::gamma_p(static_cast<double>(d), x);
  double sum = 0.0;
  if (theta < 0.0) {
    const double alpha = -1.0 / theta;
    if (x >= alpha) return 1.0;
    const double r = x / alpha;
    for (int k = 0; k < d; ++k) {
      sum += numerics::binomial(alpha, k) * std::pow(r, k) * std::pow(1.0 - r, alpha - k);
    }
    return 1.0 - sum;
  }
  double prod = 1.0;
  for (int k = 0; k < d; ++k) {
    if (k > 0) prod *= (1.0 + (k - 1) * theta);
    sum += prod / factorial(k) * std::pow(x, k) * std::pow(1.0 + theta * x, -(1.0 / theta + k));
  }
  return 1.0 - sum;
}

}  // namespace archicop
