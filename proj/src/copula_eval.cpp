#include "archicop/copula_eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "archicop/error.hpp"
#include "archicop/numerics.hpp"
#include "archicop/williamson.hpp"

namespace archicop {

using numerics::factorial;
using numerics::kInf;

namespace {

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

bool is_kink(const Generator& g, double y) {
  const auto& k = g.kink_points();
  return std::find(k.begin(), k.end(), y) != k.end() || y == g.zero_point();
}

// sum_{k<d-1} (-1)^k y^k psi^(k)(y)/k! + (-1)^(d-1) y^(d-1) psi_side^(d-1)(y)/(d-1)!
double survival_sum(const Generator& g, int d, double y, Side last) {
  const int n = d - 1;
  double sum = 0.0;
  double yk = 1.0;
  for (int k = 0; k < n; ++k) {
    sum += sign_pow(k) * g.deriv(y, k, Side::right) * yk;
    yk *= y / (k + 1);
  }
  return sum + sign_pow(n) * g.deriv(y, n, last) * yk;
}

}  // namespace

double copula_cdf(const Generator& g, std::span<const double> u) {
  double s = 0.0;
  for (double ui : u) {
    if (ui <= 0.0) return 0.0;
    s += g.psi_inv(std::min(ui, 1.0));
  }
  return g.psi(s);
}

double w_volume(std::span<const double> lo, std::span<const double> hi) {
  const std::size_t d = lo.size();
  if (hi.size() != d || d == 0 || d > 30) {
    throw Error(ErrorCode::invalid_parameter, "w_volume: box corners must have equal size 1..30");
  }
  double vol = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    double s = 0.0;
    int lows = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        s += hi[i];
      } else {
        s += lo[i];
        ++lows;
      }
    }
    const double w = std::max(s - static_cast<double>(d) + 1.0, 0.0);
    vol += (lows % 2 == 0 ? 1.0 : -1.0) * w;
  }
  return vol;
}

double copula_volume(const Generator& g, std::span<const double> lo, std::span<const double> hi) {
  const std::size_t d = lo.size();
  if (hi.size() != d || d == 0 || d > 30) {
    throw Error(ErrorCode::invalid_parameter, "copula_volume: box corners must have equal size");
  }
  std::vector<double> corner(d);
  double vol = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    int lows = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const bool high = mask & (std::uint64_t{1} << i);
      corner[i] = high ? hi[i] : lo[i];
      lows += high ? 0 : 1;
    }
    vol += (lows % 2 == 0 ? 1.0 : -1.0) * copula_cdf(g, corner);
  }
  return vol;
}

DensityValue copula_density(const Generator& g, int d, std::span<const double> u) {
  if (d < 2 || u.size() != static_cast<std::size_t>(d)) {
    throw Error(ErrorCode::invalid_parameter, "copula_density: point must have d >= 2 coordinates");
  }
  std::vector<double> candidates = g.kink_points();
  if (std::isfinite(g.zero_point())) candidates.push_back(g.zero_point());
  for (double c : candidates) {
    if (radial_jump(g, d, c) > 1e-12) {
      std::ostringstream msg;
      msg << "no density: psi^(d-1) jumps at x = " << c << " (singular component)";
      throw Error(ErrorCode::no_density, msg.str());
    }
  }
  double s = 0.0;
  double denom = 1.0;
  for (double ui : u) {
    if (!(ui > 0.0 && ui < 1.0)) {
      throw Error(ErrorCode::domain, "copula_density: u must lie in the open unit cube");
    }
    const double y = g.psi_inv(ui);
    s += y;
    denom *= g.deriv(y, 1, Side::right);
  }
  DensityValue out;
  out.numeric = !g.analytic(d);
  if (s >= g.zero_point()) return out;
  out.value = g.deriv(s, d, Side::right) / denom;
  return out;
}

double level_set_mass(const Generator& g, int d, double s) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::domain, "level_set_mass: s must lie in [0, 1]");
  const int n = d - 1;
  if (s == 0.0) {
    const double y0 = g.zero_point();
    if (std::isinf(y0)) return 0.0;
    const double m = sign_pow(n) * std::pow(y0, n) * g.deriv(y0, n, Side::left) / factorial(n);
    return std::clamp(m, 0.0, 1.0);
  }
  const double y = g.psi_inv(s);
  if (y <= 0.0) return 0.0;
  if (!is_kink(g, y) && !(g.family() == Family::custom && g.kink_points().empty())) return 0.0;
  double m = radial_jump(g, d, y);
  if (!g.analytic(n) && m < 1e-6) m = 0.0;
  return std::clamp(m, 0.0, 1.0);
}

KendallFunction::KendallFunction(Generator g, int d)
    : g_(std::move(g)), d_(d), radial_(radial_from_generator(g_, d)) {}

double kendall_value(const Generator& g, int d, double x) {
  if (x >= 1.0) return 1.0;
  if (x < 0.0) return 0.0;
  const int n = d - 1;
  if (x == 0.0) {
    const double y0 = g.zero_point();
    if (std::isinf(y0)) return 0.0;
    return std::clamp(sign_pow(n) * std::pow(y0, n) * g.deriv(y0, n, Side::left) / factorial(n),
                      0.0, 1.0);
  }
  return std::clamp(survival_sum(g, d, g.psi_inv(x), Side::left), 0.0, 1.0);
}

double KendallFunction::operator()(double x) const { return kendall_value(g_, d_, x); }

double KendallFunction::via_radial(double x) const {
  if (x >= 1.0) return 1.0;
  if (x < 0.0) return 0.0;
  const double y = g_.psi_inv(x);
  if (std::isinf(y)) return 0.0;
  return std::clamp(1.0 - radial_.cdf_left(y), 0.0, 1.0);
}

KendallFunction kendall_function(const Generator& g, int d) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  return KendallFunction(g, d);
}

KendallTau kendall_tau_both(const Generator& g) {
  const double end = g.zero_point();
  auto integrand = [&](double t) {
    const double dp = g.deriv(t, 1, Side::right);
    return t * dp * dp;
  };
  const auto q = numerics::integrate(integrand, 0.0, end, g.kink_points(), 1e-10);
  KendallTau out;
  out.value = 1.0 - 4.0 * q.value;
  out.via_radial = 4.0 * expectation_psi(radial_from_generator(g, 2), g) - 1.0;
  const double tol = g.analytic(1) ? 1e-6 : 1e-3;
  if (std::abs(out.value - out.via_radial) > tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "kendall tau routes disagree: integral " << out.value << " vs radial "
        << out.via_radial;
    throw Error(ErrorCode::internal, msg.str());
  }
  return out;
}

double kendall_tau(const Generator& g) { return kendall_tau_both(g).value; }

double tau_lower_bound(int d) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  return -1.0 / (2.0 * d - 3.0);
}

PlodReport plod_dominates(const Generator& g, int d, int res) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  if (res < 1) throw Error(ErrorCode::invalid_parameter, "grid resolution must be >= 1");
  const Generator lower = make_lower_bound(d);
  PlodReport rep;
  rep.max_violation = -kInf;
  std::vector<int> idx(d, 0);
  std::vector<double> u(d);
  for (;;) {
    for (int i = 0; i < d; ++i) u[i] = (idx[i] + 1.0) / (res + 1.0);
    const double diff = copula_cdf(lower, u) - copula_cdf(g, u);
    if (diff > rep.max_violation) {
      rep.max_violation = diff;
      rep.worst_point = u;
    }
    ++rep.points_checked;
    int j = 0;
    while (j < d && ++idx[j] == res) idx[j++] = 0;
    if (j == d) break;
  }
  rep.pass = rep.max_violation <= 1e-12;
  return rep;
}

}  // namespace archicop
