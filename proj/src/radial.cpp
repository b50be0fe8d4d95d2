#include "archicop/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "archicop/error.hpp"
#include "archicop/numerics.hpp"

namespace archicop {

using numerics::kInf;

RadialDistribution::RadialDistribution(std::function<double(double)> continuous_cdf,
                                       std::vector<Atom> atoms, double upper)
    : continuous_cdf_(std::move(continuous_cdf)), atoms_(std::move(atoms)), upper_(upper) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& l, const Atom& r) { return l.location < r.location; });
  for (const auto& a : atoms_) {
    if (!(a.location > 0.0) || !(a.mass > 0.0)) {
      throw Error(ErrorCode::invalid_parameter,
                  "radial atoms need location > 0 and mass > 0");
    }
    atom_mass_ += a.mass;
  }
  if (atom_mass_ > 1.0 + 1e-9) {
    throw Error(ErrorCode::invalid_parameter, "radial atom masses exceed 1");
  }
  atom_mass_ = std::min(atom_mass_, 1.0);
}

RadialDistribution RadialDistribution::point_mass(double location) {
  return discrete({{location, 1.0}});
}

RadialDistribution RadialDistribution::discrete(std::vector<Atom> atoms) {
  double upper = 0.0;
  for (const auto& a : atoms) upper = std::max(upper, a.location);
  return RadialDistribution([](double) { return 0.0; }, std::move(atoms), upper);
}

RadialDistribution RadialDistribution::erlang(int d) {
  if (d < 1) throw Error(ErrorCode::invalid_parameter, "erlang: shape must be >= 1");
  return RadialDistribution(
      [d](double x) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(static_cast<double>(d), x); },
      {}, kInf);
}

double RadialDistribution::continuous_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double v = continuous_cdf_(x);
  return std::clamp(v, 0.0, 1.0 - atom_mass_);
}

double RadialDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x >= upper_) return 1.0;
  double mass = 0.0;
  for (const auto& a : atoms_) {
    if (a.location > x) break;
    mass += a.mass;
  }
  return std::min(1.0, continuous_cdf(x) + mass);
}

double RadialDistribution::cdf_left(double x) const {
  if (x <= 0.0) return 0.0;
  double mass = 0.0;
  for (const auto& a : atoms_) {
    if (a.location >= x) break;
    mass += a.mass;
  }
  const double c = x > upper_ ? 1.0 - atom_mass_ : continuous_cdf(x);
  return std::min(1.0, c + mass);
}

double RadialDistribution::atom_mass_at(double x) const {
  for (const auto& a : atoms_) {
    if (a.location == x) return a.mass;
  }
  return 0.0;
}

double RadialDistribution::exact_quantile(double u) const {
  // Locate u relative to the atoms first so jumps are returned exactly.
  double lo = 0.0;
  double hi = upper_;
  for (const auto& a : atoms_) {
    const double below = cdf_left(a.location);
    if (u > below && u <= below + a.mass) return a.location;
    if (u <= below) {
      hi = a.location;
      break;
    }
    lo = a.location;
  }
  if (std::isinf(hi)) {
    hi = std::max(1.0, 2.0 * lo);
    while (cdf(hi) < u) {
      hi *= 2.0;
      if (!std::isfinite(hi)) {
        std::ostringstream msg;
        msg << "radial quantile: no bracket found for u = " << u;
        throw Error(ErrorCode::numerical, msg.str());
      }
    }
  }
  return numerics::bisect_first_true([&](double x) { return cdf(x) >= u; }, lo, hi, 1e-12,
                                     1e-15);
}

double RadialDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorCode::domain, "radial quantile: u must lie in (0, 1)");
  }
  if (!table_) return exact_quantile(u);
  for (const auto& a : atoms_) {
    const double below = cdf_left(a.location);
    if (u > below && u <= below + a.mass) return a.location;
  }
  const auto& t = *table_;
  if (u <= t.u.front() || u >= t.u.back()) return exact_quantile(u);
  const auto it = std::upper_bound(t.u.begin(), t.u.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - t.u.begin());
  const double w = (u - t.u[j - 1]) / (t.u[j] - t.u[j - 1]);
  return t.x[j - 1] + w * (t.x[j] - t.x[j - 1]);
}

std::vector<double> RadialDistribution::sample(Rng& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (auto& v : out) v = sample_one(rng);
  return out;
}

RadialDistribution RadialDistribution::with_quantile_table(int knots) const {
  if (knots < 2) throw Error(ErrorCode::invalid_parameter, "quantile table needs >= 2 knots");
  auto table = std::make_shared<QuantileTable>();
  for (int i = 1; i < knots; ++i) {
    const double u = static_cast<double>(i) / knots;
    table->u.push_back(u);
    table->x.push_back(exact_quantile(u));
  }
  RadialDistribution copy = *this;
  copy.table_ = std::move(table);
  return copy;
}

double expectation_psi(const RadialDistribution& r, const Generator& g) {
  double total = 0.0;
  for (const auto& a : r.atoms()) total += a.mass * g.psi(a.location);
  const double mc = r.continuous_mass();
  if (mc <= 0.0) return total;
  // int psi dF_c = m_c psi(0) + int_0^inf psi'(t) (m_c - F_c(t)) dt
  std::vector<double> breaks = g.kink_points();
  for (const auto& a : r.atoms()) breaks.push_back(a.location);
  const double end = std::min(r.upper(), g.zero_point());
  auto integrand = [&](double t) {
    return g.deriv(t, 1, Side::right) * (mc - r.continuous_cdf(t));
  };
  const auto q = numerics::integrate(integrand, 0.0, end, breaks, 1e-9);
  return total + mc * g.psi(0.0) + q.value;
}

}  // namespace archicop
