#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "archicop/copula_eval.hpp"
#include "archicop/error.hpp"
#include "archicop/numerics.hpp"
#include "archicop/sampling.hpp"

using namespace archicop;
using doctest::Approx;

namespace {

double mc_cdf(const SampleMatrix& m, const std::vector<double>& u) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    bool in = true;
    for (std::size_t j = 0; j < m.d; ++j) in = in && m(i, j) <= u[j];
    hits += in;
  }
  return static_cast<double>(hits) / m.n;
}

double mixed_difference(const Generator& g, const std::vector<double>& u, double h) {
  const std::size_t d = u.size();
  double s = 0.0;
  std::vector<double> p(d);
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    int minus = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const bool up = mask & (1u << j);
      p[j] = u[j] + (up ? h : -h);
      minus += !up;
    }
    s += (minus % 2 ? -1.0 : 1.0) * copula_cdf(g, p);
  }
  return s / std::pow(2.0 * h, static_cast<double>(d));
}

}  // namespace

TEST_CASE("copula cdf boundary behaviour") {
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    std::vector<double> ones(d, 1.0);
    CHECK(copula_cdf(g, ones) == Approx(1.0).epsilon(1e-15));
    std::vector<double> u(d, 0.7);
    u[0] = 0.0;
    CHECK(copula_cdf(g, u) == 0.0);
    std::vector<double> v(d, 1.0);
    v[d - 1] = 0.37;
    CHECK(copula_cdf(g, v) == Approx(0.37).epsilon(1e-12));
  }
}

TEST_CASE("copula cdf values") {
  const Generator lb = make_lower_bound(3);
  const double expect = std::pow(1.0 - 3.0 * (1.0 - std::sqrt(0.5)), 2.0);
  CHECK(copula_cdf(lb, std::vector<double>{0.5, 0.5, 0.5}) == Approx(expect).epsilon(1e-14));
  const auto s = sample_copula(lb, 3, 100000, 21);
  CHECK(std::abs(mc_cdf(s, {0.5, 0.5, 0.5}) - expect) <= 0.003);

  const Generator c1 = make_clayton(1.0, 2);
  CHECK(copula_cdf(c1, std::vector<double>{0.5, 0.5}) == Approx(1.0 / 3.0).epsilon(1e-15));
  const auto s1 = sample_copula(c1, 2, 100000, 22);
  CHECK(std::abs(mc_cdf(s1, {0.5, 0.5}) - 1.0 / 3.0) <= 0.005);
}

TEST_CASE("volume of the lower Frechet-Hoeffding bound") {
  CHECK(w_volume(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 1.0);
  CHECK(w_volume(std::vector<double>(3, 0.5), std::vector<double>(3, 1.0)) == -0.5);
  CHECK(w_volume(std::vector<double>(4, 0.5), std::vector<double>(4, 1.0)) < 0.0);
}

TEST_CASE("quasi-monotonicity on random boxes") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    double worst = 0.0;
    std::vector<double> lo(d), hi(d);
    for (int trial = 0; trial < 10000; ++trial) {
      for (int j = 0; j < d; ++j) {
        double a = unif(rng), b = unif(rng);
        lo[j] = std::min(a, b);
        hi[j] = std::max(a, b);
      }
      worst = std::min(worst, copula_volume(g, lo, hi));
    }
    CHECK(worst >= -1e-10);
  }
}

TEST_CASE("copula density") {
  const Generator ind = make_clayton(0.0, 2);
  for (double u : {0.1, 0.5, 0.9}) {
    CHECK(copula_density(ind, 2, std::vector<double>{u, 0.3}).value == Approx(1.0).epsilon(1e-12));
  }
  const Generator c1 = make_clayton(1.0, 2);
  const auto v = copula_density(c1, 2, std::vector<double>{0.5, 0.5});
  CHECK(v.value == Approx(32.0 / 27.0).epsilon(1e-13));
  CHECK_FALSE(v.numeric);
  try {
    copula_density(make_power_kink(2.0), 2, std::vector<double>{0.3, 0.4});
    FAIL("expected no_density");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_density);
  }
  CHECK_THROWS_AS(copula_density(make_lower_bound(2), 2, std::vector<double>{0.3, 0.4}), Error);
  CHECK_THROWS_AS(copula_density(c1, 2, std::vector<double>{0.0, 0.4}), Error);
  // Finite-difference path for psi^(d) flags the value as numeric. On (1, 2)
  // this generator is 1/x - 1 + x/4, and 1 - 3x/4 below 1.
  const Generator ru = make_reciprocal_uniform(1.0, 2.0, 2);
  const std::vector<double> u{0.2, 0.5};
  const double y1 = ru.psi_inv(0.2), y2 = ru.psi_inv(0.5);
  REQUIRE(y1 > 1.0);
  REQUIRE(y2 < 1.0);
  const double expect = (2.0 / std::pow(y1 + y2, 3.0)) / ((-1.0 / (y1 * y1) + 0.25) * -0.75);
  const auto rv = copula_density(ru, 2, u);
  CHECK(rv.numeric);
  CHECK(rv.value == Approx(expect).epsilon(1e-5));
  CHECK(copula_density(ru, 2, std::vector<double>{0.6, 0.7}).value == 0.0);
}

TEST_CASE("density matches mixed differences of the cdf") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int d : {2, 3}) {
    const Generator g = make_clayton(1.0, d);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> u(d);
      for (double& x : u) x = unif(rng);
      const double c = copula_density(g, d, u).value;
      const double fd = mixed_difference(g, u, d == 2 ? 1e-4 : 1e-3);
      CAPTURE(d);
      CHECK(std::abs(fd - c) <= 1e-3 * c);
    }
  }
}

TEST_CASE("density integrates to one") {
  for (double theta : {0.2, 1.0}) {
    const Generator g = make_clayton(theta, 2);
    const double eps = 1e-4;
    auto inner = [&](double u) {
      return numerics::integrate(
                 [&](double v) { return copula_density(g, 2, std::vector<double>{u, v}).value; },
                 eps, 1.0 - eps, {}, 1e-8)
          .value;
    };
    const double inside = numerics::integrate(inner, eps, 1.0 - eps, {}, 1e-7).value;
    const double box = copula_volume(g, std::vector<double>{eps, eps},
                                     std::vector<double>{1.0 - eps, 1.0 - eps});
    CAPTURE(theta);
    CHECK(std::abs(inside + (1.0 - box) - 1.0) <= 1e-3);
  }
}

TEST_CASE("level set masses") {
  const Generator two = make_discrete_radial(oracle::two_point_atoms(), 2);
  CHECK(level_set_mass(two, 2, 1.0 / 6.0) == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(level_set_mass(two, 2, 0.0) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(level_set_mass(two, 2, 0.4) == 0.0);
  const Generator c = make_clayton(0.2, 3);
  for (double s : {0.0, 0.1, 0.5, 1.0}) CHECK(level_set_mass(c, 3, s) == 0.0);
  const Generator pk = make_power_kink(3.0);
  CHECK(level_set_mass(pk, 2, 0.0) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(level_set_mass(make_lower_bound(2), 2, 0.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kendall function closed forms") {
  const auto k0 = kendall_function(make_clayton(0.0, 2), 2);
  CHECK(k0(std::exp(-1.0)) == Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    CHECK(std::abs(k0(x) - (x - x * std::log(x))) <= 1e-10);
  }
  const auto lb = kendall_function(make_lower_bound(2), 2);
  for (double x : {0.0, 0.2, 0.7, 1.0}) CHECK(lb(x) == Approx(1.0).epsilon(1e-12));
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    const auto k = kendall_function(g, d);
    CHECK(k(1.0) == 1.0);
    double prev = k(0.0);
    for (int i = 1; i <= 100; ++i) {
      const double x = i / 100.0;
      const double v = k(x);
      CHECK(v >= prev - 1e-12);
      CHECK(v >= x - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("Kendall function by formula and through the radial law agree") {
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    const auto k = kendall_function(g, d);
    for (int i = 1; i < 200; ++i) {
      const double x = i / 200.0;
      bool at_atom = false;
      for (const auto& a : k.radial().atoms()) at_atom |= std::abs(g.psi(a.location) - x) < 1e-9;
      if (at_atom) continue;
      CAPTURE(x);
      CHECK(std::abs(k(x) - k.via_radial(x)) <= 1e-9);
    }
  }
}

TEST_CASE("Kendall function mass decomposition") {
  for (const Generator& g : {make_discrete_radial(oracle::two_point_atoms(), 2), make_power_kink(3.0)}) {
    const auto k = kendall_function(g, 2);
    std::vector<double> levels{0.0};
    for (const auto& a : k.radial().atoms()) {
      if (g.psi(a.location) > 0.0) levels.push_back(g.psi(a.location));
    }
    std::sort(levels.begin(), levels.end());
    double jumps = 0.0;
    for (double s : levels) jumps += level_set_mass(g, 2, s);
    double continuous = 0.0;
    levels.push_back(1.0);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      continuous += k(levels[i + 1] - 1e-11) - k(levels[i]);
    }
    CHECK(jumps + continuous == Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Kendall function against Monte Carlo") {
  for (double theta : {0.2, 1.0}) {
    for (int d : {2, 3}) {
      const Generator g = make_clayton(theta, d);
      const auto s = sample_copula(g, d, 100000, 31 + d);
      std::vector<double> c;
      for (std::size_t i = 0; i < s.n; ++i) c.push_back(copula_cdf(g, s.row(i)));
      const auto k = kendall_function(g, d);
      CAPTURE(theta);
      CAPTURE(d);
      CHECK(oracle::ks_continuous(c, [&](double x) { return k(x); }) <= 0.01);
    }
  }
}

TEST_CASE("Kendall's tau") {
  for (double theta : {1.0, 2.0, 4.0}) {
    CHECK(std::abs(kendall_tau(make_power_kink(theta)) - (1.0 - 2.0 / theta)) <= 1e-9);
  }
  CHECK(std::abs(kendall_tau(make_clayton(1.0, 2)) - 1.0 / 3.0) <= 1e-9);
  CHECK(std::abs(kendall_tau(make_lower_bound(2)) + 1.0) <= 1e-12);
  for (int d = 2; d <= 6; ++d) {
    const double beta = 1.0 - 2.0 * (d - 1.0) / (2.0 * d - 3.0);
    const auto t = kendall_tau_both(make_lower_bound(d));
    CAPTURE(d);
    CHECK(std::abs(t.value - beta) <= 1e-9);
    CHECK(std::abs(t.value - tau_lower_bound(d)) <= 1e-9);
    CHECK(std::abs(t.via_radial - t.value) <= 1e-6);
  }
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    CHECK(kendall_tau(g) >= tau_lower_bound(d) - 1e-9);
  }
  CHECK(tau_lower_bound(2) == -1.0);
  CHECK(tau_lower_bound(3) == Approx(-1.0 / 3.0));
}

TEST_CASE("PLOD lower bound") {
  const auto self = plod_dominates(make_lower_bound(3), 3, 20);
  CHECK(self.pass);
  CHECK(self.max_violation == Approx(0.0).epsilon(1e-15));
  CHECK(self.points_checked == 8000);
  CHECK(plod_dominates(make_clayton(0.0, 3), 3, 20).pass);
  CHECK(plod_dominates(make_clayton(-0.4, 3), 3, 20).pass);
}
