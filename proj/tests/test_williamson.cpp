#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "archicop/error.hpp"
#include "archicop/williamson.hpp"

using namespace archicop;
using doctest::Approx;

namespace {

// Radial CDF of clayton(theta < 0) with alpha = -1/theta, summed term by term.
double clayton_negative_cdf(double alpha, int d, double x) {
  if (x >= alpha) return 1.0;
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    double binom = 1.0;
    for (int j = 0; j < k; ++j) binom *= (alpha - j) / (j + 1);
    s += binom * std::pow(x / alpha, k) * std::pow(1.0 - x / alpha, alpha - k);
  }
  return 1.0 - s;
}

double clayton_positive_cdf(double theta, int d, double x) {
  if (x <= 0.0) return 0.0;
  double s = 0.0, prod = 1.0, fact = 1.0;
  for (int k = 0; k < d; ++k) {
    if (k > 0) {
      prod *= 1.0 + (k - 1) * theta;
      fact *= k;
    }
    s += prod / fact * std::pow(x, k) * std::pow(1.0 + theta * x, -(1.0 / theta + k));
  }
  return 1.0 - s;
}

DensityInput erlang_input(int d) {
  DensityInput in;
  in.density = [d](double t) { return oracle::erlang_density(d, t); };
  return in;
}

}  // namespace

TEST_CASE("transform of atom lists") {
  CHECK(williamson_transform(oracle::two_point_atoms(), 2, 1.0) == Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(williamson_transform(std::vector<Atom>{{1.0, 1.0}}, 4, 0.0) == 1.0);
  const auto geo = oracle::geometric_atoms(0.5);
  for (double x : {0.0, 0.5, 1.0, 2.5, 7.0}) {
    CHECK(williamson_transform(geo, 3, x) == Approx(oracle::williamson_atoms(geo, 3, x)).epsilon(1e-14));
  }
}

TEST_CASE("transform of the Erlang density is exp(-x)") {
  for (int d : {2, 3, 5}) {
    for (double x : {0.0, 0.3, 1.0, 4.0}) {
      CAPTURE(d);
      CAPTURE(x);
      CHECK(std::abs(williamson_transform(erlang_input(d), d, x) - std::exp(-x)) <= 1e-10);
    }
  }
}

TEST_CASE("transform of empirical input is a sample mean") {
  EmpiricalInput e{{1.0, 2.0, 4.0}};
  const double x = 1.5;
  const double expect = (0.0 + 0.25 * 0.25 + 0.625 * 0.625) / 3.0;
  CHECK(williamson_transform(e, 3, x) == Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(williamson_generator(EmpiricalInput{{0.0, 1.0}}, 2), Error);
}

TEST_CASE("inverse transform closed forms") {
  for (int d = 2; d <= 5; ++d) {
    const Generator g = make_lower_bound(d);
    CHECK(inverse_williamson(g, d, 0.5) == 0.0);
    CHECK(inverse_williamson(g, d, 1.0) == Approx(1.0).epsilon(1e-12));
  }
  const Generator e = make_clayton(0.0, 3);
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.1 * i;
    CHECK(std::abs(inverse_williamson(e, 3, x) - oracle::erlang_cdf(3, x)) <= 1e-10);
  }
  for (double theta : {1.5, 2.0, 3.0}) {
    const Generator g = make_power_kink(theta);
    for (double x : {0.0, 0.1, 0.5, 0.9, 0.999}) {
      CHECK(inverse_williamson(g, 2, x) ==
            Approx((1.0 - 1.0 / theta) * std::pow(x, 1.0 / theta)).epsilon(1e-12));
    }
    CHECK(inverse_williamson(g, 2, 1.0) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("inverse transform rejects generators that are not d-monotone") {
  const Generator g = make_clayton(-0.3, 1);
  CHECK_THROWS_AS(radial_from_generator(g, 5), Error);
  try {
    radial_from_generator(g, 5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_d_monotone);
  }
}

TEST_CASE("radial laws of catalogued generators") {
  const auto pk = radial_from_generator(make_power_kink(3.0), 2);
  REQUIRE(pk.atoms().size() == 1);
  CHECK(pk.atoms()[0].location == 1.0);
  CHECK(pk.atoms()[0].mass == Approx(1.0 / 3.0).epsilon(1e-12));

  const auto cm = radial_from_generator(make_clayton(-0.5, 3), 3);
  REQUIRE(cm.atoms().size() == 1);
  CHECK(cm.atoms()[0].location == Approx(2.0));
  CHECK(cm.atoms()[0].mass == Approx(1.0).epsilon(1e-12));
  CHECK(cm.cdf(1.999) == Approx(0.0));

  const auto cp = radial_from_generator(make_clayton(0.2, 3), 3);
  CHECK(cp.atoms().empty());
  for (double x : {0.1, 1.0, 3.0, 10.0, 50.0}) {
    CHECK(cp.cdf(x) == Approx(clayton_positive_cdf(0.2, 3, x)).epsilon(1e-10));
  }
  const auto cn = radial_from_generator(make_clayton(-0.3, 3), 3);
  for (double x : {0.1, 1.0, 2.0, 3.0, 3.3}) {
    CHECK(cn.cdf(x) == Approx(clayton_negative_cdf(1.0 / 0.3, 3, x)).epsilon(1e-10));
  }
  const auto two = radial_from_generator(make_discrete_radial(oracle::two_point_atoms(), 2), 2);
  REQUIRE(two.atoms().size() == 2);
  CHECK(two.atoms()[0].mass == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(two.atoms()[1].mass == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(two.continuous_mass() == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("closed-form Clayton radial CDF") {
  for (int d : {2, 3, 5}) {
    CHECK(clayton_radial_cdf(-1.0 / (d - 1), d, d - 1.0 - 1e-9) == Approx(0.0));
    CHECK(clayton_radial_cdf(-1.0 / (d - 1), d, d - 1.0) == 1.0);
    for (double x : {0.5, 2.0, 6.0}) {
      CHECK(clayton_radial_cdf(0.0, d, x) == Approx(oracle::erlang_cdf(d, x)).epsilon(1e-14));
      CHECK(std::abs(clayton_radial_cdf(1e-6, d, x) - oracle::erlang_cdf(d, x)) <= 1e-4);
      CHECK(clayton_radial_cdf(0.7, d, x) == Approx(clayton_positive_cdf(0.7, d, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("round trip from radial law to generator and back") {
  auto check_atoms = [](const std::vector<Atom>& atoms, int d) {
    const Generator g = williamson_generator(atoms, d);
    std::vector<double> xs;
    for (const auto& a : atoms) {
      if (a.location > 12.0) break;
      xs.insert(xs.end(), {a.location, a.location - 1e-6, a.location + 1e-6});
    }
    for (int i = 0; i < 100 - static_cast<int>(xs.size()); ++i) xs.push_back(0.05 + 0.11 * i);
    for (double x : xs) {
      CAPTURE(x);
      CHECK(std::abs(inverse_williamson(g, d, x) - oracle::atoms_cdf(atoms, x)) <= 1e-8);
    }
  };
  check_atoms(oracle::two_point_atoms(), 2);
  check_atoms(oracle::geometric_atoms(0.5), 2);
  check_atoms(oracle::geometric_atoms(0.5), 3);

  for (int d : {2, 3, 5}) {
    const Generator g = williamson_generator(erlang_input(d), d);
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.15 * i;
      CHECK(std::abs(inverse_williamson(g, d, x) - oracle::erlang_cdf(d, x)) <= 1e-6);
    }
  }
}

TEST_CASE("round trip from generator to radial law and back") {
  for (double theta : {-0.3, 0.0, 0.2, 1.0}) {
    for (int d : {2, 3, 5}) {
      if (theta < -1.0 / (d - 1)) continue;  // not d-monotone
      const Generator g = make_clayton(theta, d);
      const RadialInput law = radial_from_generator(g, d);
      for (int i = 0; i < 50; ++i) {
        const double x = 0.1 + 0.2 * i;
        CAPTURE(theta);
        CAPTURE(d);
        CAPTURE(x);
        CHECK(std::abs(williamson_transform(law, d, x) - g.psi(x)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("radial law scales with the generator") {
  const Generator g = make_clayton(0.5, 3);
  const double k = 2.5;
  const auto r = radial_from_generator(g, 3);
  const auto rs = radial_from_generator(g.scaled(k), 3);
  for (double x : {0.1, 0.7, 2.0, 9.0}) {
    CHECK(rs.cdf(x) == Approx(r.cdf(x / k)).epsilon(1e-9));
  }
  const auto pk = radial_from_generator(make_power_kink(3.0).scaled(k), 2);
  REQUIRE(pk.atoms().size() == 1);
  CHECK(pk.atoms()[0].location == Approx(k));
}

TEST_CASE("radial density") {
  for (double x : {0.5, 1.0, 3.0}) {
    const auto v = radial_density(make_clayton(0.0, 3), 3, x);
    REQUIRE(v.has_value());
    CHECK(*v == Approx(oracle::erlang_density(3, x)).epsilon(1e-12));
  }
  CHECK_FALSE(radial_density(make_power_kink(2.0), 2, 0.5).has_value());
}

TEST_CASE("monotone radial CDF on a grid") {
  for (const auto& [name, g, d] : oracle::catalog()) {
    CAPTURE(name);
    const auto r = radial_from_generator(g, d);
    double prev = 0.0;
    CHECK(r.cdf(0.0) == 0.0);
    for (int i = 1; i <= 300; ++i) {
      const double x = 0.05 * i;
      const double v = r.cdf(x);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    CHECK(r.cdf(1e9) == Approx(1.0).epsilon(1e-6));
  }
}
