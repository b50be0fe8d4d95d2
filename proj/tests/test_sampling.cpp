#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "archicop/copula_eval.hpp"
#include "archicop/diagnostics.hpp"
#include "archicop/sampling.hpp"

using namespace archicop;
using doctest::Approx;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

double max_pair_tau_error(const SampleMatrix& m, double target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.d; ++i) {
    for (std::size_t j = i + 1; j < m.d; ++j) {
      const auto a = m.column(i), b = m.column(j);
      worst = std::max(worst, std::abs(kendall_tau_b(a, b) - target));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("simplex points") {
  Rng rng(3);
  for (int d : {2, 3, 7}) {
    for (int i = 0; i < 1000; ++i) {
      const auto s = sample_simplex(rng, d);
      double sum = 0.0;
      for (double v : s) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-15);
    }
  }
  std::vector<double> s2, s3;
  for (int i = 0; i < 100000; ++i) {
    s2.push_back(sample_simplex(rng, 2)[0]);
    s3.push_back(sample_simplex(rng, 3)[1]);
  }
  CHECK(oracle::ks_continuous(s2, uniform_cdf) <= 0.01);
  CHECK(oracle::ks_continuous(s3, [](double x) { return 1.0 - std::pow(1.0 - x, 2.0); }) <= 0.01);
}

TEST_CASE("countermonotone rows") {
  const auto m = sample_copula(make_lower_bound(2), 2, 10000, 5);
  for (std::size_t i = 0; i < m.n; ++i) CHECK(std::abs(m(i, 0) + m(i, 1) - 1.0) <= 1e-12);
}

TEST_CASE("copula samples have uniform margins and the right concordance") {
  const auto ind = sample_copula(make_clayton(0.0, 3), 3, 100000, 1);
  for (std::size_t j = 0; j < 3; ++j) CHECK(oracle::ks_continuous(ind.column(j), uniform_cdf) <= 0.01);
  CHECK(max_pair_tau_error(ind, 0.0) <= 0.01);

  const auto pk = sample_copula(make_power_kink(2.0), 2, 100000, 2);
  CHECK(max_pair_tau_error(pk, 0.0) <= 0.01);
  for (std::size_t j = 0; j < 2; ++j) CHECK(oracle::ks_continuous(pk.column(j), uniform_cdf) <= 0.01);

  const auto cl = sample_copula(make_clayton(1.0, 3), 3, 100000, 3);
  CHECK(max_pair_tau_error(cl, 1.0 / 3.0) <= 0.01);
  for (double v : cl.values) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("frailty sampler") {
  const auto f2 = sample_frailty_clayton(1.0, 2, 100000, 9);
  for (std::size_t j = 0; j < 2; ++j) CHECK(oracle::ks_continuous(f2.column(j), uniform_cdf) <= 0.01);
  const auto f3 = sample_frailty_clayton(1.0, 3, 100000, 10);
  CHECK(max_pair_tau_error(f3, 1.0 / 3.0) <= 0.01);

  const Generator g = make_clayton(1.0, 2);
  const auto w = sample_copula(g, 2, 100000, 11);
  std::vector<double> cf, cw;
  for (std::size_t i = 0; i < f2.n; ++i) {
    cf.push_back(copula_cdf(g, f2.row(i)));
    cw.push_back(copula_cdf(g, w.row(i)));
  }
  CHECK(ks_two_sample(cf, cw) <= 0.012);
  CHECK_THROWS(sample_frailty_clayton(-0.2, 2, 10, 1));
}

TEST_CASE("sampling is reproducible and thread-count independent") {
  const Generator g = make_clayton(-0.3, 3);
  SamplingOptions one, four;
  four.threads = 4;
  const auto a = sample_copula(g, 3, 5000, 42, one);
  const auto b = sample_copula(g, 3, 5000, 42, four);
  const auto c = sample_copula(g, 3, 5000, 43, one);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.meta.seed == 42);
  CHECK(a.meta.family == "clayton");
  CHECK(a.meta.algorithm == "williamson");
  const auto fa = sample_frailty_clayton(2.0, 3, 3000, 8, one);
  const auto fb = sample_frailty_clayton(2.0, 3, 3000, 8, four);
  CHECK(fa.values == fb.values);
}

TEST_CASE("l1-norm symmetric draws") {
  const Generator g = make_lower_bound(3);
  const auto x = sample_l1_symmetric(g, 3, 1000, 4);
  for (std::size_t i = 0; i < x.n; ++i) {
    const auto r = x.row(i);
    CHECK(std::accumulate(r.begin(), r.end(), 0.0) == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("quantile table option keeps margins uniform") {
  SamplingOptions opts;
  opts.quantile_table = true;
  const auto m = sample_copula(make_reciprocal_uniform(1.0, 8.0, 2), 2, 100000, 6, opts);
  for (std::size_t j = 0; j < 2; ++j) CHECK(oracle::ks_continuous(m.column(j), uniform_cdf) <= 0.01);
}
