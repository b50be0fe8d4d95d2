#include "archicop/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "archicop/error.hpp"
#include "archicop/serialize.hpp"
#include "archicop/williamson.hpp"

namespace archicop {

namespace {

template <class RowFn>
void for_each_row(std::size_t n, unsigned threads, RowFn fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t block = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(n, lo + block);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_args(int d, std::size_t n) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "sample size n must be >= 1");
}

SampleMeta meta_for(const Generator& g, std::uint64_t seed, const char* algorithm) {
  return {std::string(family_name(g.family())), family_params_json(g), seed, algorithm};
}

}  // namespace

std::vector<double> SampleMatrix::column(std::size_t j) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(i, j);
  return out;
}

void sample_simplex(Rng& rng, std::span<double> out) {
  double sum = 0.0;
  for (double& y : out) {
    y = rng.exponential();
    sum += y;
  }
  for (double& y : out) y /= sum;
  // Second pass absorbs the rounding of the first division.
  double s2 = 0.0;
  for (double y : out) s2 += y;
  for (double& y : out) y /= s2;
}

std::vector<double> sample_simplex(Rng& rng, int d) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "simplex dimension must be >= 2");
  std::vector<double> s(d);
  sample_simplex(rng, s);
  return s;
}

SampleMatrix sample_copula(const Generator& g, const RadialDistribution& radial, int d,
                           std::size_t n, std::uint64_t seed, const SamplingOptions& opts) {
  check_args(d, n);
  const RadialDistribution r = opts.quantile_table && !radial.has_quantile_table()
                                   ? radial.with_quantile_table()
                                   : radial;
  SampleMatrix out(n, static_cast<std::size_t>(d));
  out.meta = meta_for(g, seed, "williamson");
  const Rng base(seed);
  const bool strict = g.strict();
  constexpr double tiny = std::numeric_limits<double>::min();
  for_each_row(n, opts.threads, [&](std::size_t i) {
    Rng rng = base.split(i);
    auto row = out.row(i);
    sample_simplex(rng, row);
    const double radius = r.sample_one(rng);
    for (double& v : row) {
      v = g.psi(radius * v);
      if (strict && v == 0.0) v = tiny;
    }
  });
  return out;
}

SampleMatrix sample_copula(const Generator& g, int d, std::size_t n, std::uint64_t seed,
                           const SamplingOptions& opts) {
  check_args(d, n);
  return sample_copula(g, radial_from_generator(g, d), d, n, seed, opts);
}

SampleMatrix sample_l1_symmetric(const Generator& g, int d, std::size_t n, std::uint64_t seed,
                                 const SamplingOptions& opts) {
  check_args(d, n);
  RadialDistribution r = radial_from_generator(g, d);
  if (opts.quantile_table) r = r.with_quantile_table();
  SampleMatrix out(n, static_cast<std::size_t>(d));
  out.meta = meta_for(g, seed, "l1_symmetric");
  const Rng base(seed);
  for_each_row(n, opts.threads, [&](std::size_t i) {
    Rng rng = base.split(i);
    auto row = out.row(i);
    sample_simplex(rng, row);
    const double radius = r.sample_one(rng);
    for (double& v : row) v *= radius;
  });
  return out;
}

SampleMatrix sample_frailty_clayton(double theta, int d, std::size_t n, std::uint64_t seed,
                                    const SamplingOptions& opts) {
  check_args(d, n);
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::invalid_parameter, "frailty sampler: theta must be > 0");
  }
  const Generator g = make_clayton(theta, d);
  SampleMatrix out(n, static_cast<std::size_t>(d));
  out.meta = meta_for(g, seed, "frailty");
  const Rng base(seed);
  constexpr double tiny = std::numeric_limits<double>::min();
  for_each_row(n, opts.threads, [&](std::size_t i) {
    Rng rng = base.split(i);
    // E exp(-x W) = (1 + theta x)^(-1/theta) for W ~ Gamma(1/theta, scale theta).
    const double w = theta * rng.gamma(1.0 / theta);
    for (double& v : out.row(i)) {
      v = g.psi(rng.exponential() / w);
      if (v == 0.0) v = tiny;
    }
  });
  return out;
}

}  // namespace archicop
