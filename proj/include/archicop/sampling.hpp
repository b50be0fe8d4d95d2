#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archicop/generator.hpp"
#include "archicop/radial.hpp"
#include "archicop/rng.hpp"

namespace archicop {

struct SampleMeta {
  std::string family;
  std::string params_json;  // serialised FamilyParams, "{}" when unknown
  std::uint64_t seed = 0;
  std::string algorithm;    // "williamson", "frailty", "l1_symmetric", "input"
};

/// n x d matrix of observations, row-major.
struct SampleMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;
  SampleMeta meta;

  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols) : n(rows), d(cols), values(rows * cols) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * d + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * d + j]; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * d, d}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * d, d}; }
  std::vector<double> column(std::size_t j) const;
};

/// Uniform point on the unit simplex: d i.i.d. standard exponentials divided
/// by their sum, renormalised so the coordinates sum to 1.
void sample_simplex(Rng& rng, std::span<double> out);
std::vector<double> sample_simplex(Rng& rng, int d);

struct SamplingOptions {
  unsigned threads = 1;
  /// Use a 1024-knot quantile table for the radial draws.
  bool quantile_table = false;
};

/// Rows of the d-dimensional Archimedean copula generated by g:
/// U_i = psi(R S_i) with S uniform on the simplex and R from the radial law.
/// Row i draws from the sub-stream Rng(seed).split(i), so the output does not
/// depend on the thread count. Zeros under a strict generator are replaced by
/// the smallest positive normal double.
SampleMatrix sample_copula(const Generator& g, int d, std::size_t n, std::uint64_t seed,
                           const SamplingOptions& opts = {});

/// Same, with a radial law supplied by the caller (skips reconstruction).
SampleMatrix sample_copula(const Generator& g, const RadialDistribution& radial, int d,
                           std::size_t n, std::uint64_t seed, const SamplingOptions& opts = {});

/// The l1-norm symmetric vectors X = R S behind sample_copula.
SampleMatrix sample_l1_symmetric(const Generator& g, int d, std::size_t n, std::uint64_t seed,
                                 const SamplingOptions& opts = {});

/// Clayton copula through the frailty construction X = Y / W with
/// W ~ Gamma(1/theta, scale theta) and U_i = psi(X_i). theta > 0.
SampleMatrix sample_frailty_clayton(double theta, int d, std::size_t n, std::uint64_t seed,
                                    const SamplingOptions& opts = {});

}  // namespace archicop
