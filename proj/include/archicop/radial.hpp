#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "archicop/generator.hpp"
#include "archicop/rng.hpp"

namespace archicop {

/// Law of a nonnegative radial part R: an absolutely continuous component
/// plus finitely many atoms. The total CDF is right-continuous with
/// cdf(0) = 0. Immutable and shareable across threads.
class RadialDistribution {
 public:
  /// continuous_cdf must be nondecreasing on [0, inf), start at 0 and tend
  /// to 1 - sum(atom masses). upper is the right end of the support
  /// (+inf allowed).
  RadialDistribution(std::function<double(double)> continuous_cdf,
                     std::vector<Atom> atoms, double upper);

  static RadialDistribution point_mass(double location);
  static RadialDistribution discrete(std::vector<Atom> atoms);
  /// Gamma(d, 1): the radial law of the independence copula in dimension d.
  static RadialDistribution erlang(int d);

  double cdf(double x) const;
  /// Left limit F(x-).
  double cdf_left(double x) const;
  double survival(double x) const { return 1.0 - cdf(x); }
  double continuous_cdf(double x) const;
  /// Mass of the atom located exactly at x (0 if none).
  double atom_mass_at(double x) const;

  /// inf{x : cdf(x) >= u} for u in (0, 1). Exact at atoms; bisection to
  /// 1e-12 (absolute, relative for large x) on the continuous part.
  /// Throws Error(numerical) if no bracket can be found.
  double quantile(double u) const;

  double sample_one(Rng& rng) const { return quantile(rng.uniform()); }
  std::vector<double> sample(Rng& rng, std::size_t n) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  double atom_mass() const { return atom_mass_; }
  double continuous_mass() const { return 1.0 - atom_mass_; }
  double upper() const { return upper_; }

  /// Copy whose quantile() interpolates a monotone table of `knots` exact
  /// quantiles on the continuous part (atoms stay exact). Trades accuracy
  /// for speed at large sample sizes.
  RadialDistribution with_quantile_table(int knots = 1024) const;
  bool has_quantile_table() const { return table_ != nullptr; }

 private:
  struct QuantileTable {
    std::vector<double> u;
    std::vector<double> x;
  };

  double exact_quantile(double u) const;

  std::function<double(double)> continuous_cdf_;
  std::vector<Atom> atoms_;
  double atom_mass_ = 0.0;
  double upper_;
  std::shared_ptr<const QuantileTable> table_;
};

/// E psi(R) = sum_i p_i psi(t_i) + integral of psi against the continuous
/// part, evaluated by quadrature (tolerance 1e-9), not Monte Carlo.
double expectation_psi(const RadialDistribution& r, const Generator& g);

}  // namespace archicop
