#include "archicop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "archicop/copula_eval.hpp"
#include "archicop/error.hpp"
#include "archicop/numerics.hpp"
#include "archicop/williamson.hpp"

namespace archicop {

namespace {

template <class F>
void parallel_blocks(std::size_t n, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 256 + 1)));
  if (threads == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, t, lo, hi] {
      try {
        body(lo, hi);
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

// Counts exchanges needed to sort v ascending (merge sort).
std::uint64_t count_swaps(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_swaps(v, buf, lo, mid) + count_swaps(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

std::uint64_t tie_pairs(const std::vector<double>& sorted) {
  std::uint64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

std::vector<double> v_column(const SampleMatrix& angular, std::size_t j) {
  std::vector<double> v(angular.n);
  const double p = static_cast<double>(angular.d) - 1.0;
  for (std::size_t k = 0; k < angular.n; ++k) v[k] = std::pow(1.0 - angular(k, j), p);
  return v;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : t_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < t_.size(); i += i & (~i + 1)) ++t_[i];
  }
  std::uint64_t prefix(std::size_t i) const {  // count of entries < i
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += t_[i];
    return s;
  }

 private:
  std::vector<std::uint64_t> t_;
};

std::vector<double> pseudo_obs_bivariate(const SampleMatrix& m) {
  const std::size_t n = m.n;
  std::vector<std::size_t> by_y(n);
  std::iota(by_y.begin(), by_y.end(), 0);
  std::sort(by_y.begin(), by_y.end(), [&](std::size_t a, std::size_t b) { return m(a, 1) < m(b, 1); });
  std::vector<std::size_t> rank(n);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && m(by_y[i], 1) != m(by_y[i - 1], 1)) r = i;
    rank[by_y[i]] = r;
  }
  std::vector<std::size_t> by_x(n);
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return m(a, 0) < m(b, 0); });
  Fenwick tree(n);
  std::vector<double> w(n);
  const double scale = 1.0 / static_cast<double>(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && m(by_x[j], 0) == m(by_x[i], 0)) ++j;
    for (std::size_t k = i; k < j; ++k) {
      w[by_x[k]] = static_cast<double>(tree.prefix(rank[by_x[k]])) * scale;
    }
    for (std::size_t k = i; k < j; ++k) tree.add(rank[by_x[k]]);
    i = j;
  }
  return w;
}

std::vector<double> pseudo_obs_general(const SampleMatrix& m, unsigned threads) {
  const std::size_t n = m.n;
  const std::size_t d = m.d;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m(a, 0) < m(b, 0); });
  std::vector<double> sorted(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(m.values.begin() + order[i] * d, d, sorted.begin() + i * d);
  }
  std::vector<double> w(n);
  const double scale = 1.0 / static_cast<double>(n - 1);
  parallel_blocks(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double* uk = &sorted[i * d];
      std::uint64_t count = 0;
      for (std::size_t mrow = 0; mrow < i; ++mrow) {
        const double* um = &sorted[mrow * d];
        if (!(um[0] < uk[0])) continue;
        bool below = true;
        for (std::size_t j = 1; j < d && below; ++j) below = um[j] < uk[j];
        count += below;
      }
      w[order[i]] = static_cast<double>(count) * scale;
    }
  });
  return w;
}

}  // namespace

Decomposition radial_angular_decompose(const Generator& g, const SampleMatrix& sample) {
  Decomposition out;
  out.angular = SampleMatrix(0, sample.d);
  out.angular.meta = sample.meta;
  out.angular.meta.algorithm = "angular";
  std::vector<double> y(sample.d);
  for (std::size_t k = 0; k < sample.n; ++k) {
    double r = 0.0;
    for (std::size_t j = 0; j < sample.d; ++j) {
      const double u = sample(k, j);
      if (!(u >= 0.0 && u <= 1.0)) {
        throw Error(ErrorCode::domain, "sample values must lie in [0, 1]");
      }
      y[j] = g.psi_inv(u);
      r += y[j];
    }
    if (r == 0.0) {
      ++out.excluded;
      continue;
    }
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::domain, "row with a zero coordinate under a strict generator");
    }
    out.radius.push_back(r);
    for (std::size_t j = 0; j < sample.d; ++j) out.angular.values.push_back(y[j] / r);
    ++out.angular.n;
  }
  return out;
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  if (values.empty()) throw Error(ErrorCode::invalid_parameter, "KS statistic of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double dmax = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    dmax = std::max({dmax, std::abs(upto - cdf(values[i])), std::abs(below - cdf_left(values[i]))});
    i = j;
  }
  return dmax;
}

double ks_uniform(std::vector<double> values) {
  auto f = [](double x) { return std::clamp(x, 0.0, 1.0); };
  return ks_statistic(std::move(values), f, f);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_parameter, "KS of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double dmax = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    dmax = std::max(dmax, std::abs(i / na - j / nb));
  }
  return dmax;
}

std::vector<double> uniformity_test(const SampleMatrix& angular) {
  std::vector<double> out;
  for (std::size_t j = 0; j < angular.d; ++j) out.push_back(ks_uniform(v_column(angular, j)));
  return out;
}

namespace {

// Radii that sit on a model atom up to roundoff are moved onto it.
void snap_to_atoms(std::vector<double>& radius, const std::vector<Atom>& atoms) {
  for (double& r : radius) {
    for (const Atom& a : atoms) {
      if (std::abs(r - a.location) <= 1e-9 * std::max(1.0, a.location)) {
        r = a.location;
        break;
      }
    }
  }
}

}  // namespace

RadialGof radial_gof(std::vector<double> radius, const RadialDistribution& law) {
  RadialGof out;
  const auto& atoms = law.atoms();
  snap_to_atoms(radius, atoms);
  const double n = static_cast<double>(radius.size());
  for (const Atom& a : atoms) {
    const auto hits = std::count(radius.begin(), radius.end(), a.location);
    out.atoms.push_back({a.location, a.mass, static_cast<double>(hits) / n});
  }
  out.ks = ks_statistic(
      std::move(radius), [&](double x) { return law.cdf(x); },
      [&](double x) { return law.cdf_left(x); });
  return out;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw Error(ErrorCode::invalid_parameter, "kendall_tau_b: length mismatch");
  if (n < 2) throw Error(ErrorCode::invalid_parameter, "kendall_tau_b needs at least two pairs");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  std::uint64_t ties_x = 0, ties_xy = 0;
  std::size_t run_x = 1, run_xy = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool same_x = i < n && x[idx[i]] == x[idx[i - 1]];
    const bool same_xy = same_x && y[idx[i]] == y[idx[i - 1]];
    if (same_x) {
      ++run_x;
    } else {
      ties_x += run_x * (run_x - 1) / 2;
      run_x = 1;
    }
    if (same_xy) {
      ++run_xy;
    } else {
      ties_xy += run_xy * (run_xy - 1) / 2;
      run_xy = 1;
    }
  }
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  const std::uint64_t swaps = count_swaps(ys, buf, 0, n);
  const std::uint64_t ties_y = tie_pairs(ys);
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double s = n0 - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                   static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  const double denom = std::sqrt((n0 - ties_x) * (n0 - ties_y));
  if (denom == 0.0) return 0.0;
  return s / denom;
}

std::vector<double> independence_test(std::span<const double> radius, const SampleMatrix& angular) {
  if (radius.size() != angular.n) {
    throw Error(ErrorCode::invalid_parameter, "independence_test: length mismatch");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < angular.d; ++j) {
    const auto v = v_column(angular, j);
    out.push_back(kendall_tau_b(radius, v));
  }
  return out;
}

EmpiricalKendall::EmpiricalKendall(std::vector<double> w) : w_(std::move(w)) {
  std::sort(w_.begin(), w_.end());
}

double EmpiricalKendall::operator()(double x) const {
  if (w_.empty()) return 0.0;
  const auto it = std::upper_bound(w_.begin(), w_.end(), x);
  return static_cast<double>(it - w_.begin()) / static_cast<double>(w_.size());
}

double EmpiricalKendall::left(double x) const {
  if (w_.empty()) return 0.0;
  const auto it = std::lower_bound(w_.begin(), w_.end(), x);
  return static_cast<double>(it - w_.begin()) / static_cast<double>(w_.size());
}

EmpiricalKendall empirical_kendall(const SampleMatrix& sample, unsigned threads) {
  if (sample.n < 2) throw Error(ErrorCode::invalid_parameter, "empirical Kendall function needs n >= 2");
  if (sample.d < 2) throw Error(ErrorCode::invalid_parameter, "empirical Kendall function needs d >= 2");
  if (sample.d == 2) return EmpiricalKendall(pseudo_obs_bivariate(sample));
  return EmpiricalKendall(pseudo_obs_general(sample, threads));
}

double kendall_distance(const EmpiricalKendall& emp, const Generator& g, int d, int grid) {
  double dmax = 0.0;
  for (int j = 0; j <= grid; ++j) {
    const double t = static_cast<double>(j) / grid;
    const double x = t * t;
    const double k = kendall_value(g, d, x);
    dmax = std::max(dmax, std::abs(emp(x) - k));
    if (j > 0) {
      // Model left limit approximated just below x; K is continuous away from atoms.
      const double xl = std::nextafter(x, 0.0);
      dmax = std::max(dmax, std::abs(emp.left(x) - kendall_value(g, d, xl)));
    }
  }
  return dmax;
}

DiagnosticsReport diagnose(const Generator& g, const SampleMatrix& sample,
                           const DiagnosticsOptions& opts) {
  const int d = static_cast<int>(sample.d);
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "diagnostics need d >= 2");
  if (sample.n < 2) throw Error(ErrorCode::invalid_parameter, "diagnostics need n >= 2");
  DiagnosticsReport rep;
  rep.n = sample.n;
  rep.d = sample.d;
  const Decomposition dec = radial_angular_decompose(g, sample);
  rep.excluded = dec.excluded;
  const std::size_t m = dec.radius.size();
  if (m < 2) throw Error(ErrorCode::invalid_parameter, "fewer than two usable rows");
  const double nm = static_cast<double>(m);

  rep.thresholds.radial_ks = opts.ks_coefficient / std::sqrt(nm);
  rep.thresholds.uniformity_ks = rep.thresholds.radial_ks;
  rep.thresholds.independence_tau =
      opts.tau_z * std::sqrt(2.0 * (2.0 * nm + 5.0) / (9.0 * nm * (nm - 1.0)));

  const RadialDistribution law = radial_from_generator(g, d);
  std::vector<double> radius = dec.radius;
  snap_to_atoms(radius, law.atoms());
  rep.radial = radial_gof(radius, law);
  rep.uniformity_ks = uniformity_test(dec.angular);
  rep.independence_tau = independence_test(radius, dec.angular);
  for (double t : rep.independence_tau) rep.max_abs_tau = std::max(rep.max_abs_tau, std::abs(t));

  rep.radial_pass = rep.radial.ks <= rep.thresholds.radial_ks;
  rep.uniformity_pass = std::all_of(rep.uniformity_ks.begin(), rep.uniformity_ks.end(),
                                    [&](double k) { return k <= rep.thresholds.uniformity_ks; });
  rep.independence_pass = rep.max_abs_tau <= rep.thresholds.independence_tau;
  rep.pass = rep.radial_pass && rep.uniformity_pass && rep.independence_pass;

  if (opts.kendall) {
    rep.kendall = empirical_kendall(sample, opts.threads);
    rep.kendall_distance = kendall_distance(*rep.kendall, g, d);
  }
  return rep;
}

Generator family_at(Family family, double v, int d) {
  switch (family) {
    case Family::clayton:
      return make_clayton(v, d);
    case Family::power_kink:
      if (d != 2) throw Error(ErrorCode::invalid_parameter, "power_kink is bivariate");
      return make_power_kink(v);
    case Family::reciprocal_uniform:
      return make_reciprocal_uniform(1.0, v, d);
    default:
      throw Error(ErrorCode::invalid_parameter,
                  "family '" + std::string(family_name(family)) + "' has no scalar parameter to fit");
  }
}

FitResult fit_generator(Family family, const EmpiricalKendall& emp, int d, double lo, double hi,
                        const FitOptions& opts) {
  if (!(lo < hi)) throw Error(ErrorCode::invalid_parameter, "fit bounds need lo < hi");
  if (opts.coarse_points < 3) throw Error(ErrorCode::invalid_parameter, "coarse grid needs >= 3 points");
  // Validates the bounds; throws for inadmissible endpoints.
  family_at(family, lo, d);
  family_at(family, hi, d);

  FitResult out;
  out.family = family;
  out.parameter = family == Family::reciprocal_uniform ? "b" : "theta";
  out.lo = lo;
  out.hi = hi;
  auto objective = [&](double v) { return kendall_distance(emp, family_at(family, v, d), d); };

  const int m = opts.coarse_points;
  std::vector<double> xs(m), fs(m);
  for (int i = 0; i < m; ++i) xs[i] = lo + (hi - lo) * i / (m - 1);
  parallel_blocks(static_cast<std::size_t>(m), opts.threads, [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a; i < b; ++i) fs[i] = objective(xs[i]);
  });
  const auto [fmin, fmax] = std::minmax_element(fs.begin(), fs.end());
  if (*fmax - *fmin < 1e-6) {
    throw Error(ErrorCode::non_identifiable,
                "objective is flat over [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const int best = static_cast<int>(fmin - fs.begin());
  const double a = xs[std::max(0, best - 1)];
  const double b = xs[std::min(m - 1, best + 1)];
  const auto line = numerics::golden_section_minimize(objective, a, b, opts.tolerance);
  out.evaluations = m + line.evaluations;
  if (line.value <= *fmin) {
    out.value = line.x;
    out.distance = line.value;
  } else {
    out.value = xs[best];
    out.distance = *fmin;
  }
  return out;
}

FitResult fit_generator(Family family, const SampleMatrix& sample, double lo, double hi,
                        const FitOptions& opts) {
  return fit_generator(family, empirical_kendall(sample, opts.threads),
                       static_cast<int>(sample.d), lo, hi, opts);
}

}  // namespace archicop
