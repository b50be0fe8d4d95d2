#include "archicop/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "archicop/error.hpp"

namespace archicop::numerics {

namespace {

// Relative tolerance handed to the double-exponential rules; the absolute
// acceptance test is applied afterwards on the summed error estimate.
constexpr double kRuleTolerance = 1e-13;

QuadratureResult integrate_piece(const std::function<double(double)>& f,
                                 double a, double b) {
  thread_local boost::math::quadrature::tanh_sinh<double> finite_rule;
  thread_local boost::math::quadrature::exp_sinh<double> tail_rule;
  QuadratureResult out;
  double err = 0.0;
  double l1 = 0.0;
  try {
    if (std::isinf(b)) {
      out.value = tail_rule.integrate(f, a, b, kRuleTolerance, &err, &l1);
    } else {
      out.value = finite_rule.integrate(f, a, b, kRuleTolerance, &err, &l1);
    }
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "quadrature failed on [" << a << ", " << b << "]: " << e.what();
    throw Error(ErrorCode::numerical, msg.str());
  }
  // The double-exponential rules report the difference between the last two
  // refinement levels; when that is below rounding noise of the L1 norm, use
  // the noise floor instead.
  out.abs_error = std::max(err, 4.0 * std::numeric_limits<double>::epsilon() * l1);
  return out;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> breakpoints,
                           double abs_tol) {
  if (!(b > a)) return {};
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b && std::isfinite(x)) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(b);

  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto piece = integrate_piece(f, cuts[i], cuts[i + 1]);
    total.value += piece.value;
    total.abs_error += piece.abs_error;
  }
  if (!std::isfinite(total.value) || total.abs_error > abs_tol) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "quadrature did not converge: achieved tolerance "
        << total.abs_error << " > requested " << abs_tol;
    throw Error(ErrorCode::numerical, msg.str());
  }
  return total;
}

double bisect_first_true(const std::function<bool(double)>& pred, double lo,
                         double hi, double abs_tol, double rel_tol) {
  for (int it = 0; it < 2000; ++it) {
    if (hi - lo <= abs_tol + rel_tol * std::abs(hi)) break;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = c[j][m];
  return w;
}

LineMinimum golden_section_minimize(const std::function<double(double)>& f,
                                    double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evals;
  }
  const double x = 0.5 * (lo + hi);
  LineMinimum best{x, f(x), evals + 1};
  if (fc < best.value) best = {c, fc, best.evaluations};
  if (fd < best.value) best = {d, fd, best.evaluations};
  return best;
}

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

double falling_factorial(double a, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (a - j);
  return r;
}

double binomial(double alpha, int k) {
  return falling_factorial(alpha, k) / factorial(k);
}

}  // namespace archicop::numerics
