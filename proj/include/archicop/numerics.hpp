#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace archicop::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Adaptive integration of f over [a, b] (b may be +inf). The range is split
/// at every breakpoint strictly inside (a, b) so that kinks and jumps of the
/// integrand sit on piece boundaries. Throws Error(numerical) when the
/// accumulated error estimate exceeds abs_tol; the message carries the
/// achieved tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> breakpoints = {},
                           double abs_tol = 1e-10);

/// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone
/// (false ... false true ... true). Stops when hi - lo <= abs_tol + rel_tol*|hi|.
double bisect_first_true(const std::function<bool(double)>& pred, double lo,
                         double hi, double abs_tol, double rel_tol = 0.0);

/// Finite-difference weights for the m-th derivative at x0 from arbitrary
/// distinct nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

/// Result of a bracketed scalar minimisation.
struct LineMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than tol.
LineMinimum golden_section_minimize(const std::function<double(double)>& f,
                                    double lo, double hi, double tol);

double factorial(int k);

/// Falling factorial a (a-1) ... (a-k+1); 1 for k = 0.
double falling_factorial(double a, int k);

/// Extended binomial coefficient binom(alpha, k) as the direct product
/// prod_{j<k} (alpha - j) / k!.
double binomial(double alpha, int k);

}  // namespace archicop::numerics
