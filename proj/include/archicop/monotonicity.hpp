#pragma once

#include <optional>
#include <string>
#include <vector>

#include "archicop/generator.hpp"

namespace archicop {

struct MonotonicityOptions {
  int grid_points = 512;
  unsigned threads = 1;
};

/// Sign check of (-1)^k psi^(k) at one order.
struct OrderSummary {
  int order = 0;
  std::size_t points = 0;
  double min_value = 0.0;  // min of (-1)^k psi^(k) over the grid
  bool pass = true;
};

/// Shape check of g = (-1)^(d-2) psi^(d-2).
struct ShapeSummary {
  double max_increase = 0.0;        // max of g(x_{i+1}) - g(x_i)
  double max_convexity_gap = 0.0;   // max of g(mid) - (g(x_i) + g(x_{i+2})) / 2
  double max_continuity_gap = 0.0;  // max one-sided jump of psi^(k), k <= d-2, at kinks
  bool nonincreasing = true;
  bool convex = true;
  bool continuous = true;
};

struct Violation {
  double x = 0.0;
  int order = 0;
  double value = 0.0;
  /// "sign", "nonincreasing", "convexity", "continuity" or "evaluation"
  std::string kind;
};

struct GridSpec {
  std::size_t points = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> refined_at;  // kinks and the zero point
};

struct MonotonicityReport {
  int d = 0;
  bool pass = true;
  std::vector<OrderSummary> orders;
  ShapeSummary shape;
  std::optional<Violation> first_violation;  // smallest x among violations
  GridSpec grid;
  bool numeric_derivatives = false;
  /// "violation" (definitive) or "grid" (pass certified up to grid resolution)
  std::string certification;
};

/// Grid test of d-monotonicity: (-1)^k psi^(k) >= 0 for k <= d-2, the
/// (d-2)-th derivative continuous across kinks, and (-1)^(d-2) psi^(d-2)
/// nonincreasing and midpoint-convex. The log grid spans
/// [1e-6 min(1, x0), X] with X = max(10, 2 psi_inv(1e-8), 1.5 x0) and is refined
/// around every kink and the zero point. A recorded violation is definitive;
/// a pass holds up to grid resolution.
MonotonicityReport check_d_monotone(const Generator& g, int d,
                                    const MonotonicityOptions& opts = {});

/// Largest d in [2, d_max] passing check_d_monotone (1 if d = 2 fails).
int max_dimension(const Generator& g, int d_max, const MonotonicityOptions& opts = {});

}  // namespace archicop
