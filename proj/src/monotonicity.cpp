#include "archicop/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "archicop/error.hpp"

namespace archicop {

namespace {

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

struct Evaluated {
  double value = 0.0;
  bool ok = true;
};

Evaluated signed_deriv(const Generator& g, double x, int k, Side side = Side::right) {
  try {
    const double v = sign_pow(k) * g.deriv(x, k, side);
    if (!std::isfinite(v)) return {0.0, false};
    return {v, true};
  } catch (const Error&) {
    return {0.0, false};
  }
}

std::vector<double> build_grid(const Generator& g, int points, GridSpec& spec) {
  const double x0 = g.zero_point();
  double xmax = 10.0;
  const double tail = g.psi_inv(1e-8);
  if (std::isfinite(tail)) xmax = std::max(xmax, 2.0 * tail);
  if (std::isfinite(x0)) xmax = std::max(xmax, 1.5 * x0);
  const double xmin = 1e-6 * (std::isfinite(x0) ? std::min(1.0, x0) : 1.0);
  std::vector<double> xs;
  xs.reserve(points + 64);
  const double step = std::log(xmax / xmin) / (points - 1);
  for (int i = 0; i < points; ++i) xs.push_back(xmin * std::exp(step * i));

  spec.refined_at = g.kink_points();
  if (std::isfinite(x0)) spec.refined_at.push_back(x0);
  for (double k : spec.refined_at) {
    if (!(k > 0.0)) continue;
    for (double delta : {1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
      xs.push_back(k * (1.0 - delta));
      xs.push_back(k * (1.0 + delta));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  spec.points = xs.size();
  spec.x_min = xs.front();
  spec.x_max = xs.back();
  return xs;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 64 + 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
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

}  // namespace

MonotonicityReport check_d_monotone(const Generator& g, int d, const MonotonicityOptions& opts) {
  if (d < 2) throw Error(ErrorCode::invalid_parameter, "dimension d must be >= 2");
  if (opts.grid_points < 8) throw Error(ErrorCode::invalid_parameter, "grid needs at least 8 points");

  MonotonicityReport rep;
  rep.d = d;
  const int top = d - 2;
  rep.numeric_derivatives = !g.analytic(top);
  const std::vector<double> xs = build_grid(g, opts.grid_points, rep.grid);
  const std::size_t n = xs.size();

  std::vector<Violation> found;
  auto record = [&](double x, int order, double value, const char* kind) {
    found.push_back({x, order, value, kind});
  };

  // (-1)^k psi^(k) on the grid for every k <= d-2.
  std::vector<std::vector<Evaluated>> table(top + 1, std::vector<Evaluated>(n));
  parallel_for(n, opts.threads, [&](std::size_t i) {
    for (int k = 0; k <= top; ++k) table[k][i] = signed_deriv(g, xs[i], k);
  });

  for (int k = 0; k <= top; ++k) {
    OrderSummary s;
    s.order = k;
    s.points = n;
    s.min_value = std::numeric_limits<double>::infinity();
    const double rel = g.analytic(k) ? 1e-9 : 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
      const Evaluated& e = table[k][i];
      if (!e.ok) {
        record(xs[i], k, std::nan(""), "evaluation");
        s.pass = false;
        continue;
      }
      s.min_value = std::min(s.min_value, e.value);
      if (e.value < -rel * std::max(1.0, std::abs(e.value))) {
        record(xs[i], k, e.value, "sign");
        s.pass = false;
      }
    }
    rep.orders.push_back(s);
  }

  // Orders up to d-2 must exist, so one-sided values have to agree at kinks.
  for (double c : rep.grid.refined_at) {
    if (!(c > 0.0)) continue;
    for (int k = 1; k <= top; ++k) {
      const Evaluated l = signed_deriv(g, c, k, Side::left);
      const Evaluated r = signed_deriv(g, c, k, Side::right);
      if (!l.ok || !r.ok) {
        record(c, k, std::nan(""), "evaluation");
        rep.shape.continuous = false;
        continue;
      }
      const double gap = std::abs(l.value - r.value);
      rep.shape.max_continuity_gap = std::max(rep.shape.max_continuity_gap, gap);
      const double rel = g.analytic(k) ? 1e-8 : 1e-4;
      if (gap > rel * std::max({1.0, std::abs(l.value), std::abs(r.value)})) {
        record(c, k, gap, "continuity");
        rep.shape.continuous = false;
      }
    }
  }

  // Shape of the (d-2)-th derivative.
  const std::vector<Evaluated>& gv = table[top];
  const double rel = rep.numeric_derivatives ? 1e-6 : 1e-9;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!gv[i].ok || !gv[i + 1].ok) continue;
    const double inc = gv[i + 1].value - gv[i].value;
    rep.shape.max_increase = std::max(rep.shape.max_increase, inc);
    if (inc > rel * std::max({1.0, std::abs(gv[i].value), std::abs(gv[i + 1].value)})) {
      record(xs[i + 1], top, inc, "nonincreasing");
      rep.shape.nonincreasing = false;
    }
  }
  std::vector<Evaluated> mids(n > 2 ? n - 2 : 0);
  parallel_for(mids.size(), opts.threads, [&](std::size_t i) {
    mids[i] = signed_deriv(g, 0.5 * (xs[i] + xs[i + 2]), top);
  });
  for (std::size_t i = 0; i < mids.size(); ++i) {
    const Evaluated& m = mids[i];
    const double mid = 0.5 * (xs[i] + xs[i + 2]);
    if (!m.ok) {
      record(mid, top, std::nan(""), "evaluation");
      rep.shape.convex = false;
      continue;
    }
    if (!gv[i].ok || !gv[i + 2].ok) continue;
    const double chord = 0.5 * (gv[i].value + gv[i + 2].value);
    const double gap = m.value - chord;
    rep.shape.max_convexity_gap = std::max(rep.shape.max_convexity_gap, gap);
    if (gap > rel * std::max({1.0, std::abs(gv[i].value), std::abs(gv[i + 2].value)})) {
      record(mid, top, gap, "convexity");
      rep.shape.convex = false;
    }
  }

  rep.pass = found.empty();
  if (!found.empty()) {
    rep.first_violation = *std::min_element(
        found.begin(), found.end(), [](const Violation& a, const Violation& b) {
          return a.x < b.x || (a.x == b.x && a.order < b.order);
        });
  }
  rep.certification = rep.pass ? "grid" : "violation";
  return rep;
}

int max_dimension(const Generator& g, int d_max, const MonotonicityOptions& opts) {
  if (d_max < 2) throw Error(ErrorCode::invalid_parameter, "d_max must be >= 2");
  int best = 1;
  for (int d = 2; d <= d_max; ++d) {
    if (!check_d_monotone(g, d, opts).pass) break;
    best = d;
  }
  return best;
}

}  // namespace archicop
