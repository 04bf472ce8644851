#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "richwave/lagrangian.hpp"

namespace richwave {

/// Uniform grid of cell averages for the first-order upwind oracle.
struct FvGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t J = 0;
  double dx = 0.0;
  double cfl = 0.9;
  double time = 0.0;
  std::vector<State> cells;
  State left;   ///< pinned boundary state
  State right;  ///< pinned boundary state

  double center(std::size_t j) const { return x_min + (static_cast<double>(j) + 0.5) * dx; }

  /// Cell averages of a profile on [x_min, x_max] split into J cells.
  static FvGrid from_profile(const PiecewiseProfile& w0, double x_min, double x_max, std::size_t J,
                             double cfl = 0.9) {
    if (J < 3 || !(x_max > x_min)) throw std::invalid_argument("FvGrid: need J >= 3 and x_max > x_min");
    FvGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.J = J;
    g.dx = (x_max - x_min) / static_cast<double>(J);
    g.cfl = cfl;
    g.left = w0.left_tail();
    g.right = w0.right_tail();
    const std::size_t n = w0.components();
    using Vec = std::array<double, kMaxComponents>;
    for (std::size_t j = 0; j < J; ++j) {
      const double a = x_min + static_cast<double>(j) * g.dx;
      const double b = a + g.dx;
      auto f = [&](double x) {
        Vec v{};
        const State w = w0(x);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i];
        return v;
      };
      // piecewise linear: Simpson split at the breakpoints is exact
      const Vec avg = integrate(f, a, b, w0.breakpoints(), 1e-14);
      State s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = avg[i] / g.dx;
      g.cells.push_back(s);
    }
    g.cells.front() = g.left;
    g.cells.back() = g.right;
    return g;
  }
};

/// Largest |lambda_i| over the grid.
inline double max_speed(const FvGrid& g, const RichSystem& sys) {
  double m = 0.0;
  for (const State& w : g.cells)
    for (std::size_t i = 0; i < sys.size(); ++i) m = std::max(m, std::abs(sys.speed(i, w)));
  return m;
}

/// One explicit upwind step of d_t w_i + lambda_i(w) d_x w_i = 0 with
/// lambda_i at the cell centre. The step is CFL * dx / max|lambda|, cut to
/// max_dt. Boundary cells stay at the tail states.
inline FvGrid step(const FvGrid& g, const RichSystem& sys, double max_dt = std::numeric_limits<double>::infinity()) {
  const double vmax = max_speed(g, sys);
  double dt = vmax > 0.0 ? g.cfl * g.dx / vmax : max_dt;
  dt = std::min(dt, max_dt);
  if (!std::isfinite(dt)) dt = 0.0;
  FvGrid out = g;
  const double r = dt / g.dx;
  const std::size_t n = sys.size();
  for (std::size_t j = 1; j + 1 < g.J; ++j) {
    const State& w = g.cells[j];
    State& u = out.cells[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double lam = sys.speed(i, w);
      const double diff = lam > 0.0 ? w[i] - g.cells[j - 1][i] : g.cells[j + 1][i] - w[i];
      u[i] = w[i] - lam * r * diff;
      if (!std::isfinite(u[i])) {
        std::ostringstream os;
        os << "upwind step: non-finite value in cell " << j << " at t = " << g.time;
        throw BlowUpError(os.str());
      }
    }
  }
  out.cells.front() = g.left;
  out.cells.back() = g.right;
  out.time = g.time + dt;
  return out;
}

/// Steps until time T exactly.
inline FvGrid run_until(FvGrid g, const RichSystem& sys, double T) {
  while (g.time < T) {
    const double remaining = T - g.time;
    g = step(g, sys, remaining);
    if (T - g.time <= 1e-14 * std::max(1.0, T)) g.time = T;
  }
  return g;
}

/// dx * sum_j sum_i |u_j,i - w_i(t, x_j)| against the exact solution.
inline double l1_error(const FvGrid& g, const LagrangianSolution& sol) {
  const TimeSlice s = sol.slice(g.time);
  double e = 0.0;
  for (std::size_t j = 0; j < g.J; ++j) {
    const State w = s(g.center(j));
    for (std::size_t i = 0; i < w.size(); ++i) e += std::abs(g.cells[j][i] - w[i]);
  }
  return e * g.dx;
}

struct OracleRow {
  std::size_t J = 0;
  double dx = 0.0;
  double error = 0.0;
  double ratio = 0.0;  ///< previous error / this error (0 on the first row)
  double order = 0.0;  ///< log2 of ratio for halved dx
};

struct OracleTable {
  double T = 0.0;
  double x_min = 0.0, x_max = 0.0;
  std::vector<OracleRow> rows;
  /// Errors strictly decrease and every ratio lies in [lo, hi].
  bool first_order(double lo = 1.4, double hi = 2.6) const {
    for (std::size_t k = 1; k < rows.size(); ++k)
      if (!(rows[k].error < rows[k - 1].error) || rows[k].ratio < lo || rows[k].ratio > hi) return false;
    return true;
  }
};

/// Grid-refinement study of the upwind scheme against the exact solution at
/// time T. The domain covers everything the waves reach by T, plus a margin.
inline OracleTable run_and_compare(const LagrangianSolution& sol, double T, const std::vector<std::size_t>& grids,
                                   double margin = 1.0, double cfl = 0.9) {
  const auto [lo, hi] = sol.support(T);
  OracleTable tab;
  tab.T = T;
  tab.x_min = std::min(lo, sol.initial().front()) - margin;
  tab.x_max = std::max(hi, sol.initial().back()) + margin;
  for (std::size_t J : grids) {
    FvGrid g = FvGrid::from_profile(sol.initial(), tab.x_min, tab.x_max, J, cfl);
    g = run_until(std::move(g), sol.system(), T);
    OracleRow row;
    row.J = J;
    row.dx = g.dx;
    row.error = l1_error(g, sol);
    if (!tab.rows.empty()) {
      const OracleRow& prev = tab.rows.back();
      row.ratio = row.error > 0.0 ? prev.error / row.error : 0.0;
      row.order = row.ratio > 0.0 ? std::log(row.ratio) / std::log(prev.dx / row.dx) : 0.0;
    }
    tab.rows.push_back(row);
  }
  return tab;
}

}  // namespace richwave
