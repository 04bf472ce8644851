#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "richwave/lagrangian.hpp"
#include "richwave/monotone_map.hpp"
#include "richwave/panels.hpp"

namespace richwave {

enum class ShapeRoute { generic, bi_slow, bi_fast, abi_middle };

inline std::string to_string(ShapeRoute r) {
  switch (r) {
    case ShapeRoute::generic: return "generic";
    case ShapeRoute::bi_slow: return "bi-slow";
    case ShapeRoute::bi_fast: return "bi-fast";
    case ShapeRoute::abi_middle: return "abi-middle";
  }
  return "?";
}

enum class BiSide { slow, fast };

/// Limit deformation psi of the coordinate map for one family and its
/// inverse phi. The asymptotic profile of component i is w0_i(phi(x - lambda_bar t)).
struct ShapeFunction {
  std::size_t component = 0;
  ShapeRoute route = ShapeRoute::generic;
  MonotoneMap psi;
  std::function<double(double)> derivative;
  double floor = 1.0;  ///< min psi' over the sampled points
  double lambda_bar = 0.0;

  double operator()(double x) const { return psi(x); }
  double inverse(double y) const { return psi.invert(y); }
  double slope(double x) const { return derivative(x); }
};

/// Absolute accuracy of the nonlocal derivative integral; it only feeds the
/// slope floor and Newton steps.
inline constexpr double kDerivativeTol = 1e-9;

/// Reference index meaning "pick any admissible one".
inline constexpr std::size_t kAnyReference = static_cast<std::size_t>(-1);

namespace detail {

inline void require_equal_tails(const LagrangianSolution& sol, const char* who) {
  if (!sol.initial().equal_tails())
    throw HypothesisError(std::string(who) + ": needs equal tail states at -inf and +inf");
}

inline void require_component(const LagrangianSolution& sol, std::size_t i, const char* who) {
  if (i >= sol.system().size()) throw std::out_of_range(std::string(who) + ": component index");
}

// w_bar with the components of family p replaced by those of w.
inline State overlay(const RichSystem& sys, const State& w_bar, std::size_t p, const State& w) {
  State out = w_bar;
  const Family& f = sys.family(p);
  for (std::size_t j = f.first; j < f.first + f.count; ++j) out[j] = w[j];
  return out;
}

inline std::size_t reference_index(const RichSystem& sys, std::size_t i, std::size_t k) {
  if (k == kAnyReference) {
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (sys.family_of(j) != sys.family_of(i)) return j;
    throw std::invalid_argument("psi_i1: system has a single family");
  }
  if (k >= sys.size()) throw std::out_of_range("psi_i1: reference index");
  if (sys.family_of(k) == sys.family_of(i))
    throw std::invalid_argument("psi_i1: reference index must carry a different speed");
  return k;
}

inline double clamp_core(const PiecewiseProfile& p, double x) { return std::clamp(x, p.front(), p.back()); }

// tau* past which every moving Lagrangian argument has left the core
inline double exit_horizon(const LagrangianSolution& sol, double z) {
  const auto& zeta = sol.zeta();
  const double zmax = std::max(std::abs(zeta.front()), std::abs(zeta.back()));
  double tau = 0.0;
  for (const Family& f : sol.system().families())
    if (f.lagrangian_speed != 0.0) tau = std::max(tau, (std::abs(z) + zmax) / std::abs(f.lagrangian_speed));
  return tau;
}

// Monotone map x + int_{x0}^x (d(w0) - 1) anchored at psi(x0) = anchor,
// tabulated with adaptive panels on the profile core.
inline MonotoneMap integrated_map(const PiecewiseProfile& w0, const std::function<double(const State&)>& d,
                                  double anchor, double tol, double& min_slope, double& max_slope) {
  auto slope = [w0, d](double x) { return d(w0(x)); };
  const auto& bx = w0.breakpoints();
  min_slope = std::min(d(w0.left_tail()), d(w0.right_tail()));
  max_slope = std::max(d(w0.left_tail()), d(w0.right_tail()));
  if (bx.size() == 1) {
    return MonotoneMap(bx, {anchor}, d(w0.left_tail()), d(w0.right_tail()));
  }
  std::vector<double> xs{bx.front()};
  std::vector<double> cum{anchor};
  const double span = bx.back() - bx.front();
  for (std::size_t k = 0; k + 1 < bx.size(); ++k) append_panels(slope, bx[k], bx[k + 1], tol, span, xs, cum);
  for (std::size_t k = 0; k + 1 < bx.size(); ++k)
    for (int j = 1; j < 64; ++j) {
      const double v = slope(bx[k] + (bx[k + 1] - bx[k]) * j / 64.0);
      min_slope = std::min(min_slope, v);
      max_slope = std::max(max_slope, v);
    }
  for (double x : xs) {
    min_slope = std::min(min_slope, slope(x));
    max_slope = std::max(max_slope, slope(x));
  }
  if (!(min_slope > 0.0)) return MonotoneMap();
  auto value = [xs, cum, slope](double x) mutable {
    const std::size_t j = LagrangianCore::locate(xs, x);
    if (x == xs[j]) return cum[j];
    return cum[j] + panel_integral(slope, xs[j], x);
  };
  return MonotoneMap(xs, cum, d(w0.left_tail()), d(w0.right_tail()), value, slope, min_slope, max_slope);
}

inline void require_floor(double floor, std::size_t i, const char* who) {
  if (!(floor > 0.0)) {
    std::ostringstream os;
    os << who << ": shape function of component " << i << " is not increasing (min slope " << floor << ")";
    throw SmallnessError(os.str(), floor);
  }
}

}  // namespace detail

/// State seen by a family-i characteristic at late times: slower families
/// have passed to their right tails, faster ones still show the left tails.
inline State limit_state(const LagrangianSolution& sol, std::size_t i) {
  const auto& sys = sol.system();
  const std::size_t pi = sys.family_of(i);
  State w = sol.left_state();
  for (std::size_t p = 0; p < pi; ++p) w = detail::overlay(sys, w, p, sol.right_state());
  return w;
}

/// lambda_bar_i, the asymptotic speed of family i.
inline double limit_speed(const LagrangianSolution& sol, std::size_t i) {
  return eigenvalue(sol.system(), i, limit_state(sol, i));
}

/// int_{Z0(x)}^{+-inf} (1/N(w~0) - 1/N(w_bar)) for c_i >< 0, zero for c_i = 0.
inline double psi_i2(const LagrangianSolution& sol, std::size_t i, double x) {
  detail::require_component(sol, i, "psi_i2");
  detail::require_equal_tails(sol, "psi_i2");
  const auto& sys = sol.system();
  const double c = sys.lagrangian_speed(i);
  if (c == 0.0) return 0.0;
  const double inv_bar = 1.0 / sys.density(sol.left_state());
  auto g = [&sys, inv_bar](const State& w) { return 1.0 / sys.density(w) - inv_bar; };
  const auto& w0 = sol.initial();
  const double xc = detail::clamp_core(w0, x);
  return c > 0.0 ? sol.profile_integral(g, xc, w0.back()) : -sol.profile_integral(g, w0.front(), xc);
}

/// The perturbation part of psi_i. For c_i != 0 it is a sum of single-family
/// perturbation integrals plus the own-family term through the reference
/// index k; for c_i = 0 the time integral of lambda_i(w~(tau, Z0(x))) - lambda_bar_i
/// up to the exact exit horizon.
inline double psi_i1(const LagrangianSolution& sol, std::size_t i, double x, std::size_t k = kAnyReference) {
  detail::require_component(sol, i, "psi_i1");
  detail::require_equal_tails(sol, "psi_i1");
  const auto& sys = sol.system();
  const auto& w0 = sol.initial();
  const State& wb = sol.left_state();
  const double ci = sys.lagrangian_speed(i);
  const double lam_bar_i = eigenvalue(sys, i, wb);

  if (ci == 0.0) {
    const double z = sol.initial_lagrangian(x);
    const double tau_star = detail::exit_horizon(sol, z);
    auto f = [&](double tau) { return eigenvalue(sys, i, sol.tilde_w(tau, z)) - lam_bar_i; };
    return panel_integrate(f, 0.0, tau_star, sol.time_kinks(tau_star, z), 1e-2 * sol.tolerance());
  }

  const std::size_t kk = detail::reference_index(sys, i, k);
  const double ck = sys.lagrangian_speed(kk);
  const double lam_bar_k = eigenvalue(sys, kk, wb);
  const std::size_t pi = sys.family_of(i);
  double sum = 0.0;
  for (std::size_t q = 0; q < sys.family_count(); ++q) {
    const double cq = sys.family(q).lagrangian_speed;
    if (ci > 0.0 ? !(cq > ci) : !(cq < ci)) continue;
    auto g = [&](const State& w) { return eigenvalue(sys, i, detail::overlay(sys, wb, q, w)) - lam_bar_i; };
    const double weight = ci > 0.0 ? 1.0 / (cq - ci) : 1.0 / (ci - cq);
    sum += weight * sol.profile_integral(g, w0.front(), w0.back());
  }
  auto h = [&](const State& w) { return eigenvalue(sys, kk, detail::overlay(sys, wb, pi, w)) - lam_bar_k; };
  const double xc = detail::clamp_core(w0, x);
  const double own = ci > 0.0 ? sol.profile_integral(h, xc, w0.back()) : -sol.profile_integral(h, w0.front(), xc);
  return sum + own / (ci - ck);
}

/// psi_i(x) = x + psi_i1(x) + psi_i2(x), evaluated directly.
inline double psi_direct(const LagrangianSolution& sol, std::size_t i, double x, std::size_t k = kAnyReference) {
  return x + psi_i1(sol, i, x, k) + psi_i2(sol, i, x);
}

/// psi_i'(x). For c_i != 0 the local form 1 - N(w0)(f(w0) - f(w_bar)) with
/// f(w) = 1/N(w) + lambda_k(w_bar with family i from w)/(c_i - c_k); for
/// c_i = 0 the time integral of d lambda_i/dw_j . d/dx w~0_j(Z0(x) - c_j tau).
inline double psi_derivative(const LagrangianSolution& sol, std::size_t i, double x,
                             std::size_t k = kAnyReference) {
  detail::require_component(sol, i, "psi_derivative");
  detail::require_equal_tails(sol, "psi_derivative");
  const auto& sys = sol.system();
  const auto& w0 = sol.initial();
  const State& wb = sol.left_state();
  const double ci = sys.lagrangian_speed(i);
  const State wx = w0(x);
  const double Nx = sys.density(wx);

  if (ci != 0.0) {
    const std::size_t kk = detail::reference_index(sys, i, k);
    const double ck = sys.lagrangian_speed(kk);
    const std::size_t pi = sys.family_of(i);
    auto f = [&](const State& w) {
      return 1.0 / sys.density(w) + eigenvalue(sys, kk, detail::overlay(sys, wb, pi, w)) / (ci - ck);
    };
    return 1.0 - Nx * (f(wx) - f(wb));
  }

  const double z = sol.initial_lagrangian(x);
  const double tau_star = detail::exit_horizon(sol, z);
  const std::size_t n = sys.size();
  auto integrand = [&](double tau) {
    const State w = sol.tilde_w(tau, z);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double cj = sys.lagrangian_speed(j);
      if (cj == 0.0) continue;
      const double xi = z - cj * tau;
      if (xi <= sol.zeta().front() || xi >= sol.zeta().back()) continue;
      const double xj = sol.initial_position(xi);
      const double dw = w0.slope(j, xj) / sys.density(w0(xj));
      if (dw == 0.0) continue;
      // fourth-order central difference of lambda_i in w_j
      const double h = 1e-3 * (1.0 + std::abs(w[j]));
      auto at = [&](double off) {
        State v = w;
        v[j] += off;
        return sys.speed(i, v);
      };
      s += (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h) * dw;
    }
    return s;
  };
  return 1.0 + Nx * panel_integrate(integrand, 0.0, tau_star, sol.time_kinks(tau_star, z), kDerivativeTol);
}

/// Generic shape function of component i built from psi_i1 + psi_i2.
inline ShapeFunction build_shape_generic(const LagrangianSolution& sol, std::size_t i,
                                         std::size_t k = kAnyReference) {
  detail::require_component(sol, i, "build_shape_generic");
  detail::require_equal_tails(sol, "build_shape_generic");
  const auto& sys = sol.system();
  const auto& w0 = sol.initial();
  const double ci = sys.lagrangian_speed(i);

  ShapeFunction s;
  s.component = i;
  s.route = ShapeRoute::generic;
  s.lambda_bar = limit_speed(sol, i);

  if (ci != 0.0) {
    const std::size_t kk = detail::reference_index(sys, i, k);
    const double ck = sys.lagrangian_speed(kk);
    const std::size_t pi = sys.family_of(i);
    const State wb = sol.left_state();
    auto f = [sys, wb, kk, pi, ci, ck](const State& w) {
      return 1.0 / sys.density(w) + eigenvalue(sys, kk, detail::overlay(sys, wb, pi, w)) / (ci - ck);
    };
    const double fb = f(wb);
    std::function<double(const State&)> d = [sys, f, fb](const State& w) {
      return 1.0 - sys.density(w) * (f(w) - fb);
    };
    double lo = 0.0, hi = 0.0;
    const double anchor = psi_direct(sol, i, w0.front(), kk);
    s.psi = detail::integrated_map(w0, d, anchor, 1e-2 * sol.tolerance(), lo, hi);
    s.floor = lo;
    detail::require_floor(lo, i, "build_shape_generic");
    s.derivative = [w0, d](double x) { return d(w0(x)); };
    return s;
  }

  // c_i = 0: psi is x + psi_i1 with a nonlocal derivative. Outside the
  // window where two same-sign families can overlap on the i-characteristic
  // psi - x is constant.
  const auto& zeta = sol.zeta();
  double z_lo = zeta.front(), z_hi = zeta.back();
  const auto& fams = sys.families();
  for (std::size_t p = 0; p < fams.size(); ++p)
    for (std::size_t q = p + 1; q < fams.size(); ++q) {
      const double cp = fams[p].lagrangian_speed, cq = fams[q].lagrangian_speed;
      if (cp > 0.0) z_hi = std::max(z_hi, (cq * zeta.back() - cp * zeta.front()) / (cq - cp));
      if (cq < 0.0) z_lo = std::min(z_lo, (-cp * zeta.front() + cq * zeta.back()) / (cq - cp));
    }
  const double x_lo = sol.initial_position(z_lo);
  const double x_hi = sol.initial_position(z_hi);

  std::vector<double> xs{x_lo};
  for (double b : w0.breakpoints())
    if (b > x_lo && b < x_hi) xs.push_back(b);
  xs.push_back(x_hi);
  // dyadic refinement of every segment
  std::vector<double> knots;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j)
    for (int m = 0; m < 8; ++m) knots.push_back(xs[j] + (xs[j + 1] - xs[j]) * m / 8.0);
  knots.push_back(xs.back());
  knots = detail::sorted_unique(std::move(knots));

  double floor = 1.0, top = 1.0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j)
    for (int m = 0; m < 4; ++m) {
      const double v = psi_derivative(sol, i, knots[j] + (knots[j + 1] - knots[j]) * (m + 0.5) / 4.0);
      floor = std::min(floor, v);
      top = std::max(top, v);
    }
  s.floor = floor;
  detail::require_floor(floor, i, "build_shape_generic");
  std::vector<double> ys;
  for (double x : knots) ys.push_back(psi_direct(sol, i, x));
  for (std::size_t j = 1; j < ys.size(); ++j)
    if (!(ys[j] > ys[j - 1])) detail::require_floor(0.0, i, "build_shape_generic");
  auto value = [sol, i](double x) { return psi_direct(sol, i, x); };
  auto deriv = [sol, i](double x) { return psi_derivative(sol, i, x); };
  s.psi = MonotoneMap(knots, ys, 1.0, 1.0, value, deriv, floor, top);
  s.derivative = [x_lo, x_hi, deriv](double x) { return (x <= x_lo || x >= x_hi) ? 1.0 : deriv(x); };
  return s;
}

namespace detail {

struct BiData {
  std::size_t mu, lambda;
  double a;
  double lam_minus, mu_plus;
};

inline BiData bi_data(const LagrangianSolution& sol, const char* who) {
  const auto& sys = sol.system();
  if (sys.kind() != ModelKind::born_infeld && sys.kind() != ModelKind::augmented_born_infeld)
    throw UnsupportedModelError(std::string(who) + ": " + sys.name() + " is not a Born-Infeld model");
  const auto slots = born_infeld_slots(sys);
  const auto& w0 = sol.initial();
  if (!(w0.min_component(slots.mu) > w0.max_component(slots.lambda))) {
    std::ostringstream os;
    os << who << ": gap condition inf mu0 > sup lambda0 fails (" << w0.min_component(slots.mu)
       << " <= " << w0.max_component(slots.lambda) << ")";
    throw OrderingError(os.str());
  }
  return {slots.mu, slots.lambda, sys.parameter(), sol.left_state()[slots.lambda], sol.right_state()[slots.mu]};
}

inline ShapeFunction bi_like_shape(const LagrangianSolution& sol, std::size_t component, ShapeRoute route,
                                   double lambda_bar, double anchor, std::function<double(const State&)> d) {
  ShapeFunction s;
  s.component = component;
  s.route = route;
  s.lambda_bar = lambda_bar;
  double lo = 0.0, hi = 0.0;
  s.psi = integrated_map(sol.initial(), d, anchor, 1e-2 * sol.tolerance(), lo, hi);
  s.floor = lo;
  require_floor(lo, component, to_string(route).c_str());
  s.derivative = [w0 = sol.initial(), d](double x) { return d(w0(x)); };
  return s;
}

}  // namespace detail

/// Born-Infeld shapes: slow psi-(x) = x + (H(Z0(x)) - H-)/2a for mu,
/// fast psi+(x) = x - (I(Z0(x)) - I+)/2a for lambda. Only one-sided limits
/// are needed.
inline ShapeFunction bi_shape(const LagrangianSolution& sol, BiSide side) {
  const auto bd = detail::bi_data(sol, "bi_shape");
  const auto& w0 = sol.initial();
  if (side == BiSide::slow) {
    auto d = [bd](const State& w) { return (w[bd.mu] - bd.lam_minus) / (w[bd.mu] - w[bd.lambda]); };
    return detail::bi_like_shape(sol, bd.mu, ShapeRoute::bi_slow, bd.lam_minus, w0.front(), d);
  }
  auto d = [bd](const State& w) { return (bd.mu_plus - w[bd.lambda]) / (w[bd.mu] - w[bd.lambda]); };
  auto g = [bd](const State& w) { return w[bd.mu] - bd.mu_plus; };
  const double anchor = w0.front() + sol.profile_integral(g, w0.front(), w0.back()) / (2.0 * bd.a);
  return detail::bi_like_shape(sol, bd.lambda, ShapeRoute::bi_fast, bd.mu_plus, anchor, d);
}

/// Middle-family shape of the augmented model:
/// omega(x) = x + ((H(Z0(x)) - H-) - (I(Z0(x)) - I+))/2a.
inline ShapeFunction abi_shape(const LagrangianSolution& sol) {
  if (sol.system().kind() != ModelKind::augmented_born_infeld)
    throw UnsupportedModelError("abi_shape: " + sol.system().name() + " is not the augmented Born-Infeld model");
  const auto bd = detail::bi_data(sol, "abi_shape");
  const auto& w0 = sol.initial();
  auto d = [bd](const State& w) { return (bd.mu_plus - bd.lam_minus) / (w[bd.mu] - w[bd.lambda]); };
  auto g = [bd](const State& w) { return w[bd.mu] - bd.mu_plus; };
  const double anchor = w0.front() + sol.profile_integral(g, w0.front(), w0.back()) / (2.0 * bd.a);
  const auto& fam = sol.system().family(1);
  return detail::bi_like_shape(sol, fam.first, ShapeRoute::abi_middle, 0.5 * (bd.lam_minus + bd.mu_plus), anchor, d);
}

/// X(t, Z0(x) + c_i t) - lambda_bar_i t, which tends to psi_i(x).
inline double limit_shift(const LagrangianSolution& sol, std::size_t i, double x, double t) {
  detail::require_component(sol, i, "limit_shift");
  const double z = sol.initial_lagrangian(x) + sol.system().lagrangian_speed(i) * t;
  return sol.slice(t).X(z) - limit_speed(sol, i) * t;
}

struct DecayReport {
  std::vector<std::size_t> components;   ///< components carried by the shape's family
  std::vector<double> times;
  std::vector<std::vector<double>> distances;  ///< [time][component]
  std::vector<double> totals;                   ///< sum over components per time

  bool decreased() const { return totals.size() >= 2 && totals.back() < totals.front(); }
  /// d(t_last) / d(t_first); 0 when both vanish.
  double ratio() const {
    if (totals.empty() || totals.front() == 0.0) return 0.0;
    return totals.back() / totals.front();
  }
};

/// d_i(t) = || w_i(t, .) - w0_i(phi(. - lambda_bar t)) ||_L1 for every
/// component of the shape's family.
inline DecayReport decay_curve(const LagrangianSolution& sol, const ShapeFunction& shape,
                               const std::vector<double>& times) {
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("decay_curve: times must increase");
  const auto& sys = sol.system();
  const auto& w0 = sol.initial();
  const Family& fam = sys.family(sys.family_of(shape.component));
  DecayReport rep;
  for (std::size_t i = fam.first; i < fam.first + fam.count; ++i) rep.components.push_back(i);
  rep.times = times;

  for (double t : times) {
    const TimeSlice s = sol.slice(t);
    std::vector<double> kinks = s.kinks();
    const double shift = shape.lambda_bar * t;
    for (double b : w0.breakpoints()) kinks.push_back(shift + shape(b));
    kinks = detail::sorted_unique(std::move(kinks));
    const double lo = kinks.front(), hi = kinks.back();
    std::vector<double> row;
    double total = 0.0;
    for (std::size_t i : rep.components) {
      auto f = [&](double x) { return std::abs(s.component(i, x) - w0.component(i, shape.inverse(x - shift))); };
      const double d = integrate(f, lo, hi, kinks, sol.tolerance());
      row.push_back(d);
      total += d;
    }
    rep.distances.push_back(row);
    rep.totals.push_back(total);
  }
  return rep;
}

}  // namespace richwave
