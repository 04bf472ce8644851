#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "richwave/monotone_map.hpp"
#include "richwave/panels.hpp"
#include "richwave/profile.hpp"
#include "richwave/quadrature.hpp"
#include "richwave/system.hpp"

namespace richwave {

namespace detail {

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Shared immutable state of a solution. Lives on the heap so that the
// closures inside z0 (which capture `this`) stay valid under copies.
struct LagrangianCore {
  RichSystem sys;
  PiecewiseProfile w0;
  double tol;
  std::vector<double> node_x;  // panel ends (breakpoints included)
  std::vector<double> node_z;  // Z0 at node_x
  std::vector<double> zeta;    // Z0 at the breakpoints
  double n_min = 0.0, n_max = 0.0;
  double n_left = 0.0, n_right = 0.0;
  MonotoneMap z0;

  LagrangianCore(const LagrangianCore&) = delete;
  LagrangianCore& operator=(const LagrangianCore&) = delete;

  LagrangianCore(RichSystem s, PiecewiseProfile p, double quad_tol)
      : sys(std::move(s)), w0(std::move(p)), tol(quad_tol) {
    require_admissible(sys, w0);
    const auto& bx = w0.breakpoints();
    n_left = sys.density(w0.left_tail());
    n_right = sys.density(w0.right_tail());
    n_min = std::min(n_left, n_right);
    n_max = std::max(n_left, n_right);

    // panel ends: breakpoints, plus the origin so that Z0(0) = 0 is a node
    std::vector<double> ends = bx;
    if (0.0 > bx.front() && 0.0 < bx.back()) ends.push_back(0.0);
    ends = sorted_unique(std::move(ends));

    auto density = [this](double x) { return sys.density(w0(x)); };
    const double span = std::max(bx.back() - bx.front(), std::numeric_limits<double>::min());
    std::vector<double> cum{0.0};
    node_x.push_back(ends.front());
    for (std::size_t k = 0; k + 1 < ends.size(); ++k)
      append_panels(density, ends[k], ends[k + 1], 1e-2 * tol, span, node_x, cum);
    for (std::size_t j = 0; j < node_x.size(); ++j) {
      const double n = density(node_x[j]);
      n_min = std::min(n_min, n);
      n_max = std::max(n_max, n);
    }

    double origin;
    if (0.0 <= bx.front()) {
      origin = -n_left * bx.front();
    } else if (0.0 >= bx.back()) {
      origin = cum.back() + n_right * (0.0 - bx.back());
    } else {
      origin = cum[static_cast<std::size_t>(std::find(node_x.begin(), node_x.end(), 0.0) - node_x.begin())];
    }
    node_z.resize(cum.size());
    for (std::size_t j = 0; j < cum.size(); ++j) node_z[j] = cum[j] - origin;
    for (double b : bx)
      zeta.push_back(node_z[static_cast<std::size_t>(std::find(node_x.begin(), node_x.end(), b) - node_x.begin())]);

    auto value = [this, density](double x) mutable {
      const std::size_t j = locate(node_x, x);
      if (x == node_x[j]) return node_z[j];
      return node_z[j] + panel_integral(density, node_x[j], x);
    };
    auto slope = [density](double x) { return density(x); };
    if (node_x.size() == 1) {
      z0 = MonotoneMap(node_x, node_z, n_left, n_right, {}, {}, n_min, n_max);
    } else {
      z0 = MonotoneMap(node_x, node_z, n_left, n_right, value, slope, n_min, n_max);
    }
  }

  static std::size_t locate(const std::vector<double>& v, double s) {
    auto it = std::upper_bound(v.begin(), v.end(), s);
    std::size_t k = static_cast<std::size_t>(it - v.begin());
    k = k == 0 ? 0 : k - 1;
    return v.size() < 2 ? 0 : std::min(k, v.size() - 2);
  }

  double X0(double z) const { return z0.invert(z); }

  // w0(X0(z)) for the components of family p only, written into out.
  void fill_family(std::size_t p, double z, State& out) const {
    const Family& f = sys.family(p);
    if (z <= zeta.front()) {
      for (std::size_t i = f.first; i < f.first + f.count; ++i) out[i] = w0.left_tail()[i];
      return;
    }
    if (z >= zeta.back()) {
      for (std::size_t i = f.first; i < f.first + f.count; ++i) out[i] = w0.right_tail()[i];
      return;
    }
    const double x = X0(z);
    for (std::size_t i = f.first; i < f.first + f.count; ++i) out[i] = w0.component(i, x);
  }

  State tilde(double t, double z) const {
    State out(sys.size());
    for (std::size_t p = 0; p < sys.family_count(); ++p)
      fill_family(p, z - sys.family(p).lagrangian_speed * t, out);
    return out;
  }

  double c_min() const { return sys.families().front().lagrangian_speed; }
  double c_max() const { return sys.families().back().lagrangian_speed; }
};

}  // namespace detail

class LagrangianSolution;

/// X(t, .) and its inverse Z(t, .) at one fixed time, tabulated at the
/// Lagrangian kinks z = zeta_k + c_p t from the exact left anchor.
class TimeSlice {
 public:
  double time() const noexcept { return t_; }
  /// z -> X(t, z) as a monotone map (t > 0 only; at t = 0 use the Z0 map).
  const MonotoneMap& map() const noexcept { return map_; }

  /// Eulerian position X(t, z).
  double X(double z) const { return t_ == 0.0 ? core_->X0(z) : map_(z); }
  /// Lagrangian coordinate Z(t, x).
  double Z(double x) const { return t_ == 0.0 ? core_->z0(x) : map_.invert(x); }
  State tilde(double z) const { return core_->tilde(t_, z); }
  /// Exact solution w(t, x).
  State operator()(double x) const {
    if (t_ == 0.0) return core_->w0(x);
    return core_->tilde(t_, Z(x));
  }
  double component(std::size_t i, double x) const {
    if (t_ == 0.0) return core_->w0.component(i, x);
    const double z = Z(x) - core_->sys.lagrangian_speed(i) * t_;
    if (z <= core_->zeta.front()) return core_->w0.left_tail()[i];
    if (z >= core_->zeta.back()) return core_->w0.right_tail()[i];
    return core_->w0.component(i, core_->X0(z));
  }

  /// Eulerian positions of the characteristics issued from breakpoints.
  const std::vector<double>& kinks() const noexcept { return kink_x_; }
  /// Interval outside which the solution equals the tail states.
  double support_lo() const noexcept { return kink_x_.front(); }
  double support_hi() const noexcept { return kink_x_.back(); }

 private:
  friend class LagrangianSolution;
  std::shared_ptr<const detail::LagrangianCore> core_;
  double t_ = 0.0;
  MonotoneMap map_;
  std::vector<double> kink_x_;
};

/// Exact entropy solution of a rich system with common density.
///
///   Z0(x) = int_0^x N(w0),  X0 = Z0^{-1},
///   w~_i(t, z) = w0_i(X0(z - c_i t)),
///   X(t, z) = X0(z) + int_0^t (M/N)(w~(tau, z)) dtau,
///   w_i(t, x) = w~_i(t, Z(t, x)),  Z(t, .) = X(t, .)^{-1}.
class LagrangianSolution {
 public:
  LagrangianSolution(RichSystem sys, PiecewiseProfile w0, double tol = kDefaultQuadratureTol)
      : core_(std::make_shared<detail::LagrangianCore>(std::move(sys), std::move(w0), tol)) {}

  const RichSystem& system() const noexcept { return core_->sys; }
  const PiecewiseProfile& initial() const noexcept { return core_->w0; }
  double tolerance() const noexcept { return core_->tol; }
  const MonotoneMap& z0_map() const noexcept { return core_->z0; }
  /// Lagrangian images zeta_k = Z0(x_k) of the profile breakpoints.
  const std::vector<double>& zeta() const noexcept { return core_->zeta; }
  double density_min() const noexcept { return core_->n_min; }
  double density_max() const noexcept { return core_->n_max; }
  const State& left_state() const noexcept { return core_->w0.left_tail(); }
  const State& right_state() const noexcept { return core_->w0.right_tail(); }

  double initial_lagrangian(double x) const { return core_->z0(x); }
  double initial_position(double z) const { return core_->X0(z); }

  /// w~(t, z); every component is a pure translate of w~0 in z.
  State tilde_w(double t, double z) const {
    require_time(t);
    return core_->tilde(t, z);
  }

  /// Breakpoint crossing times tau = (z - zeta_k)/c_p inside (0, t).
  std::vector<double> time_kinks(double t, double z) const {
    std::vector<double> out;
    for (const Family& f : system().families()) {
      if (f.lagrangian_speed == 0.0) continue;
      for (double zk : zeta()) {
        const double tau = (z - zk) / f.lagrangian_speed;
        if (tau > 0.0 && tau < t) out.push_back(tau);
      }
    }
    return detail::sorted_unique(std::move(out));
  }

  /// X(t, z) by time quadrature of the drift M/N along z = const.
  double X(double t, double z) const {
    require_time(t);
    const double x0 = core_->X0(z);
    if (t == 0.0) return x0;
    const auto kinks = time_kinks(t, z);
    const auto& c = *core_;
    auto drift = [&c, z](double tau) { return c.sys.drift(c.tilde(tau, z)); };
    return x0 + integrate(drift, 0.0, t, kinks, tolerance());
  }

  /// Born-Infeld closed form
  ///   X(t, z) = (1/2a) int_0^{z+at} mu~0 - (1/2a) int_0^{z-at} lambda~0.
  double x_bi_closed_form(double t, double z) const {
    require_time(t);
    if (system().kind() != ModelKind::born_infeld)
      throw UnsupportedModelError("x_bi_closed_form: " + system().name() + " is not the Born-Infeld model");
    const double a = system().parameter();
    const auto slots = born_infeld_slots(system());
    auto mu = [&](const State& w) { return w[slots.mu]; };
    auto lam = [&](const State& w) { return w[slots.lambda]; };
    return (lagrangian_integral(mu, 0.0, z + a * t) - lagrangian_integral(lam, 0.0, z - a * t)) / (2.0 * a);
  }

  /// int_{z1}^{z2} g(w~0(xi)) dxi, computed in Eulerian form
  /// int_{X0(z1)}^{X0(z2)} g(w0(x)) N(w0(x)) dx with kinks at the breakpoints.
  template <class G>
  double lagrangian_integral(G&& g, double z1, double z2) const {
    return profile_integral(std::forward<G>(g), core_->X0(z1), core_->X0(z2));
  }

  /// int_{x1}^{x2} g(w0(x)) N(w0(x)) dx.
  template <class G>
  double profile_integral(G&& g, double x1, double x2) const {
    const auto& c = *core_;
    auto f = [&](double x) {
      const State w = c.w0(x);
      return g(w) * c.sys.density(w);
    };
    return integrate(f, x1, x2, c.w0.breakpoints(), tolerance());
  }

  TimeSlice slice(double t) const {
    require_time(t);
    TimeSlice s;
    s.core_ = core_;
    s.t_ = t;
    const auto& c = *core_;
    if (t == 0.0) {
      s.kink_x_ = c.w0.breakpoints();
      return s;
    }

    const double za = c.zeta.front() + std::min(0.0, c.c_min()) * t;
    const double zb = c.zeta.back() + std::max(0.0, c.c_max()) * t;
    std::vector<double> kinks{za, zb};
    for (const Family& f : c.sys.families())
      for (double zk : c.zeta) {
        const double z = zk + f.lagrangian_speed * t;
        if (z > za && z < zb) kinks.push_back(z);
      }
    kinks = detail::sorted_unique(std::move(kinks));

    // X(t, za) is known exactly: everything left of za still sits in the left tail
    const State& wl = c.w0.left_tail();
    const double xa = c.w0.front() + t * (c.sys.flux(wl) + std::min(0.0, c.c_min())) / c.n_left;
    auto inv_density = [core = core_, t](double z) { return 1.0 / core->sys.density(core->tilde(t, z)); };
    const double span = std::max(zb - za, std::numeric_limits<double>::min());
    std::vector<double> zs{kinks.front()};
    std::vector<double> xs{xa};
    for (std::size_t j = 0; j + 1 < kinks.size(); ++j)
      append_panels(inv_density, kinks[j], kinks[j + 1], 1e-2 * c.tol, span, zs, xs);

    if (zs.size() == 1) {
      s.map_ = MonotoneMap(zs, xs, 1.0 / c.n_left, 1.0 / c.n_right);
    } else {
      auto value = [zs, xs, inv_density](double z) mutable {
        const std::size_t j = detail::LagrangianCore::locate(zs, z);
        if (z == zs[j]) return xs[j];
        return xs[j] + panel_integral(inv_density, zs[j], z);
      };
      s.map_ = MonotoneMap(zs, xs, 1.0 / c.n_left, 1.0 / c.n_right, value, inv_density, 1.0 / c.n_max,
                           1.0 / c.n_min);
    }
    for (double z : kinks) s.kink_x_.push_back(s.map_(z));
    return s;
  }

  /// Z(t, x) = X(t, .)^{-1}(x).
  double Z(double t, double x) const {
    if (t == 0.0) return initial_lagrangian(x);
    return slice(t).Z(x);
  }

  /// w(t, x); at t = 0 the initial profile itself.
  State evaluate(double t, double x) const {
    require_time(t);
    if (t == 0.0) return core_->w0(x);
    return slice(t)(x);
  }

  /// Eulerian interval outside which w(t, .) equals the tail states.
  std::pair<double, double> support(double t) const {
    const auto& c = *core_;
    const double lo = c.w0.front() + t * (c.sys.flux(left_state()) + std::min(0.0, c.c_min())) / c.n_left;
    const double hi = c.w0.back() + t * (c.sys.flux(right_state()) + std::max(0.0, c.c_max())) / c.n_right;
    return {lo, hi};
  }

  /// Largest |lambda_i| over the states the solution can take.
  double max_abs_speed() const {
    const auto& c = *core_;
    double m = 0.0;
    const auto& bx = c.w0.breakpoints();
    std::vector<State> probes;
    for (std::size_t k = 0; k < bx.size(); ++k) {
      probes.push_back(c.w0.values()[k]);
      if (k + 1 < bx.size()) probes.push_back(c.w0(0.5 * (bx[k] + bx[k + 1])));
    }
    // mixed states: each family may sit at any of its values independently
    for (const State& base : probes)
      for (const State& other : probes)
        for (std::size_t p = 0; p < c.sys.family_count(); ++p) {
          State w = base;
          const Family& f = c.sys.family(p);
          for (std::size_t i = f.first; i < f.first + f.count; ++i) w[i] = other[i];
          if (!c.sys.admissible(w)) continue;
          for (std::size_t i = 0; i < c.sys.size(); ++i) m = std::max(m, std::abs(c.sys.speed(i, w)));
        }
    return m;
  }

  /// Residuals of the weak conservation law for N and the entropy pairs
  /// (N w_i, (M + c_i) w_i) on the box [t1, t2] x [A, B]. Entry 0 is the
  /// conservation residual, entry 1 + i the i-th entropy residual.
  std::vector<double> weak_residuals(double t1, double t2, double A, double B) const {
    if (!(t2 > t1) || !(t1 >= 0.0) || !(B > A))
      throw std::invalid_argument("weak_residuals: need t2 > t1 >= 0 and B > A");
    const auto& c = *core_;
    const std::size_t n = c.sys.size();
    using Vec = std::array<double, kMaxComponents + 1>;

    auto densities = [&c, n](const State& w) {
      Vec v{};
      const double N = c.sys.density(w);
      v[0] = N;
      for (std::size_t i = 0; i < n; ++i) v[1 + i] = N * w[i];
      return v;
    };
    auto fluxes = [&c, n](const State& w) {
      Vec v{};
      const double M = c.sys.flux(w);
      v[0] = M;
      for (std::size_t i = 0; i < n; ++i) v[1 + i] = (M + c.sys.lagrangian_speed(i)) * w[i];
      return v;
    };
    auto mass = [&](double t) {
      const TimeSlice s = slice(t);
      auto f = [&](double x) { return densities(s(x)); };
      return integrate(f, A, B, s.kinks(), tolerance());
    };
    auto flux_jump = [&](double tau) {
      const TimeSlice s = slice(tau);
      const Vec fb = fluxes(s(B));
      const Vec fa = fluxes(s(A));
      Vec d{};
      for (std::size_t k = 0; k <= n; ++k) d[k] = fb[k] - fa[k];
      return d;
    };
    const Vec m1 = mass(t1);
    const Vec m2 = mass(t2);
    std::vector<double> tk = edge_crossings(t1, t2, A);
    const std::vector<double> tb = edge_crossings(t1, t2, B);
    tk.insert(tk.end(), tb.begin(), tb.end());
    std::sort(tk.begin(), tk.end());
    const Vec fl = integrate(flux_jump, t1, t2, tk, tolerance());
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = std::abs(m2[k] - m1[k] + fl[k]);
    return out;
  }

  double conservation_residual(double t1, double t2, double A, double B) const {
    return weak_residuals(t1, t2, A, B)[0];
  }

  double entropy_residual(std::size_t i, double t1, double t2, double A, double B) const {
    if (i >= system().size()) throw std::out_of_range("entropy_residual: component index");
    return weak_residuals(t1, t2, A, B)[1 + i];
  }

 private:
  // Times in (t1, t2) at which a breakpoint zeta_k + c_j t of the Lagrangian
  // data passes the fixed Eulerian point x, located by sampling and bisection.
  std::vector<double> edge_crossings(double t1, double t2, double x) const {
    const auto& zeta = core_->zeta;
    const auto& fams = core_->sys.families();
    constexpr int samples = 96;
    std::vector<double> ts(samples + 1), zs(samples + 1);
    for (int m = 0; m <= samples; ++m) {
      ts[m] = t1 + (t2 - t1) * m / samples;
      zs[m] = Z(ts[m], x);
    }
    std::vector<double> out;
    for (const Family& f : fams)
      for (double zk : zeta) {
        auto g = [&](double t, double z) { return z - f.lagrangian_speed * t - zk; };
        for (int m = 0; m < samples; ++m) {
          const double ga = g(ts[m], zs[m]), gb = g(ts[m + 1], zs[m + 1]);
          if ((ga < 0.0) == (gb < 0.0)) continue;
          double lo = ts[m], hi = ts[m + 1];
          for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((g(mid, Z(mid, x)) < 0.0) == (ga < 0.0) ? lo : hi) = mid;
          }
          out.push_back(0.5 * (lo + hi));
        }
      }
    return out;
  }

  static void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and >= 0");
  }

  std::shared_ptr<const detail::LagrangianCore> core_;
};

}  // namespace richwave
