#pragma once

// Scenario presets mirroring scenarios/*.json, plus independent oracles
// shared by the unit tests and the acceptance binary.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "richwave/richwave.hpp"

namespace rwtest {

using namespace richwave;

inline PiecewiseProfile constant_profile() { return PiecewiseProfile::constant(State{1.0, -1.0}, 1.0); }

/// lambda == -1 with a mu ramp peaking at the origin.
inline PiecewiseProfile simple_wave_profile() {
  return PiecewiseProfile({-1.0, 0.0, 1.0}, {State{1.0, -1.0}, State{2.0, -1.0}, State{1.0, -1.0}});
}

/// N == 1 tails with a deep dip of mu - lambda in the middle, so the two
/// families need t_L ~ 6.8 to separate.
inline PiecewiseProfile two_ramp_profile() {
  return PiecewiseProfile({-1.0, -0.75, -0.25, 0.25, 0.75, 1.0},
                          {State{1.0, -1.0}, State{1.0, -1.0}, State{0.1, 0.0}, State{0.1, 0.0}, State{1.0, -1.0},
                           State{1.0, -1.0}});
}

/// Hat in mu on the flat right shoulder of the two-ramp profile.
inline PiecewiseProfile stability_perturbation() {
  return PiecewiseProfile({0.75, 0.875, 1.0}, {State{0.0, 0.0}, State{1.0, 0.0}, State{0.0, 0.0}});
}

/// (mu, q, lambda) bump for the augmented model with equal tails.
inline PiecewiseProfile abi_middle_profile() {
  return PiecewiseProfile({-1.0, -0.5, 0.0, 0.5, 1.0},
                          {State{1.0, 0.0, -1.0}, State{1.3, 0.5, -1.2}, State{1.5, 1.0, -0.8},
                           State{1.2, 0.3, -1.0}, State{1.0, 0.0, -1.0}});
}

struct Scenario {
  const char* name;
  RichSystem sys;
  PiecewiseProfile w0;
};

inline std::vector<Scenario> catalog() {
  return {{"constant", model_bi(1.0), constant_profile()},
          {"bi-simple-wave", model_bi(1.0), simple_wave_profile()},
          {"bi-two-ramp", model_bi(1.0), two_ramp_profile()},
          {"abi-middle", model_abi(1.0), abi_middle_profile()}};
}

/// Midpoint Riemann sum with n cells.
inline double riemann(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.0;
  for (long k = 0; k < n; ++k) s += f(a + (static_cast<double>(k) + 0.5) * h);
  return s * h;
}

/// Crossing time of the family-p characteristic from x = +L and the
/// family-q characteristic from x = -L, by integrating dX/dt = lambda(w(t, X))
/// in Eulerian coordinates with step-doubling RK4 and bisecting the last step.
inline double rk4_crossing(const LagrangianSolution& sol, std::size_t p, std::size_t q, double L,
                           double tol = 1e-11) {
  const auto& sys = sol.system();
  const std::size_t ip = sys.family(p).first, iq = sys.family(q).first;
  using Y = std::pair<double, double>;
  auto rhs = [&](double t, Y y) {
    const TimeSlice s = sol.slice(t);
    return Y{sys.speed(ip, s(y.first)), sys.speed(iq, s(y.second))};
  };
  auto rk4 = [&](double t, Y y, double h) {
    const Y k1 = rhs(t, y);
    const Y k2 = rhs(t + h / 2, {y.first + h / 2 * k1.first, y.second + h / 2 * k1.second});
    const Y k3 = rhs(t + h / 2, {y.first + h / 2 * k2.first, y.second + h / 2 * k2.second});
    const Y k4 = rhs(t + h, {y.first + h * k3.first, y.second + h * k3.second});
    return Y{y.first + h / 6 * (k1.first + 2 * k2.first + 2 * k3.first + k4.first),
             y.second + h / 6 * (k1.second + 2 * k2.second + 2 * k3.second + k4.second)};
  };
  double t = 0.0, h = 0.05;
  Y y{L, -L};
  for (int guard = 0; guard < 200000; ++guard) {
    const Y full = rk4(t, y, h);
    const Y half = rk4(t + h / 2, rk4(t, y, h / 2), h / 2);
    const double err = std::max(std::abs(full.first - half.first), std::abs(full.second - half.second));
    if (err > tol && h > 1e-9) {
      h /= 2;
      continue;
    }
    if (half.first - half.second <= 0.0) {
      // the gap closes inside [t, t + h]
      double lo = 0.0, hi = h;
      for (int k = 0; k < 60; ++k) {
        const double m = 0.5 * (lo + hi);
        const Y ym = rk4(t + m / 2, rk4(t, y, m / 2), m / 2);
        (ym.first - ym.second > 0.0 ? lo : hi) = m;
      }
      return t + 0.5 * (lo + hi);
    }
    t += h;
    y = half;
    if (err < tol / 32) h = std::min(2 * h, 0.2);
  }
  return -1.0;
}

}  // namespace rwtest
