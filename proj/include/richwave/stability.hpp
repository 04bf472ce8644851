#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "richwave/lagrangian.hpp"

namespace richwave {

struct PairDistance {
  double total = 0.0;
  std::vector<double> components;
};

/// Componentwise L1 distance between two exact solutions at time t; the
/// total is the sum over components. Differing tails give +inf.
inline PairDistance pair_distance(const LagrangianSolution& a, const LagrangianSolution& b, double t,
                                  double tol = 1e-9) {
  const std::size_t n = a.system().size();
  if (b.system().size() != n) throw std::invalid_argument("pair_distance: systems differ in size");
  PairDistance out;
  out.components.assign(n, 0.0);
  if (t == 0.0) {
    for (std::size_t i = 0; i < n; ++i) out.components[i] = l1_distance(a.initial(), b.initial(), i);
  } else {
    std::vector<std::size_t> finite;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.left_state()[i] != b.left_state()[i] || a.right_state()[i] != b.right_state()[i])
        out.components[i] = std::numeric_limits<double>::infinity();
      else
        finite.push_back(i);
    }
    if (!finite.empty()) {
      const TimeSlice sa = a.slice(t);
      const TimeSlice sb = b.slice(t);
      std::vector<double> kinks = sa.kinks();
      kinks.insert(kinks.end(), sb.kinks().begin(), sb.kinks().end());
      kinks = detail::sorted_unique(std::move(kinks));
      using Vec = std::array<double, kMaxComponents>;
      auto f = [&](double x) {
        const State wa = sa(x);
        const State wb = sb(x);
        Vec v{};
        for (std::size_t i : finite) v[i] = std::abs(wa[i] - wb[i]);
        return v;
      };
      const Vec d = integrate(f, kinks.front(), kinks.back(), kinks, tol);
      for (std::size_t i : finite) out.components[i] = d[i];
    }
  }
  for (double c : out.components) out.total += c;
  return out;
}

/// Sup-norm comparisons of the initial coordinate maps of two solutions.
struct MapSensitivity {
  double R0 = 0.0;
  double sup_z0 = 0.0;       ///< sup |Z0_2 - Z0_1|
  double sup_x0 = 0.0;       ///< sup |X0_2 - X0_1|
  double sup_compose = 0.0;  ///< sup |X0_1(Z0_2(x)) - x|
  double ratio_z0 = 0.0;
  double ratio_x0 = 0.0;
  double ratio_compose = 0.0;
};

inline MapSensitivity map_sensitivity(const LagrangianSolution& s1, const LagrangianSolution& s2,
                                    std::size_t grid = 2001) {
  MapSensitivity r;
  r.R0 = l1_distance(s1.initial(), s2.initial());
  const double x_lo = std::min(s1.initial().front(), s2.initial().front()) - 1.0;
  const double x_hi = std::max(s1.initial().back(), s2.initial().back()) + 1.0;
  const double z_lo = std::min(s1.zeta().front(), s2.zeta().front()) - 1.0;
  const double z_hi = std::max(s1.zeta().back(), s2.zeta().back()) + 1.0;
  std::vector<double> xs, zs;
  for (std::size_t k = 0; k < grid; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(grid - 1);
    xs.push_back(x_lo + u * (x_hi - x_lo));
    zs.push_back(z_lo + u * (z_hi - z_lo));
  }
  for (const auto* s : {&s1, &s2})
    for (double b : s->initial().breakpoints()) xs.push_back(b);
  for (double x : xs) {
    const double z2 = s2.initial_lagrangian(x);
    r.sup_z0 = std::max(r.sup_z0, std::abs(z2 - s1.initial_lagrangian(x)));
    r.sup_compose = std::max(r.sup_compose, std::abs(s1.initial_position(z2) - x));
  }
  for (double z : zs) r.sup_x0 = std::max(r.sup_x0, std::abs(s2.initial_position(z) - s1.initial_position(z)));
  if (r.R0 > 0.0) {
    r.ratio_z0 = r.sup_z0 / r.R0;
    r.ratio_x0 = r.sup_x0 / r.R0;
    r.ratio_compose = r.sup_compose / r.R0;
  }
  return r;
}

struct StabilityReport {
  double amplitude = 0.0;
  double R0 = 0.0;
  std::vector<double> times;
  std::vector<double> R;                          ///< R_t per time
  std::vector<std::vector<double>> R_components;  ///< [time][component]
  double C_hat = 0.0;                             ///< max_t R_t / R0
  MapSensitivity sensitivity;

  double ratio(std::size_t k) const { return R0 > 0.0 ? R[k] / R0 : 0.0; }
};

struct StabilitySweep {
  std::vector<StabilityReport> reports;  ///< in the order of the amplitudes given
  std::vector<double> spread;            ///< per time: max/min of R_t/R0 over nonzero amplitudes
  double c_hat_spread = 1.0;
  bool monotone = true;  ///< R_t shrinks with the amplitude at every time
  double max_spread() const {
    return spread.empty() ? 1.0 : *std::max_element(spread.begin(), spread.end());
  }
};

inline const std::vector<double>& default_stability_times() {
  static const std::vector<double> t{0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  return t;
}

/// Perturbs base by amplitude * delta for each amplitude and measures the
/// L1 distance of the exact solutions at the given times.
inline StabilitySweep stability_sweep(const RichSystem& sys, const PiecewiseProfile& base,
                                      const PiecewiseProfile& delta, const std::vector<double>& amplitudes,
                                      const std::vector<double>& times, double tol = kDefaultQuadratureTol) {
  if (!(delta.left_tail() == State(delta.components(), 0.0)) || !(delta.right_tail() == State(delta.components(), 0.0)))
    throw ScenarioError("stability_sweep: perturbation must vanish in both tails");
  const LagrangianSolution ref(sys, base, tol);
  StabilitySweep sweep;
  for (double amp : amplitudes) {
    StabilityReport rep;
    rep.amplitude = amp;
    rep.times = times;
    PiecewiseProfile moved = add(base, delta, amp);
    try {
      require_admissible(sys, moved);
    } catch (const DomainError& e) {
      throw ScenarioError(std::string("stability_sweep: amplitude ") + std::to_string(amp) +
                          " gives an inadmissible profile: " + e.what());
    }
    const LagrangianSolution other = amp == 0.0 ? ref : LagrangianSolution(sys, moved, tol);
    rep.R0 = l1_distance(base, moved);
    for (double t : times) {
      PairDistance d;
      if (amp == 0.0) {
        d.components.assign(sys.size(), 0.0);
      } else {
        d = pair_distance(ref, other, t);
      }
      rep.R.push_back(d.total);
      rep.R_components.push_back(d.components);
      if (rep.R0 > 0.0) rep.C_hat = std::max(rep.C_hat, d.total / rep.R0);
    }
    rep.sensitivity = map_sensitivity(ref, other);
    sweep.reports.push_back(std::move(rep));
  }

  std::vector<const StabilityReport*> live;
  for (const auto& r : sweep.reports)
    if (r.R0 > 0.0) live.push_back(&r);
  std::sort(live.begin(), live.end(), [](auto* x, auto* y) { return x->amplitude < y->amplitude; });
  for (std::size_t k = 0; k < times.size(); ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto* r : live) {
      lo = std::min(lo, r->ratio(k));
      hi = std::max(hi, r->ratio(k));
    }
    sweep.spread.push_back(live.empty() || lo == 0.0 ? (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity())
                                                     : hi / lo);
    for (std::size_t j = 1; j < live.size(); ++j)
      if (live[j]->R[k] < live[j - 1]->R[k]) sweep.monotone = false;
  }
  if (!live.empty()) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto* r : live) {
      lo = std::min(lo, r->C_hat);
      hi = std::max(hi, r->C_hat);
    }
    sweep.c_hat_spread = lo > 0.0 ? hi / lo : 1.0;
  }
  return sweep;
}

}  // namespace richwave
