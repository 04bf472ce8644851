// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "support.hpp"

using namespace rwtest;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && secs >= limit_s) {
    o.pass = false;
    o.detail += "; runtime limit " + num(limit_s) + " s exceeded";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome structural_identity() {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ua(1.0, 3.0), ul(-5.0, 5.0), ug(1e-2, 10.0), uq(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const bool abi = k % 2 == 1;
    const RichSystem sys = abi ? model_abi(ua(rng)) : model_bi(ua(rng));
    const double lam = ul(rng), mu = lam + ug(rng);
    const State w = abi ? State{mu, uq(rng), lam} : State{mu, lam};
    const double N = sys.density(w), M = sys.flux(w);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const double c = sys.lagrangian_speed(i);
      const double lhs = N * sys.speed(i, w);
      const double scale = std::max({1.0, std::abs(lhs), std::abs(c), std::abs(M)});
      worst = std::max(worst, std::abs(lhs - c - M) / scale);
    }
  }
  return {worst <= 1e-13, "max relative |N lambda_i - c_i - M| = " + num(worst) + " over 10000 states"};
}

Outcome round_trips() {
  double worst_z = 0.0, worst_x = 0.0;
  for (const auto& sc : catalog()) {
    const LagrangianSolution s(sc.sys, sc.w0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(0.0, 10.0), uz(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k) {
      const TimeSlice sl = s.slice(ut(rng));
      const double z = uz(rng);
      worst_z = std::max(worst_z, std::abs(sl.Z(sl.X(z)) - z));
      const double x = uz(rng);
      worst_x = std::max(worst_x, std::abs(s.initial_position(s.initial_lagrangian(x)) - x));
    }
  }
  return {worst_z <= 1e-9 && worst_x <= 1e-9,
          "max |Z(t,X(t,z)) - z| = " + num(worst_z) + ", max |X0(Z0(x)) - x| = " + num(worst_x)};
}

Outcome closed_form() {
  const LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  double worst = 0.0;
  for (int a = 0; a < 50; ++a)
    for (int b = 0; b < 50; ++b) {
      const double t = 0.3 * a, z = -10.0 + 20.0 * b / 49.0;
      worst = std::max(worst, std::abs(s.X(t, z) - s.x_bi_closed_form(t, z)));
    }
  return {worst <= 1e-9, "max |X - X_closed| = " + num(worst) + " on 50x50 grid, t in [0, 14.7]"};
}

Outcome oracle() {
  bool ok = true;
  std::string d;
  for (const auto& sc : catalog()) {
    const std::string name = sc.name;
    if (name != "bi-simple-wave" && name != "bi-two-ramp") continue;
    const LagrangianSolution s(sc.sys, sc.w0);
    const auto tab = run_and_compare(s, 2.0, {400, 800, 1600});
    ok = ok && tab.first_order(1.4, 2.6);
    d += name + " errors";
    for (const auto& r : tab.rows) d += " " + num(r.error);
    d += " ratios " + num(tab.rows[1].ratio) + " " + num(tab.rows[2].ratio) + "; ";
  }
  return {ok, d};
}

Outcome plateaus() {
  const LagrangianSolution s(model_bi(1.0), two_ramp_profile());
  const WavePattern pat(s, 1.0);
  const double tl = pat.t_L();
  const double rk = rk4_crossing(s, 0, 1, 1.0);
  const double rel = std::abs(tl - rk) / tl;
  bool ok = rel <= 1e-6;
  std::string d = "t_L = " + num(tl) + ", RK4 rel diff " + num(rel);
  for (double f : {1.1, 2.0}) {
    const auto rep = verify_decomposition(s, pat, f * tl, 32, -1.0, 1e-9, 1e-8);
    ok = ok && rep.passed();
    d += "; t = " + num(f) + " t_L: plateau err " + num(rep.max_plateau_error) + ", shift err " +
         num(rep.max_shift_error) + (rep.ordered ? "" : ", boundaries out of order");
  }
  return {ok, d};
}

Outcome decay() {
  const std::vector<double> times{5.0, 10.0, 20.0, 40.0, 80.0};
  bool ok = true;
  std::string d;
  const LagrangianSolution ramp(model_bi(1.0), two_ramp_profile());
  for (auto side : {BiSide::slow, BiSide::fast}) {
    const auto rep = decay_curve(ramp, bi_shape(ramp, side), times);
    ok = ok && rep.totals.back() < 0.1 * rep.totals.front();
    d += std::string(side == BiSide::slow ? "two-ramp slow" : "two-ramp fast") + " d(5) = " + num(rep.totals.front()) +
         ", d(80) = " + num(rep.totals.back()) + "; ";
  }
  const LagrangianSolution wave(model_bi(1.0), simple_wave_profile());
  double worst = 0.0;
  for (auto side : {BiSide::slow, BiSide::fast})
    for (double v : decay_curve(wave, bi_shape(wave, side), times).totals) worst = std::max(worst, v);
  ok = ok && worst <= 1e-8;
  d += "simple wave max d = " + num(worst);
  return {ok, d};
}

Outcome consistency() {
  double shape_gap = 0.0, k_spread = 0.0, fd_rel = 0.0;
  auto gap = [&](const ShapeFunction& a, const ShapeFunction& b) {
    for (int k = 0; k < 200; ++k) {
      const double x = -1.5 + 3.0 * k / 199.0;
      shape_gap = std::max(shape_gap, std::abs(a(x) - b(x)));
    }
  };
  const LagrangianSolution ramp(model_bi(1.0), two_ramp_profile());
  gap(build_shape_generic(ramp, 0), bi_shape(ramp, BiSide::slow));
  gap(build_shape_generic(ramp, 1), bi_shape(ramp, BiSide::fast));
  const LagrangianSolution mid(model_abi(1.0), abi_middle_profile());
  gap(build_shape_generic(mid, 1), abi_shape(mid));

  for (std::size_t i : {0u, 2u})
    for (int k = 0; k < 50; ++k) {
      const double x = -1.2 + 2.4 * k / 49.0;
      const std::size_t k2 = i == 0 ? 2 : 0;
      k_spread = std::max(k_spread, std::abs(psi_i1(mid, i, x, 1) - psi_i1(mid, i, x, k2)));
    }

  for (const auto& sc : catalog()) {
    const LagrangianSolution s(sc.sys, sc.w0);
    const auto& bx = s.initial().breakpoints();
    const double h = 1e-5;
    for (std::size_t i = 0; i < s.system().size(); ++i)
      for (int k = 0; k < 24; ++k) {
        const double x = -0.97 + 1.94 * (k + 0.31) / 24.0;
        bool near_kink = false;
        for (double b : bx) near_kink = near_kink || std::abs(x - b) < 2.0 * h;
        if (near_kink) continue;
        const double fd = (psi_direct(s, i, x + h) - psi_direct(s, i, x - h)) / (2.0 * h);
        const double an = psi_derivative(s, i, x);
        fd_rel = std::max(fd_rel, std::abs(an - fd) / std::max(std::abs(fd), 1e-300));
      }
  }
  return {shape_gap <= 1e-8 && k_spread <= 1e-9 && fd_rel <= 1e-4,
          "generic vs model shapes " + num(shape_gap) + ", k-spread " + num(k_spread) + ", psi' vs FD rel " +
              num(fd_rel)};
}

Outcome stability() {
  const auto sweep = stability_sweep(model_bi(1.0), two_ramp_profile(), stability_perturbation(), {0.1, 0.05, 0.025},
                                     default_stability_times());
  bool exact0 = true, finite = true;
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {0.0, 0.0, 0.0};
  for (const auto& r : sweep.reports) {
    exact0 = exact0 && r.R[0] == r.R0;
    const double v[3] = {r.sensitivity.ratio_z0, r.sensitivity.ratio_x0, r.sensitivity.ratio_compose};
    for (int k = 0; k < 3; ++k) {
      finite = finite && std::isfinite(v[k]) && v[k] > 0.0;
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  }
  double map_spread = 1.0;
  for (int k = 0; k < 3; ++k) map_spread = std::max(map_spread, hi[k] / lo[k]);
  const bool ok = sweep.max_spread() < 2.0 && exact0 && finite && map_spread < 2.0;
  std::string d = "max R_t/R0 spread " + num(sweep.max_spread()) + ", R_0 == R0 " + (exact0 ? "yes" : "no") +
                  ", map ratio spread " + num(map_spread) + ", C_hat";
  for (const auto& r : sweep.reports) d += " " + num(r.C_hat);
  return {ok, d};
}

Outcome residuals() {
  double worst = 0.0;
  for (const auto& sc : catalog()) {
    const LagrangianSolution s(sc.sys, sc.w0);
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> ut(0.0, 10.0), ux(-6.0, 6.0);
    for (int k = 0; k < 20; ++k) {
      double t1 = ut(rng), t2 = ut(rng), A = ux(rng), B = ux(rng);
      if (t1 > t2) std::swap(t1, t2);
      if (A > B) std::swap(A, B);
      t2 += 0.05;
      B += 0.05;
      for (double r : s.weak_residuals(t1, t2, A, B)) worst = std::max(worst, r);
    }
  }
  return {worst <= 1e-8, "max conservation/entropy residual " + num(worst) + " over 80 boxes"};
}

}  // namespace

int main() {
  run(1, "structural identity", 1.0, structural_identity);
  run(2, "coordinate round trips", 10.0, round_trips);
  run(3, "closed-form cross-check", 30.0, closed_form);
  run(4, "upwind oracle equivalence", 60.0, oracle);
  run(5, "plateau decomposition", 0.0, plateaus);
  run(6, "traveling-wave decay", 0.0, decay);
  run(7, "shape consistency", 0.0, consistency);
  run(8, "L1 stability sweep", 0.0, stability);
  run(9, "weak-form residuals", 0.0, residuals);
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
