#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "richwave/errors.hpp"

namespace richwave {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on P_n.
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double r = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = r;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * r * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (r * p1 - p0) / (r * r - 1.0);
        const double dr = p1 / dp;
        r -= dr;
        if (std::abs(dr) < 1e-16) break;
      }
      x[i] = r;
      w[i] = 2.0 / ((1.0 - r * r) * dp * dp);
    }
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule;
    return rule;
  }

  template <class F>
  double operator()(F& f, double a, double b) const {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
  }
};

inline constexpr int kPanelOrder = 10;

/// Fixed-rule integral on a short panel.
template <class F>
double panel_integral(F& f, double a, double b) {
  return GaussLegendre<kPanelOrder>::get()(f, a, b);
}

namespace detail {

template <class F>
void refine_panels(F& f, double a, double b, double whole, double tol, double scale, int depth,
                   std::vector<double>& xs, std::vector<double>& cum) {
  const double m = 0.5 * (a + b);
  const double left = panel_integral(f, a, m);
  const double right = panel_integral(f, m, b);
  // roundoff in the sums, and in where a jump at a split point really sits:
  // split points are only known to about eps * scale
  const double eps64 = 64.0 * std::numeric_limits<double>::epsilon();
  const double mass = std::abs(left) + std::abs(right);
  const double floor = eps64 * mass * (1.0 + scale / (b - a));
  if (std::abs(left + right - whole) <= std::max(tol, floor)) {
    xs.push_back(m);
    cum.push_back(cum.back() + left);
    xs.push_back(b);
    cum.push_back(cum.back() + right);
    return;
  }
  if (depth >= 40) {
    std::ostringstream os;
    os << "panel refinement: depth 40 exceeded on [" << a << ", " << b << "]";
    throw QuadratureError(os.str(), a, b, std::abs(left + right - whole));
  }
  refine_panels(f, a, m, left, 0.5 * tol, scale, depth + 1, xs, cum);
  refine_panels(f, m, b, right, 0.5 * tol, scale, depth + 1, xs, cum);
}

}  // namespace detail

/// Appends to (xs, cum) the nodes of an adaptive panelization of [a, b] for a
/// smooth integrand, with cumulative integrals. xs.back() must equal a on
/// entry. Each accepted panel agrees with its two halves to tol * width / span,
/// so the fixed rule is resolved on every panel and on any sub-interval of one.
template <class F>
void append_panels(F& f, double a, double b, double tol, double span, std::vector<double>& xs,
                   std::vector<double>& cum) {
  if (!(b > a)) return;
  const double scale = span + std::abs(a) + std::abs(b);
  detail::refine_panels(f, a, b, panel_integral(f, a, b), tol * (b - a) / span, scale, 0, xs, cum);
}

/// int_a^b f with split points; the rule never samples an endpoint, so f
/// may jump at the split points.
template <class F>
double panel_integrate(F&& f, double a, double b, const std::vector<double>& kinks, double tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> ends{a};
  for (double k : kinks)
    if (k > a && k < b) ends.push_back(k);
  ends.push_back(b);
  std::sort(ends.begin() + 1, ends.end() - 1);
  std::vector<double> xs{a};
  std::vector<double> cum{0.0};
  for (std::size_t j = 0; j + 1 < ends.size(); ++j) {
    if (!(ends[j + 1] > ends[j])) continue;
    xs.back() = ends[j];
    append_panels(f, ends[j], ends[j + 1], tol, b - a, xs, cum);
  }
  return cum.back();
}

}  // namespace richwave
