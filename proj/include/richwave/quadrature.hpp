#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "richwave/errors.hpp"

namespace richwave {

inline constexpr double kDefaultQuadratureTol = 1e-10;
inline constexpr int kMaxQuadratureDepth = 40;

namespace detail {

template <class T>
struct is_std_array : std::false_type {};
template <class T, std::size_t K>
struct is_std_array<std::array<T, K>> : std::true_type {};

// Arithmetic on double and std::array<double, K> alike.
template <class R>
R axpy(double a, const R& x, const R& y) {
  if constexpr (std::is_same_v<R, double>) {
    return a * x + y;
  } else {
    R out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
  }
}

template <class R>
R scale(double a, const R& x) {
  if constexpr (std::is_same_v<R, double>) {
    return a * x;
  } else {
    R out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i];
    return out;
  }
}

template <class R>
R add(const R& x, const R& y) {
  return axpy(1.0, x, y);
}

template <class R>
double max_abs_diff(const R& x, const R& y) {
  if constexpr (std::is_same_v<R, double>) {
    return std::abs(x - y);
  } else {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
  }
}

template <class R>
R zero() {
  if constexpr (std::is_same_v<R, double>) {
    return 0.0;
  } else {
    R out{};
    return out;
  }
}

template <class R>
struct SimpsonPanel {
  double a, m, b;
  R fa, fm, fb;
  R whole;
};

template <class R>
struct Worst {
  double lo = 0.0, hi = 0.0, estimate = -1.0;
};

// Lyness-style adaptive Simpson with Richardson correction.
template <class F, class R>
R simpson_recurse(F& f, const SimpsonPanel<R>& p, double tol, int depth, Worst<R>& worst,
                  bool& failed) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const R flm = f(lm);
  const R frm = f(rm);
  const double hl = (p.m - p.a) / 6.0;
  const double hr = (p.b - p.m) / 6.0;
  // left = hl*(fa + 4 flm + fm), right = hr*(fm + 4 frm + fb)
  R left = scale(hl, add(add(p.fa, scale(4.0, flm)), p.fm));
  R right = scale(hr, add(add(p.fm, scale(4.0, frm)), p.fb));
  R both = add(left, right);
  const double err = max_abs_diff(both, p.whole);
  if (err <= 15.0 * tol || p.b - p.a <= 4.0 * std::numeric_limits<double>::epsilon() *
                                             std::max(std::abs(p.a), std::abs(p.b))) {
    // both + (both - whole)/15
    return axpy(1.0 / 15.0, axpy(-1.0, p.whole, both), both);
  }
  if (depth >= kMaxQuadratureDepth) {
    failed = true;
    if (err > worst.estimate) worst = {p.a, p.b, err};
    return axpy(1.0 / 15.0, axpy(-1.0, p.whole, both), both);
  }
  SimpsonPanel<R> lp{p.a, lm, p.m, p.fa, flm, p.fm, left};
  SimpsonPanel<R> rp{p.m, rm, p.b, p.fm, frm, p.fb, right};
  return add(simpson_recurse(f, lp, 0.5 * tol, depth + 1, worst, failed),
             simpson_recurse(f, rp, 0.5 * tol, depth + 1, worst, failed));
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance tol.
/// The interval is split at every kink strictly inside (a, b) and the
/// tolerance shared in proportion to length. Works for scalar integrands and
/// for std::array<double, K> integrands (error measured in max norm).
/// Reversed limits give the negated integral.
template <class F>
auto integrate(F&& f, double a, double b, std::span<const double> kinks = {},
               double tol = kDefaultQuadratureTol) {
  using R = std::decay_t<decltype(f(a))>;
  static_assert(std::is_same_v<R, double> || detail::is_std_array<R>::value,
                "integrand must return double or std::array<double, K>");
  if (a == b) return detail::zero<R>();
  if (b < a) return detail::scale(-1.0, integrate(f, b, a, kinks, tol));

  std::vector<double> cuts;
  cuts.reserve(kinks.size() + 2);
  cuts.push_back(a);
  for (double k : kinks)
    if (k > a && k < b) cuts.push_back(k);
  cuts.push_back(b);
  std::sort(cuts.begin() + 1, cuts.end() - 1);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double length = b - a;
  R total = detail::zero<R>();
  detail::Worst<R> worst;
  bool failed = false;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    if (!(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    detail::SimpsonPanel<R> p{lo, mid, hi, f(lo), f(mid), f(hi), detail::zero<R>()};
    p.whole = detail::scale((hi - lo) / 6.0, detail::add(detail::add(p.fa, detail::scale(4.0, p.fm)), p.fb));
    const double piece_tol = tol * (hi - lo) / length;
    total = detail::add(total, detail::simpson_recurse(f, p, piece_tol, 0, worst, failed));
  }
  if (failed) {
    std::ostringstream os;
    os << "integrate: depth " << kMaxQuadratureDepth << " exceeded on [" << worst.lo << ", "
       << worst.hi << "] (error estimate " << worst.estimate << ")";
    throw QuadratureError(os.str(), worst.lo, worst.hi, worst.estimate);
  }
  return total;
}

template <class F>
auto integrate(F&& f, double a, double b, std::initializer_list<double> kinks,
               double tol = kDefaultQuadratureTol) {
  return integrate(std::forward<F>(f), a, b, std::span<const double>(kinks.begin(), kinks.size()),
                   tol);
}

}  // namespace richwave
