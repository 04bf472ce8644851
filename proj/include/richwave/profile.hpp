#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "richwave/format.hpp"
#include "richwave/state.hpp"
#include "richwave/system.hpp"

namespace richwave {

/// Piecewise-linear initial data with exact constant tails. Values are
/// interpolated linearly between breakpoints and held constant outside
/// [x_0, x_K], so w - w_bar(+/-) is supported in that interval.
class PiecewiseProfile {
 public:
  PiecewiseProfile() = default;

  PiecewiseProfile(std::vector<double> breakpoints, std::vector<State> values)
      : x_(std::move(breakpoints)), values_(std::move(values)) {
    if (x_.empty() || x_.size() != values_.size())
      throw std::invalid_argument("PiecewiseProfile: need matching, non-empty breakpoints and values");
    for (std::size_t k = 1; k < x_.size(); ++k)
      if (!(x_[k] > x_[k - 1]))
        throw std::invalid_argument("PiecewiseProfile: breakpoints must increase strictly");
    for (const State& v : values_)
      if (v.size() != values_.front().size())
        throw std::invalid_argument("PiecewiseProfile: inconsistent component count");
    for (double x : x_)
      if (!std::isfinite(x)) throw std::invalid_argument("PiecewiseProfile: non-finite breakpoint");
  }

  /// Constant data supported nowhere, with nominal breakpoints at +/- half_width.
  static PiecewiseProfile constant(const State& w, double half_width = 1.0) {
    return PiecewiseProfile({-half_width, half_width}, {w, w});
  }

  std::size_t components() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
  std::size_t segments() const noexcept { return x_.size() - 1; }
  const std::vector<double>& breakpoints() const noexcept { return x_; }
  const std::vector<State>& values() const noexcept { return values_; }
  double front() const noexcept { return x_.front(); }
  double back() const noexcept { return x_.back(); }
  const State& left_tail() const noexcept { return values_.front(); }
  const State& right_tail() const noexcept { return values_.back(); }
  bool equal_tails() const { return left_tail() == right_tail(); }

  /// Half-width L of the smallest symmetric interval holding the core.
  double half_width() const noexcept { return std::max(std::abs(x_.front()), std::abs(x_.back())); }

  /// Index k of the segment [x_k, x_{k+1}] holding x (clamped to the core).
  std::size_t segment_of(double x) const noexcept {
    if (x_.size() < 2 || x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  State operator()(double x) const {
    if (x <= x_.front()) return values_.front();
    if (x >= x_.back()) return values_.back();
    const std::size_t k = segment_of(x);
    const double s = (x - x_[k]) / (x_[k + 1] - x_[k]);
    return lerp(values_[k], values_[k + 1], s);
  }

  double component(std::size_t i, double x) const {
    if (x <= x_.front()) return values_.front()[i];
    if (x >= x_.back()) return values_.back()[i];
    const std::size_t k = segment_of(x);
    const double s = (x - x_[k]) / (x_[k + 1] - x_[k]);
    return values_[k][i] + s * (values_[k + 1][i] - values_[k][i]);
  }

  /// Slope of component i on the segment holding x (0 on the tails).
  double slope(std::size_t i, double x) const {
    if (x < x_.front() || x > x_.back() || x_.size() < 2) return 0.0;
    const std::size_t k = segment_of(x);
    return (values_[k + 1][i] - values_[k][i]) / (x_[k + 1] - x_[k]);
  }

  double min_component(std::size_t i) const {
    double m = values_.front()[i];
    for (const State& v : values_) m = std::min(m, v[i]);
    return m;
  }
  double max_component(std::size_t i) const {
    double m = values_.front()[i];
    for (const State& v : values_) m = std::max(m, v[i]);
    return m;
  }

  /// Total variation of component i, i.e. the L1 norm of its derivative.
  double total_variation(std::size_t i) const {
    double tv = 0.0;
    for (std::size_t k = 1; k < values_.size(); ++k) tv += std::abs(values_[k][i] - values_[k - 1][i]);
    return tv;
  }

 private:
  std::vector<double> x_;
  std::vector<State> values_;
};

/// Throws DomainError when an interpolated state leaves the admissible set.
/// Breakpoints and segment midpoints are probed; for the convex admissible
/// sets of the catalog models this is exact.
inline void require_admissible(const RichSystem& sys, const PiecewiseProfile& p) {
  if (p.components() != sys.size())
    throw DomainError("profile has " + std::to_string(p.components()) + " components, system expects " +
                      std::to_string(sys.size()));
  const auto& x = p.breakpoints();
  for (std::size_t k = 0; k < x.size(); ++k) {
    sys.require_admissible(p.values()[k]);
    if (k + 1 < x.size()) sys.require_admissible(p(0.5 * (x[k] + x[k + 1])));
  }
}

/// Sum of two profiles on the union of their breakpoints: base + scale*delta.
inline PiecewiseProfile add(const PiecewiseProfile& base, const PiecewiseProfile& delta, double scale) {
  if (base.components() != delta.components())
    throw std::invalid_argument("add: component count mismatch");
  std::vector<double> xs = base.breakpoints();
  xs.insert(xs.end(), delta.breakpoints().begin(), delta.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<State> vs;
  vs.reserve(xs.size());
  for (double x : xs) {
    State v = base(x);
    const State d = delta(x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale * d[i];
    vs.push_back(v);
  }
  return PiecewiseProfile(std::move(xs), std::move(vs));
}

/// Exact L1 distance between one component of two profiles. Profiles whose
/// tails differ in that component are infinitely far apart.
inline double l1_distance(const PiecewiseProfile& p, const PiecewiseProfile& q, std::size_t component) {
  const std::size_t i = component;
  if (p.left_tail()[i] != q.left_tail()[i] || p.right_tail()[i] != q.right_tail()[i])
    return std::numeric_limits<double>::infinity();
  std::vector<double> xs = p.breakpoints();
  xs.insert(xs.end(), q.breakpoints().begin(), q.breakpoints().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // The difference is linear between consecutive union breakpoints.
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double h = xs[k + 1] - xs[k];
    const double d0 = p.component(i, xs[k]) - q.component(i, xs[k]);
    const double d1 = p.component(i, xs[k + 1]) - q.component(i, xs[k + 1]);
    if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) {
      total += 0.5 * h * std::abs(d0 + d1);
    } else {
      // two triangles meeting at the zero crossing
      total += 0.5 * h * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1));
    }
  }
  return total;
}

/// Sum of the componentwise L1 distances.
inline double l1_distance(const PiecewiseProfile& p, const PiecewiseProfile& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.components(); ++i) total += l1_distance(p, q, i);
  return total;
}

// ---- text format -----------------------------------------------------------
//
//   # richwave-profile v1, n=<n>
//   x v1 ... vn
//   ...

inline PiecewiseProfile read_profile(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ScenarioError("profile: empty input");
  const std::string tag = "# richwave-profile v1, n=";
  if (header.rfind(tag, 0) != 0) throw ScenarioError("profile: bad header '" + header + "'");
  std::size_t n = 0;
  try {
    n = static_cast<std::size_t>(std::stoul(header.substr(tag.size())));
  } catch (const std::exception&) {
    throw ScenarioError("profile: bad component count in header");
  }
  if (n == 0 || n > kMaxComponents) throw ScenarioError("profile: component count out of range");

  std::vector<double> xs;
  std::vector<State> vs;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double x = 0.0;
    if (!(row >> x)) throw ScenarioError("profile: line " + std::to_string(lineno) + ": bad x");
    State v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!(row >> v[i]))
        throw ScenarioError("profile: line " + std::to_string(lineno) + ": expected " +
                            std::to_string(n) + " values");
    std::string extra;
    if (row >> extra) throw ScenarioError("profile: line " + std::to_string(lineno) + ": trailing data");
    if (!xs.empty() && !(x > xs.back()))
      throw ScenarioError("profile: line " + std::to_string(lineno) + ": x not strictly increasing");
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.empty()) throw ScenarioError("profile: no breakpoints");
  return PiecewiseProfile(std::move(xs), std::move(vs));
}

inline void write_profile(std::ostream& out, const PiecewiseProfile& p) {
  out << "# richwave-profile v1, n=" << p.components() << '\n';
  for (std::size_t k = 0; k < p.breakpoints().size(); ++k) {
    out << format_number(p.breakpoints()[k]);
    for (double v : p.values()[k]) out << ' ' << format_number(v);
    out << '\n';
  }
}

}  // namespace richwave
