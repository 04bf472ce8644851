#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "richwave/errors.hpp"

namespace richwave {

inline constexpr double kDefaultInversionTol = 1e-12;
inline constexpr int kMaxInversionIterations = 200;

/// Strictly increasing map of the real line with exact affine tails.
///
/// The core [x_0, x_K] is described by knots (x_k, F(x_k)) and, optionally,
/// an exact evaluator and its derivative. Without an evaluator the map is the
/// piecewise-affine interpolant of the knots. Outside the core F is affine
/// with the given tail slopes, so invert() is defined on all of R.
class MonotoneMap {
 public:
  using Fn = std::function<double(double)>;

  MonotoneMap() : MonotoneMap(affine(1.0, 0.0)) {}

  MonotoneMap(std::vector<double> xs, std::vector<double> ys, double left_slope, double right_slope,
              Fn value = {}, Fn slope = {}, double min_slope = 0.0, double max_slope = 0.0,
              double tol = kDefaultInversionTol)
      : xs_(std::move(xs)),
        ys_(std::move(ys)),
        left_slope_(left_slope),
        right_slope_(right_slope),
        value_(std::move(value)),
        slope_(std::move(slope)),
        tol_(tol) {
    if (xs_.empty() || xs_.size() != ys_.size())
      throw std::invalid_argument("MonotoneMap: need matching, non-empty knot arrays");
    if (!(left_slope_ > 0.0) || !(right_slope_ > 0.0))
      throw std::invalid_argument("MonotoneMap: tail slopes must be positive");
    for (std::size_t k = 1; k < xs_.size(); ++k)
      if (!(xs_[k] > xs_[k - 1]) || !(ys_[k] > ys_[k - 1]))
        throw std::invalid_argument("MonotoneMap: knots must increase strictly in x and y");
    if (min_slope > 0.0 && max_slope >= min_slope) {
      min_slope_ = min_slope;
      max_slope_ = max_slope;
    } else {
      // fall back to the knot secants and the tails
      min_slope_ = std::min(left_slope_, right_slope_);
      max_slope_ = std::max(left_slope_, right_slope_);
      for (std::size_t k = 1; k < xs_.size(); ++k) {
        const double s = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
        min_slope_ = std::min(min_slope_, s);
        max_slope_ = std::max(max_slope_, s);
      }
    }
  }

  /// F(x) = slope*x + intercept.
  static MonotoneMap affine(double slope, double intercept) {
    return MonotoneMap({0.0}, {intercept}, slope, slope, {}, {}, slope, slope);
  }

  /// Piecewise-affine interpolant; tails continue the end segments.
  static MonotoneMap piecewise_affine(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2) throw std::invalid_argument("piecewise_affine: need at least two knots");
    const std::size_t K = xs.size() - 1;
    const double sl = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    const double sr = (ys[K] - ys[K - 1]) / (xs[K] - xs[K - 1]);
    return MonotoneMap(std::move(xs), std::move(ys), sl, sr);
  }

  const std::vector<double>& knots_x() const noexcept { return xs_; }
  const std::vector<double>& knots_y() const noexcept { return ys_; }
  double core_lo() const noexcept { return xs_.front(); }
  double core_hi() const noexcept { return xs_.back(); }
  double left_slope() const noexcept { return left_slope_; }
  double right_slope() const noexcept { return right_slope_; }
  double min_slope() const noexcept { return min_slope_; }
  double max_slope() const noexcept { return max_slope_; }
  double tolerance() const noexcept { return tol_; }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front() + left_slope_ * (x - xs_.front());
    if (x >= xs_.back()) return ys_.back() + right_slope_ * (x - xs_.back());
    if (value_) return value_(x);
    const std::size_t k = segment(xs_, x);
    return ys_[k] + (ys_[k + 1] - ys_[k]) * (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
  }

  double slope(double x) const {
    if (x < xs_.front()) return left_slope_;
    if (x > xs_.back()) return right_slope_;
    if (slope_) return slope_(x);
    if (xs_.size() < 2) return left_slope_;
    const std::size_t k = segment(xs_, x);
    return (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
  }

  /// x with |F(x) - y| <= tol * max(1, |y|).
  double invert(double y) const {
    if (y <= ys_.front()) return xs_.front() + (y - ys_.front()) / left_slope_;
    if (y >= ys_.back()) return xs_.back() + (y - ys_.back()) / right_slope_;
    const std::size_t k = segment(ys_, y);
    if (!value_) return xs_[k] + (xs_[k + 1] - xs_[k]) * (y - ys_[k]) / (ys_[k + 1] - ys_[k]);

    double lo = xs_[k], hi = xs_[k + 1];
    double flo = ys_[k] - y, fhi = ys_[k + 1] - y;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    const double accept = tol_ * std::max(1.0, std::abs(y));

    double x = lo - flo * (hi - lo) / (fhi - flo);
    double dx_old = hi - lo;
    double dx = dx_old;
    for (int it = 0; it < kMaxInversionIterations; ++it) {
      const double f = value_(x) - y;
      if (std::abs(f) <= accept) {
        // one more Newton step costs nothing and removes most of the residual
        if (slope_ && f != 0.0) {
          const double polished = x - f / slope_(x);
          if (polished >= lo && polished <= hi) return polished;
        }
        return x;
      }
      if (f < 0.0) {
        lo = x;
        flo = f;
      } else {
        hi = x;
        fhi = f;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)))
        return 0.5 * (lo + hi);

      double df = slope_ ? slope_(x) : (fhi - flo) / (hi - lo);
      double next = (df > 0.0 && std::isfinite(df)) ? x - f / df : std::numeric_limits<double>::quiet_NaN();
      // safeguard: bisect when Newton leaves the bracket or stalls
      if (!(next > lo && next < hi) || std::abs(2.0 * f) > std::abs(dx_old * df)) {
        dx_old = dx;
        next = 0.5 * (lo + hi);
      } else {
        dx_old = dx;
      }
      dx = next - x;
      x = next;
    }
    std::ostringstream os;
    os << "MonotoneMap::invert: no convergence for y = " << y << " within " << kMaxInversionIterations
       << " iterations (bracket [" << lo << ", " << hi << "])";
    throw InversionError(os.str());
  }

 private:
  // index k with v[k] <= s < v[k+1], clamped
  static std::size_t segment(const std::vector<double>& v, double s) {
    auto it = std::upper_bound(v.begin(), v.end(), s);
    std::size_t k = static_cast<std::size_t>(it - v.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, v.size() - 2);
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  double left_slope_;
  double right_slope_;
  Fn value_;
  Fn slope_;
  double min_slope_ = 0.0;
  double max_slope_ = 0.0;
  double tol_;
};

}  // namespace richwave
