#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "richwave/lagrangian.hpp"

namespace richwave {

enum class Side { minus, plus };

/// t_{p,q} for one pair of families p < q (0-based).
struct PairTime {
  std::size_t p = 0;
  std::size_t q = 0;
  double t = 0.0;
};

struct IntersectionTable {
  std::vector<PairTime> pairs;
  /// Largest pair time; kNoIntersection for a single family.
  double t_L = 0.0;
  bool has_intersections() const noexcept { return !pairs.empty(); }
};

inline constexpr double kNoIntersection = -1.0;

/// Half-width L of the smallest symmetric interval holding the profile core.
inline double core_half_width(const LagrangianSolution& sol) { return sol.initial().half_width(); }

/// State with families <= p at the right tail and the others at the left.
/// p = -1 gives the left tail, p = s-1 the right tail.
inline State plateau_state(const LagrangianSolution& sol, long p) {
  const auto& sys = sol.system();
  State w = sol.left_state();
  for (std::size_t f = 0; f < sys.family_count() && static_cast<long>(f) <= p; ++f) {
    const Family& fam = sys.family(f);
    for (std::size_t i = fam.first; i < fam.first + fam.count; ++i) w[i] = sol.right_state()[i];
  }
  return w;
}

/// X_p^{+-}(t) = X(t, Z0(+-L) + c_p t): the p-characteristic issued from +-L.
inline double boundary_curve(const TimeSlice& slice, const LagrangianSolution& sol, std::size_t p, Side side,
                             double L) {
  const double x0 = side == Side::minus ? -L : L;
  return slice.X(sol.initial_lagrangian(x0) + sol.system().family(p).lagrangian_speed * slice.time());
}

inline double boundary_curve(const LagrangianSolution& sol, std::size_t p, Side side, double t) {
  return boundary_curve(sol.slice(t), sol, p, side, core_half_width(sol));
}

/// Closed-form crossing times t_{p,q} = (Z0(L) - Z0(-L)) / (c_q - c_p).
inline IntersectionTable intersection_times(const LagrangianSolution& sol, double L) {
  IntersectionTable out;
  const auto& fams = sol.system().families();
  if (fams.size() < 2) {
    out.t_L = kNoIntersection;
    return out;
  }
  const double width = sol.initial_lagrangian(L) - sol.initial_lagrangian(-L);
  out.t_L = 0.0;
  for (std::size_t p = 0; p < fams.size(); ++p)
    for (std::size_t q = p + 1; q < fams.size(); ++q) {
      const double t = width / (fams[q].lagrangian_speed - fams[p].lagrangian_speed);
      out.pairs.push_back({p, q, t});
      out.t_L = std::max(out.t_L, t);
    }
  return out;
}

inline IntersectionTable intersection_times(const LagrangianSolution& sol) {
  return intersection_times(sol, core_half_width(sol));
}

/// Regions after t_L, numbered as D_0 ... D_{2s}: D_0 and D_{2s} are the
/// outer tails, D_p (1 <= p <= s) the p-th traveling profile, D_{s+p} the
/// plateau between profiles p and p+1.
struct DomainLabel {
  enum class Kind { left_tail, wave, plateau, right_tail };
  Kind kind = Kind::left_tail;
  std::size_t index = 0;  ///< numbered 0 ... 2s from the left
  std::size_t family = 0; ///< 0-based family for waves; left family for plateaus

  bool operator==(const DomainLabel&) const = default;
};

inline std::string to_string(const DomainLabel& d) { return "D" + std::to_string(d.index); }

/// Boundary curves and plateau states of a solution after its
/// decomposition time.
class WavePattern {
 public:
  WavePattern(const LagrangianSolution& sol, double L) : sol_(&sol), L_(L), table_(intersection_times(sol, L)) {
    const long s = static_cast<long>(sol.system().family_count());
    for (long p = -1; p < s; ++p) plateaus_.push_back(plateau_state(sol, p));
  }
  explicit WavePattern(const LagrangianSolution& sol) : WavePattern(sol, core_half_width(sol)) {}

  double L() const noexcept { return L_; }
  double t_L() const noexcept { return table_.t_L; }
  const IntersectionTable& table() const noexcept { return table_; }
  std::size_t families() const { return sol_->system().family_count(); }

  /// w^r for r = 0 ... s: families 1 ... r on their right tails.
  const State& plateau(std::size_t r) const { return plateaus_.at(r); }
  const std::vector<State>& plateaus() const noexcept { return plateaus_; }

  /// Speed at which the p-th profile travels once isolated.
  double wave_speed(std::size_t p) const { return sol_->system().speed_of_family(p, plateaus_.at(p)); }

  /// Boundary positions X_p^-, X_p^+ for every family at time t, in the
  /// order X_0^-, X_0^+, X_1^-, X_1^+, ...
  std::vector<double> boundaries(const TimeSlice& slice) const {
    std::vector<double> out;
    for (std::size_t p = 0; p < families(); ++p) {
      out.push_back(boundary_curve(slice, *sol_, p, Side::minus, L_));
      out.push_back(boundary_curve(slice, *sol_, p, Side::plus, L_));
    }
    return out;
  }

  void require_decomposed(double t) const {
    if (table_.has_intersections() && !(t > table_.t_L)) {
      std::ostringstream os;
      os << "t = " << t << " is not past the decomposition time t_L = " << table_.t_L;
      throw NotDecomposedError(os.str());
    }
  }

  /// Label of (t, x) with right-closed intervals: D_0 is x <= X_1^-, D_p is
  /// X_p^- < x <= X_p^+, D_{s+p} is X_p^+ < x <= X_{p+1}^-.
  DomainLabel classify(const TimeSlice& slice, double x) const {
    require_decomposed(slice.time());
    const auto b = boundaries(slice);
    const std::size_t s = families();
    if (x <= b[0]) return {DomainLabel::Kind::left_tail, 0, 0};
    for (std::size_t p = 0; p < s; ++p) {
      if (x <= b[2 * p + 1]) return {DomainLabel::Kind::wave, p + 1, p};
      if (p + 1 < s && x <= b[2 * p + 2]) return {DomainLabel::Kind::plateau, s + p + 1, p};
    }
    return {DomainLabel::Kind::right_tail, 2 * s, s - 1};
  }

  DomainLabel classify(double t, double x) const {
    require_decomposed(t);
    return classify(sol_->slice(t), x);
  }

 private:
  const LagrangianSolution* sol_;
  double L_;
  IntersectionTable table_;
  std::vector<State> plateaus_;
};

struct DomainCheck {
  DomainLabel label;
  std::size_t samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }
};

struct DecompositionReport {
  double t = 0.0;
  double t_shift = 0.0;  ///< second time used by the traveling-wave check
  bool ordered = true;   ///< X_1^- < X_1^+ < X_2^- < ... strictly
  std::vector<double> boundaries;
  std::vector<DomainCheck> checks;
  double max_plateau_error = 0.0;
  double max_shift_error = 0.0;

  bool passed() const {
    if (!ordered) return false;
    for (const auto& c : checks)
      if (!c.passed()) return false;
    return true;
  }
};

/// Samples every domain at time t: constant regions must equal their
/// predicted states, and inside D_p the carried components must satisfy
/// w(t2, x + sigma_p (t2 - t)) = w(t, x) with t2 = t_shift (default 2t).
inline DecompositionReport verify_decomposition(const LagrangianSolution& sol, const WavePattern& pattern, double t,
                                        std::size_t samples = 32, double t_shift = -1.0,
                                        double plateau_tol = 1e-9, double shift_tol = 1e-8) {
  pattern.require_decomposed(t);
  if (samples == 0) throw std::invalid_argument("verify_decomposition: need at least one sample");
  const double t2 = t_shift > t ? t_shift : 2.0 * t;
  const TimeSlice s1 = sol.slice(t);
  const TimeSlice s2 = sol.slice(t2);
  const auto& sys = sol.system();
  const std::size_t n = sys.size();
  const std::size_t fams = pattern.families();

  DecompositionReport rep;
  rep.t = t;
  rep.t_shift = t2;
  rep.boundaries = pattern.boundaries(s1);
  for (std::size_t k = 1; k < rep.boundaries.size(); ++k)
    if (!(rep.boundaries[k] > rep.boundaries[k - 1])) rep.ordered = false;

  auto interior = [samples](double lo, double hi, std::size_t k) {
    return lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
  };
  auto constant_check = [&](DomainLabel label, double lo, double hi, const State& expect) {
    DomainCheck c{label, samples, 0.0, plateau_tol};
    for (std::size_t k = 0; k < samples; ++k) {
      const State w = s1(interior(lo, hi, k));
      for (std::size_t i = 0; i < n; ++i) c.max_error = std::max(c.max_error, std::abs(w[i] - expect[i]));
    }
    rep.max_plateau_error = std::max(rep.max_plateau_error, c.max_error);
    rep.checks.push_back(c);
  };

  const auto& b = rep.boundaries;
  const double pad = 1.0 + std::abs(b.back() - b.front());
  constant_check({DomainLabel::Kind::left_tail, 0, 0}, b.front() - pad, b.front(), pattern.plateau(0));
  for (std::size_t p = 0; p + 1 < fams; ++p)
    constant_check({DomainLabel::Kind::plateau, fams + p + 1, p}, b[2 * p + 1], b[2 * p + 2],
                   pattern.plateau(p + 1));
  constant_check({DomainLabel::Kind::right_tail, 2 * fams, fams - 1}, b.back(), b.back() + pad,
                 pattern.plateau(fams));

  for (std::size_t p = 0; p < fams; ++p) {
    DomainCheck c{{DomainLabel::Kind::wave, p + 1, p}, samples, 0.0, shift_tol};
    const Family& fam = sys.family(p);
    const double sigma = pattern.wave_speed(p);
    // inside D_p the other families sit at their plateau values
    const State& frame = pattern.plateau(p);
    for (std::size_t k = 0; k < samples; ++k) {
      const double x = interior(b[2 * p], b[2 * p + 1], k);
      const State w1 = s1(x);
      const State w2 = s2(x + sigma * (t2 - t));
      for (std::size_t i = 0; i < n; ++i) {
        const double err = fam.carries(i) ? std::abs(w2[i] - w1[i]) : std::abs(w1[i] - frame[i]);
        c.max_error = std::max(c.max_error, err);
      }
    }
    rep.max_shift_error = std::max(rep.max_shift_error, c.max_error);
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace richwave
