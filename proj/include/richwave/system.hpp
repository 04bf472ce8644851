#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "richwave/errors.hpp"
#include "richwave/state.hpp"

namespace richwave {

/// One characteristic family: a constant Lagrangian speed and the
/// contiguous block of components it transports.
struct Family {
  double lagrangian_speed = 0.0;
  std::size_t first = 0;  ///< first component index
  std::size_t count = 0;  ///< multiplicity

  bool carries(std::size_t i) const noexcept { return i >= first && i < first + count; }
};

enum class ModelKind { generic, born_infeld, augmented_born_infeld };

using ScalarField = std::function<double(const State&)>;

struct Admissibility {
  std::string description;
  std::function<bool(const State&)> test;
};

/// Linearly degenerate rich system of diagonal form whose entropy densities
/// all coincide. Eulerian speeds are never stored: they follow from the
/// density N, the flux M and the Lagrangian speeds via N*lambda_i - c_i = M.
class RichSystem {
 public:
  RichSystem(std::string name, std::vector<Family> families, ScalarField density,
             ScalarField flux, Admissibility admissible,
             ModelKind kind = ModelKind::generic, double parameter = 0.0)
      : name_(std::move(name)),
        families_(std::move(families)),
        density_(std::move(density)),
        flux_(std::move(flux)),
        admissible_(std::move(admissible)),
        kind_(kind),
        parameter_(parameter) {
    if (families_.empty()) throw std::invalid_argument("RichSystem: no families");
    std::size_t next = 0;
    for (std::size_t p = 0; p < families_.size(); ++p) {
      const Family& f = families_[p];
      if (f.first != next || f.count == 0)
        throw std::invalid_argument("RichSystem: families must partition components contiguously");
      if (p > 0 && !(f.lagrangian_speed > families_[p - 1].lagrangian_speed))
        throw std::invalid_argument("RichSystem: Lagrangian speeds must increase strictly");
      next += f.count;
      for (std::size_t k = 0; k < f.count; ++k) family_of_.push_back(p);
    }
    if (next > kMaxComponents) throw std::invalid_argument("RichSystem: too many components");
    n_ = next;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t family_count() const noexcept { return families_.size(); }
  const std::vector<Family>& families() const noexcept { return families_; }
  const Family& family(std::size_t p) const { return families_.at(p); }
  std::size_t family_of(std::size_t i) const { return family_of_.at(i); }
  double lagrangian_speed(std::size_t i) const { return families_[family_of(i)].lagrangian_speed; }
  ModelKind kind() const noexcept { return kind_; }
  /// Model parameter (a for the Born-Infeld models).
  double parameter() const noexcept { return parameter_; }
  const Admissibility& admissibility() const noexcept { return admissible_; }

  bool admissible(const State& w) const { return w.size() == n_ && admissible_.test(w); }

  void require_admissible(const State& w) const {
    if (w.size() != n_) throw DomainError(name_ + ": state has wrong number of components");
    if (!admissible_.test(w)) {
      std::ostringstream os;
      os << name_ << ": inadmissible state (" << admissible_.description << " violated) at (";
      for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ", " : "") << w[i];
      os << ")";
      throw DomainError(os.str());
    }
  }

  double density(const State& w) const { return density_(w); }
  double flux(const State& w) const { return flux_(w); }
  /// M/N, the Lagrangian drift dX/dt at fixed z.
  double drift(const State& w) const { return flux_(w) / density_(w); }

  /// Eulerian speed of component i without the admissibility check.
  double speed(std::size_t i, const State& w) const {
    return (flux_(w) + lagrangian_speed(i)) / density_(w);
  }

  double speed_of_family(std::size_t p, const State& w) const {
    return (flux_(w) + families_.at(p).lagrangian_speed) / density_(w);
  }

 private:
  std::string name_;
  std::vector<Family> families_;
  std::vector<std::size_t> family_of_;
  ScalarField density_;
  ScalarField flux_;
  Admissibility admissible_;
  ModelKind kind_;
  double parameter_;
  std::size_t n_ = 0;
};

/// Eulerian eigenvalue lambda_i(w) = (M(w) + c_i)/N(w).
inline double eigenvalue(const RichSystem& sys, std::size_t i, const State& w) {
  sys.require_admissible(w);
  if (i >= sys.size()) throw std::out_of_range("eigenvalue: component index");
  return sys.speed(i, w);
}

/// lambda_i at the state at infinity. Linear degeneracy makes the i-th slot
/// irrelevant, so the eigenvalue is evaluated at w_bar directly.
inline double bar_lambda(const RichSystem& sys, std::size_t i, const State& w_bar) {
  return eigenvalue(sys, i, w_bar);
}

/// Reduced Born-Infeld system: w = (mu, lambda), mu rides the slow family
/// (c = -a), lambda the fast one (c = +a).
inline RichSystem model_bi(double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("model_bi: a must be >= 1");
  std::vector<Family> families{{-a, 0, 1}, {a, 1, 1}};
  auto density = [a](const State& w) { return 2.0 * a / (w[0] - w[1]); };
  auto flux = [a](const State& w) { return a * (w[0] + w[1]) / (w[0] - w[1]); };
  Admissibility adm{"mu > lambda", [](const State& w) { return w[0] > w[1]; }};
  return RichSystem("born-infeld", std::move(families), density, flux, std::move(adm),
                    ModelKind::born_infeld, a);
}

/// Augmented Born-Infeld skeleton: w = (mu, q, lambda) with one passive
/// middle invariant q carried by the c = 0 family.
inline RichSystem model_abi(double a) {
  if (!(a >= 1.0)) throw std::invalid_argument("model_abi: a must be >= 1");
  std::vector<Family> families{{-a, 0, 1}, {0.0, 1, 1}, {a, 2, 1}};
  auto density = [a](const State& w) { return 2.0 * a / (w[0] - w[2]); };
  auto flux = [a](const State& w) { return a * (w[0] + w[2]) / (w[0] - w[2]); };
  Admissibility adm{"mu > lambda", [](const State& w) { return w[0] > w[2]; }};
  return RichSystem("augmented-born-infeld", std::move(families), density, flux,
                    std::move(adm), ModelKind::augmented_born_infeld, a);
}

/// Index of mu and lambda in the Born-Infeld style models.
struct BornInfeldSlots {
  std::size_t mu;
  std::size_t lambda;
};

inline BornInfeldSlots born_infeld_slots(const RichSystem& sys) {
  switch (sys.kind()) {
    case ModelKind::born_infeld: return {0, 1};
    case ModelKind::augmented_born_infeld: return {0, 2};
    default: throw UnsupportedModelError(sys.name() + ": not a Born-Infeld model");
  }
}

struct DiagnosticEntry {
  std::string check;
  std::size_t probe = 0;
  bool passed = true;
  double value = 0.0;
  std::string detail;
};

struct SystemDiagnostics {
  std::vector<DiagnosticEntry> entries;
  double max_identity_residual = 0.0;    ///< max |N lambda_i - c_i - M| / scale
  double max_degeneracy_change = 0.0;    ///< max relative change under own-family perturbation

  bool ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.passed; }));
  }
};

/// Samples the structural invariants of a system at the given probe states.
/// Failures are recorded, never thrown.
inline SystemDiagnostics validate_system(const RichSystem& sys, const std::vector<State>& probes,
                                         double degeneracy_tol = 1e-12,
                                         double identity_tol = 1e-13) {
  SystemDiagnostics out;
  const std::size_t n = sys.size();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const State& w = probes[k];
    if (!sys.admissible(w)) {
      out.entries.push_back({"admissible", k, false, 0.0, sys.admissibility().description + " violated"});
      continue;
    }
    out.entries.push_back({"admissible", k, true, 0.0, {}});

    const double N = sys.density(w);
    const double M = sys.flux(w);
    out.entries.push_back({"density-positive", k, N > 0.0 && std::isfinite(N), N, {}});

    // N lambda_i - c_i = M
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = sys.lagrangian_speed(i);
      const double lam = sys.speed(i, w);
      const double scale = std::max({1.0, std::abs(M), std::abs(c), std::abs(N * lam)});
      residual = std::max(residual, std::abs(N * lam - c - M) / scale);
    }
    out.max_identity_residual = std::max(out.max_identity_residual, residual);
    out.entries.push_back({"speed-identity", k, residual <= identity_tol, residual, {}});

    // ordering: non-decreasing within a family, strictly increasing across
    bool ordered = true;
    for (std::size_t i = 1; i < n; ++i) {
      const double prev = sys.speed(i - 1, w);
      const double cur = sys.speed(i, w);
      const bool same = sys.family_of(i) == sys.family_of(i - 1);
      if (same ? !(cur >= prev) : !(cur > prev)) ordered = false;
    }
    out.entries.push_back({"speed-ordering", k, ordered, 0.0, {}});

    // linear degeneracy by finite perturbation of own-family components
    double change = 0.0;
    bool perturbed_any = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Family& f = sys.family(sys.family_of(i));
      const double base = sys.speed(i, w);
      for (std::size_t j = f.first; j < f.first + f.count; ++j) {
        const double delta = 1e-3 * (1.0 + std::abs(w[j]));
        bool done = false;
        for (double sgn : {1.0, -1.0}) {
          State v = w;
          v[j] += sgn * delta;
          if (!sys.admissible(v)) continue;
          const double moved = sys.speed(i, v);
          change = std::max(change, std::abs(moved - base) / std::max(1.0, std::abs(base)));
          done = true;
          break;
        }
        perturbed_any = perturbed_any && done;
      }
    }
    out.max_degeneracy_change = std::max(out.max_degeneracy_change, change);
    out.entries.push_back({"linear-degeneracy", k, perturbed_any && change < degeneracy_tol, change,
                           perturbed_any ? std::string{} : "no admissible perturbation"});
  }
  return out;
}

}  // namespace richwave
