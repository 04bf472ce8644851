#pragma once

#include <stdexcept>
#include <string>

namespace richwave {

/// A state violates the admissibility predicate of its system.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature hit its depth limit. Carries the subinterval with
/// the largest unresolved error estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double lo, double hi, double estimate)
      : std::runtime_error(what), lo_(lo), hi_(hi), estimate_(estimate) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double estimate() const noexcept { return estimate_; }

 private:
  double lo_;
  double hi_;
  double estimate_;
};

/// Monotone inversion failed; usually the map violates its slope bounds.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data does not satisfy the hypotheses a routine relies on
/// (unequal tails, single-family system, ...).
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A shape function is not strictly increasing.
class SmallnessError : public std::runtime_error {
 public:
  SmallnessError(const std::string& what, double min_slope)
      : std::runtime_error(what), min_slope_(min_slope) {}
  double min_slope() const noexcept { return min_slope_; }

 private:
  double min_slope_;
};

/// inf mu0 > sup lambda0 does not hold.
class OrderingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query before the finite decomposition time.
class NotDecomposedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Explicit scheme produced a non-finite value.
class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace richwave
