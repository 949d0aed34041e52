#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace herding {

/// Raised when a parameter set violates its domain constraints.
class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an observable is requested on a state where it is not defined
/// (e.g. q with no herders).
class UndefinedObservableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an argument falls outside the interval an analytic quantity
/// is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A closed interval [lo, hi] that brackets a sign change of the drift.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// The fixed-point scan found a root count other than 1 or 3, or two roots
/// merging at a fold. Only happens within a few tolerances of eta_c.
class DegenerateRegimeError : public std::runtime_error {
 public:
  DegenerateRegimeError(const std::string& what, std::vector<Bracket> brackets)
      : std::runtime_error(what), brackets_(std::move(brackets)) {}

  const std::vector<Bracket>& brackets() const noexcept { return brackets_; }

 private:
  std::vector<Bracket> brackets_;
};

class NoTransitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoEquilibriumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace herding
