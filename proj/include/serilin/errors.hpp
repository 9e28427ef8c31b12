#pragma once

#include <stdexcept>
#include <string>

namespace serilin {

/// Bad argument value (wrong size, out-of-range integer, NaN input).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fields that must share a grid do not.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A quadrature ratio whose denominator vanished.
class SingularEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forcing term with a negative net power of |grad u_0| at a point where it vanishes.
class SingularForcingError : public std::runtime_error {
 public:
  SingularForcingError(const std::string& what, int order, int point)
      : std::runtime_error(what), order_(order), point_(point) {}
  int order() const { return order_; }
  int point() const { return point_; }

 private:
  int order_;
  int point_;
};

/// A time-stepping solver produced non-finite or runaway values.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int order, long step)
      : std::runtime_error(what), order_(order), step_(step) {}
  int order() const { return order_; }
  long step() const { return step_; }

 private:
  int order_;
  long step_;
};

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace serilin
