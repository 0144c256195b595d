#pragma once

#include <stdexcept>
#include <string>

namespace asekit {

/// Input outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative routine (quadrature, continued fraction, root finder) did not
/// reach its tolerance. `achieved_error()` carries the best estimate reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// A root bracket does not straddle a sign change, or could not be expanded
/// to one within its cap.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace asekit
