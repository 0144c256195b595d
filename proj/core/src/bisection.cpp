#include <cmath>
#include <string>

#include "asekit/errors.hpp"
#include "asekit/numerics.hpp"

namespace asekit::numerics {

void BisectionSpec::validate() const {
  if (!(interval_tolerance > 0.0)) {
    throw DomainError("BisectionSpec: interval_tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw DomainError("BisectionSpec: max_iterations must be >= 1");
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectionSpec& spec) {
  spec.validate();
  if (!(lo <= hi)) {
    throw DomainError("bisect: requires lo <= hi");
  }
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) {
    throw DomainError("bisect: function is NaN at a bracket endpoint");
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] (f=" + std::to_string(f_lo) + ", " +
                       std::to_string(f_hi) + ")");
  }
  for (int it = 0; it < spec.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= spec.interval_tolerance || mid <= lo || mid >= hi) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= spec.interval_tolerance) return 0.5 * (lo + hi);
  throw ConvergenceError("bisect: bracket still " + std::to_string(hi - lo) + " wide after " +
                             std::to_string(spec.max_iterations) + " iterations",
                         hi - lo);
}

}  // namespace asekit::numerics
