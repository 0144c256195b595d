#pragma once

#include <functional>

namespace asekit::numerics {

enum class TailPolicy {
  /// Map (0, inf) onto (0, 1] with z = (1 - s) / s and integrate adaptively.
  substitution,
  /// Integrate (0, truncation_point] and add an analytic bound for the tail.
  truncation_with_bound,
};

struct QuadratureSpec {
  double rel_tolerance = 1e-9;
  double abs_tolerance = 1e-12;
  int max_subdivisions = 4000;
  TailPolicy tail_cutoff_policy = TailPolicy::substitution;

  // Only read in truncation_with_bound mode. The tail bound assumes
  // |f(z)| <= |f(Z)| (z / Z)^(-tail_decay_exponent) for z > Z.
  double truncation_point = 1e8;
  double tail_decay_exponent = 1.5;

  void validate() const;
};

struct BisectionSpec {
  double interval_tolerance = 1e-10;
  int max_iterations = 200;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Complete Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta(double a, double b);

/// Non-regularized lower incomplete Beta B(x; a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt.
/// Continued fraction on whichever side of the (a+1)/(a+b+2) crossover
/// converges fastest; the other side goes through the reflection identity.
/// Throws DomainError for x outside [0, 1] or non-positive a, b.
double incomplete_beta(double x, double a, double b);

/// Non-regularized lower incomplete Gamma gamma(s, x) = int_0^x t^(s-1) e^(-t) dt.
/// Series below x = s + 1, continued fraction for the upper function above.
double lower_incomplete_gamma(double s, double x);

/// Regularized P(s, x) = gamma(s, x) / Gamma(s), i.e. the Gamma(s, 1) CDF.
double regularized_lower_gamma(double s, double x);

// ---------------------------------------------------------------------------
// Quadrature and root finding
// ---------------------------------------------------------------------------

/// Adaptive 21-point Gauss-Kronrod on [a, b]. Throws ConvergenceError when
/// max_subdivisions is exhausted before the tolerance is met.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Integral of f over (0, inf). The integrand is never evaluated at 0 or at
/// infinity, so integrable endpoint behavior is fine.
QuadratureResult integrate_semi_infinite(const Integrand& f,
                                         const QuadratureSpec& spec = {});

/// Bisection on a sign-changing function. Throws BracketError when f(lo) and
/// f(hi) have the same sign, ConvergenceError after max_iterations.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const BisectionSpec& spec = {});

}  // namespace asekit::numerics
