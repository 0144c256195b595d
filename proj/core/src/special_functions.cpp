#include <cmath>
#include <limits>
#include <string>

#include "asekit/errors.hpp"
#include "asekit/numerics.hpp"

namespace asekit::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 10000;

// Modified Lentz evaluation of the incomplete Beta continued fraction
// (the even/odd d_m coefficients of the classical expansion).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("incomplete_beta: continued fraction did not converge",
                         std::numeric_limits<double>::quiet_NaN());
}

// x^a (1-x)^b / a * CF, valid on the fast-converging side of the crossover.
double lower_beta_direct(double x, double a, double b) {
  const double log_front = a * std::log(x) + b * std::log1p(-x);
  return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
}

double gamma_series(double s, double x) {
  // sum_{n>=0} x^n / (s (s+1) ... (s+n)), returned already scaled by x^s e^-x.
  double term = 1.0 / s;
  double sum = term;
  double ap = s;
  for (int n = 1; n <= kMaxTerms; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(s * std::log(x) - x);
    }
  }
  throw ConvergenceError("lower_incomplete_gamma: series did not converge",
                         std::numeric_limits<double>::quiet_NaN());
}

// Upper incomplete Gamma(s, x) by Lentz continued fraction, x >= s + 1.
double upper_gamma_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) {
      return std::exp(s * std::log(x) - x) * h;
    }
  }
  throw ConvergenceError("lower_incomplete_gamma: continued fraction did not converge",
                         std::numeric_limits<double>::quiet_NaN());
}

void check_beta_args(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("beta: parameters must be positive and finite (a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) + ")");
  }
}

}  // namespace

double beta(double a, double b) {
  check_beta_args(a, b);
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double x, double a, double b) {
  check_beta_args(a, b);
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete_beta: x must lie in [0, 1], got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) return lower_beta_direct(x, a, b);
  return beta(a, b) - lower_beta_direct(1.0 - x, b, a);
}

double lower_incomplete_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("lower_incomplete_gamma: s must be positive, got " + std::to_string(s));
  }
  if (!(x >= 0.0)) {
    throw DomainError("lower_incomplete_gamma: x must be non-negative, got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(s);
  if (x < s + 1.0) return gamma_series(s, x);
  return std::tgamma(s) - upper_gamma_continued_fraction(s, x);
}

double regularized_lower_gamma(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("regularized_lower_gamma: s must be positive, got " + std::to_string(s));
  }
  if (!(x >= 0.0)) {
    throw DomainError("regularized_lower_gamma: x must be non-negative");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double lg = std::lgamma(s);
  if (x < s + 1.0) return gamma_series(s, x) * std::exp(-lg);
  return 1.0 - upper_gamma_continued_fraction(s, x) * std::exp(-lg);
}

}  // namespace asekit::numerics
