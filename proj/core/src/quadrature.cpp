#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "asekit/errors.hpp"
#include "asekit/numerics.hpp"

namespace asekit::numerics {
namespace {

// 21-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 10-point Gauss weights on the odd-indexed abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600386689775, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod21(const Integrand& f, double a, double b, int& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double result_k = fc * kWgk[10];
  double result_g = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    result_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  evaluations += 21;
  const double value = result_k * half;
  double error = std::fabs((result_k - result_g) * half);
  if (!std::isfinite(value)) {
    throw DomainError("integrate: integrand is not finite on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }
  // Floor at the rounding level of the segment so the loop can terminate.
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(value));
  return {a, b, value, error};
}

QuadratureResult adaptive(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  QuadratureResult out;
  std::priority_queue<Segment> heap;
  Segment first = kronrod21(f, a, b, out.evaluations);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  out.subdivisions = 1;

  auto tolerance = [&] { return std::max(spec.abs_tolerance, spec.rel_tolerance * std::fabs(total)); };

  while (total_error > tolerance()) {
    if (out.subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("integrate: tolerance not met after " +
                                 std::to_string(out.subdivisions) +
                                 " subdivisions (estimated error " +
                                 std::to_string(total_error) + ")",
                             total_error);
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("integrate: segment collapsed below machine resolution",
                             total_error);
    }
    heap.pop();
    const Segment left = kronrod21(f, worst.a, mid, out.evaluations);
    const Segment right = kronrod21(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++out.subdivisions;
  }

  // Re-sum from the segments to shed the drift of the running update.
  double sum = 0.0;
  double err = 0.0;
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : parts) {
    sum += s.value;
    err += s.error;
  }
  out.value = sum;
  out.error_estimate = err;
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tolerance > 0.0) || !(abs_tolerance > 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be strictly positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  }
  if (tail_cutoff_policy == TailPolicy::truncation_with_bound &&
      (!(truncation_point > 0.0) || !(tail_decay_exponent > 1.0))) {
    throw DomainError("QuadratureSpec: truncation needs a positive cutoff and decay exponent > 1");
  }
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: finite limits required; use integrate_semi_infinite");
  }
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = adaptive(f, b, a, spec);
    r.value = -r.value;
    return r;
  }
  return adaptive(f, a, b, spec);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();
  if (spec.tail_cutoff_policy == TailPolicy::substitution) {
    // z = (1 - s) / s sends s -> 0 to z -> inf, where floating point resolution
    // in s is finest; dz = ds / s^2.
    const Integrand mapped = [&f](double s) {
      const double z = (1.0 - s) / s;
      return f(z) / (s * s);
    };
    return adaptive(mapped, 0.0, 1.0, spec);
  }

  const double cutoff = spec.truncation_point;
  QuadratureResult body = adaptive(f, 0.0, cutoff, spec);
  const double tail_bound = std::fabs(f(cutoff)) * cutoff / (spec.tail_decay_exponent - 1.0);
  body.error_estimate += tail_bound;
  body.evaluations += 1;
  return body;
}

}  // namespace asekit::numerics
