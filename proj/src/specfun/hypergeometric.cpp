#include <cmath>
#include <string>

#include "abdirac/errors.hpp"
#include "abdirac/specfun.hpp"

namespace abdirac::specfun {

namespace {

constexpr int kMaxTerms = 2'000'000;

// Direct summation of the hypergeometric series. Stops once the terms are
// decreasing and negligible; the tail is then bounded by a geometric series
// with ratio close to z.
double series(double a, double b, double c, double z) {
  double sum = 1.0;
  double term = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(ratio) < 1.0 && std::abs(term) <= 1e-17 * std::abs(sum) * (1.0 - std::abs(ratio)))
      return sum;
  }
  throw ConvergenceError("gauss_2f1: series did not converge");
}

double gamma_ratio(double num1, double num2, double den1, double den2) {
  const double r1 = reciprocal_gamma(den1);
  const double r2 = reciprocal_gamma(den2);
  if (r1 == 0.0 || r2 == 0.0) return 0.0;
  const LogGamma g1 = log_gamma(num1);
  const LogGamma g2 = log_gamma(num2);
  const LogGamma d1 = log_gamma(den1);
  const LogGamma d2 = log_gamma(den2);
  return g1.sign * g2.sign * d1.sign * d2.sign *
         std::exp(g1.log_abs + g2.log_abs - d1.log_abs - d2.log_abs);
}

// DLMF 15.8.4 with w = 1 - z; valid when c - a - b is not an integer.
double one_minus_z(double a, double b, double c, double z) {
  const double w = 1.0 - z;
  const double s = c - a - b;
  const double t1 = gamma_ratio(c, s, c - a, c - b);
  const double t2 = gamma_ratio(c, -s, a, b);
  double out = 0.0;
  if (t1 != 0.0) out += t1 * series(a, b, 1.0 - s, w);
  if (t2 != 0.0) out += t2 * std::pow(w, s) * series(c - a, c - b, 1.0 + s, w);
  return out;
}

}  // namespace

HypergeometricParams HypergeometricParams::make(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw InvalidParameter("HypergeometricParams: non-finite parameter");
  if (c <= 0.0 && c == std::floor(c))
    throw InvalidParameter("HypergeometricParams: c = " + std::to_string(c) +
                           " is a nonpositive integer");
  return HypergeometricParams(a, b, c);
}

double gauss_2f1_partial_sum(const HypergeometricParams& p, double z, int n_terms) {
  double sum = 0.0;
  double term = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    sum += term;
    term *= (p.a() + n) * (p.b() + n) / ((p.c() + n) * (n + 1.0)) * z;
  }
  return sum;
}

double gauss_2f1(const HypergeometricParams& p, double z) {
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0, 1)");
  if (z == 0.0 || p.a() == 0.0 || p.b() == 0.0) return 1.0;
  const double a = p.a(), b = p.b(), c = p.c();
  if (z <= 0.9) return series(a, b, c, z);

  const double s = c - a - b;
  const double dist = std::abs(s - std::round(s));
  if (dist > 1e-3) return one_minus_z(a, b, c, z);
  // c - a - b (nearly) integer: the two terms of the transformation have
  // cancelling poles. Close enough to z = 0.9 the plain series is still
  // cheap; otherwise perturb b symmetrically and extrapolate, which
  // removes the O(delta^2) error of the symmetric average.
  if (z <= 0.999) return series(a, b, c, z);
  constexpr double delta = 4e-3;
  const double f1 = 0.5 * (one_minus_z(a, b + delta, c, z) + one_minus_z(a, b - delta, c, z));
  const double f2 =
      0.5 * (one_minus_z(a, b + 2 * delta, c, z) + one_minus_z(a, b - 2 * delta, c, z));
  const double out = (4.0 * f1 - f2) / 3.0;
  if (!std::isfinite(out)) throw ConvergenceError("gauss_2f1: transformation failed");
  return out;
}

double gauss_2f1_at_one(const HypergeometricParams& p) {
  if (!p.converges_at_one())
    throw DivergenceError("gauss_2f1_at_one: c - a - b = " + std::to_string(p.excess()) +
                          " <= 0, series diverges at z = 1");
  return gamma_ratio(p.c(), p.excess(), p.c() - p.a(), p.c() - p.b());
}

}  // namespace abdirac::specfun
