#include <cmath>
#include <string>

#include "abdirac/errors.hpp"
#include "abdirac/specfun.hpp"

namespace abdirac::specfun {

namespace {

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument is not finite");
}

}  // namespace

// std::tgamma (glibc) is accurate to a few ulp on the whole real line and
// already applies the reflection formula for x < 0.
double gamma_fn(double x) {
  check_finite(x, "gamma_fn");
  if (is_pole(x)) throw PoleError("gamma_fn: pole at x = " + std::to_string(x));
  return std::tgamma(x);
}

double reciprocal_gamma(double x) {
  check_finite(x, "reciprocal_gamma");
  if (is_pole(x)) return 0.0;
  if (x > 171.0) return std::exp(-std::lgamma(x));
  return 1.0 / std::tgamma(x);
}

LogGamma log_gamma(double x) {
  check_finite(x, "log_gamma");
  if (is_pole(x)) throw PoleError("log_gamma: pole at x = " + std::to_string(x));
  int sign = 1;
  const double value = ::lgamma_r(x, &sign);
  return {value, sign};
}

double pochhammer(double q, int n) {
  if (n < 0) throw InvalidParameter("pochhammer: negative n");
  double out = 1.0;
  for (int k = 0; k < n; ++k) out *= q + k;
  return out;
}

}  // namespace abdirac::specfun
