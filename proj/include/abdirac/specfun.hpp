#pragma once

// Special functions: Gamma, Pochhammer, Gauss 2F1 on [0, 1] and Bessel J
// of real order. All functions are pure and thread-safe.

#include <vector>

namespace abdirac::specfun {

// Gamma(x) for real x. Throws PoleError at 0, -1, -2, ...
double gamma_fn(double x);

// 1/Gamma(x); zero at the poles of Gamma, which is what closed forms with
// Gamma in a denominator want.
double reciprocal_gamma(double x);

// log|Gamma(x)| and the sign of Gamma(x). Throws PoleError at poles.
struct LogGamma {
  double log_abs;
  int sign;
};
LogGamma log_gamma(double x);

// Rising factorial (q)_n.
double pochhammer(double q, int n);

class HypergeometricParams {
 public:
  // Throws InvalidParameter if c is a nonpositive integer or any value is
  // not finite.
  static HypergeometricParams make(double a, double b, double c);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double excess() const { return c_ - a_ - b_; }
  // True when c - a - b > 0, i.e. the series converges at z = 1.
  bool converges_at_one() const { return excess() > 0.0; }

 private:
  HypergeometricParams(double a, double b, double c) : a_(a), b_(b), c_(c) {}
  double a_, b_, c_;
};

// 2F1(a, b; c; z) for 0 <= z < 1. Direct series up to z = 0.9, linear
// transformation to 1 - z beyond.
double gauss_2f1(const HypergeometricParams& p, double z);

// Partial sum of the defining series with n_terms terms (term 0 included).
double gauss_2f1_partial_sum(const HypergeometricParams& p, double z, int n_terms);

// Gauss summation Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).
// Throws DivergenceError when c - a - b <= 0.
double gauss_2f1_at_one(const HypergeometricParams& p);

// Order of a Bessel function. Any finite real order is accepted; negative
// non-integer orders are needed for the singular component of the critical
// partial-wave channel and by the Lommel integrals.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

// Evaluator for J_nu(x), x >= 0, with the order-dependent setup done once.
// Branches: power series for x <= 12, Hankel asymptotic expansion once its
// smallest term drops below double precision, Steed's continued fractions
// (with Wronskian normalisation) in between.
class BesselJ {
 public:
  explicit BesselJ(BesselOrder order);

  double operator()(double x) const;
  double order() const { return nu_; }
  // Smallest x at which the asymptotic branch is used.
  double asymptotic_threshold() const { return x_asym_; }

 private:
  double eval_nonneg(double x) const;
  double series(double x) const;
  double hankel(double x) const;

  double nu_;        // requested order
  double mu_;        // order actually evaluated (|nu| for negative integers)
  double reflect_;   // sign applied for negative integer orders
  bool singular_at_zero_;
  bool use_log_;      // large mu: prefactor via lgamma
  double inv_gamma_;  // 1/Gamma(mu+1)
  double log_gamma_;  // lgamma(mu+1)
  std::vector<double> p_coef_, q_coef_;
  double cos_phase_, sin_phase_;
  double x_asym_;
};

// Convenience wrapper; prefer BesselJ when evaluating one order many times.
double bessel_j(BesselOrder order, double x);

// J_nu and Y_nu together (nu >= 0, x > 0); used for negative orders and
// exposed for tests.
struct BesselJY {
  double j;
  double y;
};
BesselJY bessel_jy(double nu, double x);

}  // namespace abdirac::specfun
