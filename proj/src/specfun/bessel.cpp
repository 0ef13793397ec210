#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "abdirac/errors.hpp"
#include "abdirac/specfun.hpp"

namespace abdirac::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 12.0;
constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

bool is_integer(double v) { return v == std::floor(v); }

// cos(pi v) and sin(pi v) with the argument reduced first, so that integer
// and half-integer orders give exact zeros.
double cos_pi(double v) {
  const double r = std::remainder(v, 2.0);
  if (std::abs(r) == 0.5) return 0.0;
  return std::cos(kPi * r);
}
double sin_pi(double v) {
  const double r = std::remainder(v, 2.0);
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(kPi * r);
}

// Steed's method: CF1 for J'/J at order nu, downward recurrence to
// mu = nu - nl, CF2 for (J' + iY')/(J + iY) at mu, Wronskian normalisation.
// Requires x >= 2 and nu >= 0.
BesselJY steed(double nu, double x) {
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  int isign = 1;
  double h = std::max(nu * xi, kTiny);
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_j: CF1 did not converge");

  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - xmu2;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= kMaxIter; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_j: CF2 did not converge");

  const double gam = (p - f) / q;
  const double rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
  double rymu = rjmu * gam;
  const double rymup = rymu * (p + q / gam);
  double ry1 = xmu * xi * rymu - rymup;
  const double scale = rjmu / rjl;
  for (int k = 1; k <= nl; ++k) {
    const double rytemp = (xmu + k) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  return {rjl1 * scale, rymu};
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!std::isfinite(nu)) throw InvalidParameter("BesselOrder: order must be finite");
}

BesselJY bessel_jy(double nu, double x) {
  if (nu < 0.0) throw DomainError("bessel_jy: order must be nonnegative");
  if (!(x >= 2.0) || !std::isfinite(x)) throw DomainError("bessel_jy: requires finite x >= 2");
  return steed(nu, x);
}

BesselJ::BesselJ(BesselOrder order) : nu_(order.value()) {
  reflect_ = 1.0;
  mu_ = nu_;
  if (nu_ < 0.0 && is_integer(nu_)) {
    mu_ = -nu_;
    reflect_ = (std::fmod(mu_, 2.0) == 0.0) ? 1.0 : -1.0;
  }
  singular_at_zero_ = mu_ < 0.0;

  // Series prefactor (x/2)^mu / Gamma(mu + 1).
  if (mu_ + 1.0 > 100.0) {
    use_log_ = true;
    inv_gamma_ = 0.0;
    log_gamma_ = std::lgamma(mu_ + 1.0);
  } else {
    use_log_ = false;
    inv_gamma_ = reciprocal_gamma(mu_ + 1.0);
    log_gamma_ = 0.0;
  }

  // Hankel coefficients a_k(mu) = prod_{j<=k} (4mu^2 - (2j-1)^2) / (k! 8^k),
  // split into the even (P) and odd (Q) series with alternating signs.
  const double four_mu2 = 4.0 * mu_ * mu_;
  std::vector<double> a{1.0};
  for (int k = 1; k < 400; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = a.back() * (four_mu2 - odd * odd) / (8.0 * k);
    a.push_back(next);
    if (next == 0.0) break;
  }
  // Pick the smallest x where the terms fall below double precision before
  // the series starts to diverge.
  auto smallest_term = [&](double x) {
    double best = 1.0;
    double prev = 1.0;
    double xp = 1.0;
    for (std::size_t k = 1; k < a.size(); ++k) {
      xp *= x;
      const double t = std::abs(a[k]) / xp;
      if (k >= 2 && t > prev) break;
      best = std::min(best, t);
      prev = t;
      if (t == 0.0) break;
    }
    return best;
  };
  constexpr double kTarget = 2e-17;
  double lo = kSeriesLimit, hi = kSeriesLimit;
  if (smallest_term(lo) > kTarget) {
    hi = 2.0 * lo;
    while (smallest_term(hi) > kTarget && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 60 && hi - lo > 0.25; ++it) {
      const double mid = 0.5 * (lo + hi);
      (smallest_term(mid) > kTarget ? lo : hi) = mid;
    }
  }
  x_asym_ = hi;

  // Keep the terms up to the smallest one at x = x_asym; beyond x_asym they
  // only get smaller.
  double xp = 1.0;
  double prev = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = std::abs(a[k]) / xp;
    if (k >= 2 && t > prev) break;
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    (k % 2 == 0 ? p_coef_ : q_coef_).push_back(sgn * a[k]);
    if (a[k] == 0.0 || t < 1e-18) break;
    prev = t;
    xp *= x_asym_;
  }
  const double phase = 0.5 * mu_ + 0.25;
  cos_phase_ = cos_pi(phase);
  sin_phase_ = sin_pi(phase);
}

double BesselJ::series(double x) const {
  const double half = 0.5 * x;
  double term;
  if (!use_log_) {
    term = std::pow(half, mu_) * inv_gamma_;
  } else {
    term = std::exp(mu_ * std::log(half) - log_gamma_);
  }
  if (term == 0.0) return 0.0;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + mu_));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double BesselJ::hankel(double x) const {
  const double y = 1.0 / (x * x);
  double p = 0.0;
  for (auto it = p_coef_.rbegin(); it != p_coef_.rend(); ++it) p = p * y + *it;
  double q = 0.0;
  for (auto it = q_coef_.rbegin(); it != q_coef_.rend(); ++it) q = q * y + *it;
  q /= x;
  const double sx = std::sin(x);
  const double cx = std::cos(x);
  // chi = x - (mu/2 + 1/4) pi
  const double cos_chi = cx * cos_phase_ + sx * sin_phase_;
  const double sin_chi = sx * cos_phase_ - cx * sin_phase_;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

double BesselJ::eval_nonneg(double x) const {
  if (x <= kSeriesLimit) return series(x);
  if (x >= x_asym_) return hankel(x);
  if (mu_ >= 0.0) return steed(mu_, x).j;
  // J_{-m} = cos(m pi) J_m - sin(m pi) Y_m for non-integer m.
  const double m = -mu_;
  const BesselJY jy = steed(m, x);
  return cos_pi(m) * jy.j - sin_pi(m) * jy.y;
}

double BesselJ::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("bessel_j: x must be >= 0");
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (mu_ == 0.0) return reflect_;
    if (singular_at_zero_)
      throw DomainError("bessel_j: J_nu(0) is infinite for negative non-integer nu = " +
                        std::to_string(nu_));
    return 0.0;
  }
  return reflect_ * eval_nonneg(x);
}

double bessel_j(BesselOrder order, double x) { return BesselJ(order)(x); }

}  // namespace abdirac::specfun
