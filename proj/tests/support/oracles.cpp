#include "oracles.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

using mp = boost::multiprecision::cpp_bin_float_50;
using GL = boost::math::quadrature::gauss<double, 20>;

void append_panel(Rule& rule, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.x.push_back(mid - half * x[i]);
    rule.w.push_back(half * w[i]);
    rule.x.push_back(mid + half * x[i]);
    rule.w.push_back(half * w[i]);
  }
}

// Panels [2^-k, 2^-(k-1)] for k = levels..1, covering (2^-levels, 1].
Rule dyadic_rule(int levels) {
  Rule r;
  for (int k = levels; k >= 1; --k) append_panel(r, std::ldexp(1.0, -k), std::ldexp(1.0, -k + 1));
  return r;
}

}  // namespace

Rule gauss_rule(double a, double b, int panels) {
  Rule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) append_panel(r, a + p * h, a + (p + 1) * h);
  return r;
}

double bessel_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const mp half = mp(x) / 2;
  const mp q = -half * half;
  mp term = pow(half, mp(nu)) / boost::math::tgamma(mp(nu) + 1);
  mp sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (mp(k) * (mp(k) + mp(nu)));
    sum += term;
    if (k > half && abs(term) < mp("1e-40")) break;
  }
  return static_cast<double>(sum);
}

long double hyp2f1_series(double a, double b, double c, long double z) {
  long double term = 1.0L, sum = 1.0L;
  for (long n = 0; n < 2'000'000'000L; ++n) {
    const long double ratio = (a + n) * (b + n) / ((c + n) * (1.0L + n)) * z;
    term *= ratio;
    sum += term;
    // Term ratios increase towards z, so z / (1 - z) bounds the remaining
    // tail relative to the current term.
    if (n > 50 && ratio < 1.0L && std::fabs(term) * z / (1.0L - z) < 1e-17L * std::fabs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1_series: no convergence");
}

double hyp2f1_at_one_extrapolated(double a, double b, double c) {
  const double s = c - a - b;
  Eigen::Matrix3d m;
  Eigen::Vector3d y;
  const double d[3] = {1e-6, 2e-6, 4e-6};
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = std::pow(d[i], s);
    m(i, 2) = d[i];
    y(i) = static_cast<double>(hyp2f1_series(a, b, c, 1.0L - static_cast<long double>(d[i])));
  }
  return m.colPivHouseholderQr().solve(y)(0);
}

double weber_schafheitlin_damped(double nu, double mu, double lambda, double r, double s, double eps) {
  const double p = nu + mu - lambda;
  if (!(p > -1.0) || !(lambda > -1.0)) throw std::invalid_argument("weber_schafheitlin_damped: divergent");
  const int levels = 40;
  const double t0 = std::ldexp(1.0, -levels);
  // Leading small-t behaviour below t0.
  const double lead = std::pow(r / 2, nu) * std::pow(s / 2, mu) /
                      (std::tgamma(nu + 1.0) * std::tgamma(mu + 1.0)) * std::pow(t0, p + 1.0) / (p + 1.0);
  Rule rule = dyadic_rule(levels);
  const double t_max = 36.0 / eps;
  const Rule far = gauss_rule(1.0, t_max, static_cast<int>(std::ceil((t_max - 1.0) / 2.0)));
  rule.x.insert(rule.x.end(), far.x.begin(), far.x.end());
  rule.w.insert(rule.w.end(), far.w.begin(), far.w.end());

  std::vector<double> g(rule.x.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = rule.x[i];
    g[i] = boost::math::cyl_bessel_j(nu, r * t) * boost::math::cyl_bessel_j(mu, s * t) * std::pow(t, -lambda);
  }
  auto damped = [&](double e) {
    double acc = lead;
    for (std::size_t i = 0; i < g.size(); ++i) acc += rule.w[i] * g[i] * std::exp(-e * rule.x[i]);
    return acc;
  };
  const double i1 = damped(eps), i2 = damped(2 * eps), i4 = damped(4 * eps);
  return (8.0 * i1 - 6.0 * i2 + i4) / 3.0;
}

double bessel_square_moment(double nu, double gamma) {
  const double p = 2.0 * nu + 1.0 - 2.0 * gamma;
  if (!(p > -1.0) || !(gamma > 0.5)) throw std::invalid_argument("bessel_square_moment: divergent");
  const int levels = 40;
  const double t0 = std::ldexp(1.0, -levels);
  const double c = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
  double acc = c * c * std::pow(t0, p + 1.0) / (p + 1.0);
  Rule rule = dyadic_rule(levels);
  const double t_cut = 4000.0;
  const Rule far = gauss_rule(1.0, t_cut, 2000);
  rule.x.insert(rule.x.end(), far.x.begin(), far.x.end());
  rule.w.insert(rule.w.end(), far.w.begin(), far.w.end());
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double t = rule.x[i], j = boost::math::cyl_bessel_j(nu, t);
    acc += rule.w[i] * j * j * std::pow(t, 1.0 - 2.0 * gamma);
  }
  // J^2 = (J^2 + Y^2)/2 + oscillation; the first part is
  // (1 / (pi t)) (1 + (4 nu^2 - 1) / (8 t^2) + ...).
  const double g2 = 2.0 * gamma;
  acc += (std::pow(t_cut, 1.0 - g2) / (g2 - 1.0) +
          (4.0 * nu * nu - 1.0) / 8.0 * std::pow(t_cut, -1.0 - g2) / (g2 + 1.0)) /
         std::numbers::pi;
  return acc;
}

}  // namespace oracle
