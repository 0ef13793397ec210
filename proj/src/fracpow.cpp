#include "abdirac/fracpow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "abdirac/errors.hpp"
#include "abdirac/specfun.hpp"

namespace abdirac {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_positive_finite(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

// e^{i pi g} with exact values at integers and half-integers.
cplx unit_phase(double g) {
  const double r = std::remainder(g, 2.0);
  if (r == 0.0) return 1.0;
  if (std::abs(r) == 1.0) return -1.0;
  if (r == 0.5) return {0.0, 1.0};
  if (r == -0.5) return {0.0, -1.0};
  return {std::cos(std::numbers::pi * r), std::sin(std::numbers::pi * r)};
}

}  // namespace

double weber_schafheitlin(double nu, double mu, double lambda, double r, double s) {
  check_positive_finite(r, "weber_schafheitlin: r");
  check_positive_finite(s, "weber_schafheitlin: s");
  if (r >= s)
    throw UsageError("weber_schafheitlin: needs r < s; swap the roles of (nu, r) and (mu, s)");
  if (!(nu + mu - lambda + 1.0 > 0.0))
    throw DomainError("weber_schafheitlin: needs nu + mu - lambda + 1 > 0");
  if (!(lambda > -1.0)) throw DomainError("weber_schafheitlin: needs lambda > -1");
  if (!(nu > -1.0)) throw DomainError("weber_schafheitlin: needs nu > -1");
  const double a = 0.5 * (nu + mu - lambda + 1.0);
  const double b = 0.5 * (nu - mu - lambda + 1.0);
  const double c = nu + 1.0;
  const double inv = specfun::reciprocal_gamma(0.5 * (-nu + mu + lambda + 1.0)) *
                     specfun::reciprocal_gamma(c);
  if (inv == 0.0) return 0.0;
  const double pref = std::pow(r, nu) * specfun::gamma_fn(a) * inv /
                      (std::pow(2.0, lambda) * std::pow(s, nu - lambda + 1.0));
  const double z = (r / s) * (r / s);
  return pref * specfun::gauss_2f1(specfun::HypergeometricParams::make(a, b, c), z);
}

double weber_schafheitlin_diagonal(double nu, double lambda, double tau) {
  check_positive_finite(tau, "weber_schafheitlin_diagonal: tau");
  if (!(2.0 * nu - lambda + 1.0 > 0.0))
    throw DomainError("weber_schafheitlin_diagonal: needs 2 nu - lambda + 1 > 0");
  if (!(lambda > 0.0))
    throw DivergenceError("weber_schafheitlin_diagonal: needs lambda > 0 for convergence at r = s");
  if (!(nu > -1.0)) throw DomainError("weber_schafheitlin_diagonal: needs nu > -1");
  const double a = 0.5 * (2.0 * nu - lambda + 1.0);
  const double b = 0.5 * (1.0 - lambda);
  const double c = nu + 1.0;
  const double pref = std::pow(tau, lambda - 1.0) * specfun::gamma_fn(a) *
                      specfun::reciprocal_gamma(0.5 * (lambda + 1.0)) *
                      specfun::reciprocal_gamma(c) / std::pow(2.0, lambda);
  return pref * specfun::gauss_2f1_at_one(specfun::HypergeometricParams::make(a, b, c));
}

void check_kernel_power(const Channel& ch, double power) {
  if (!std::isfinite(power)) throw InvalidParameter("kernel: power must be finite");
  if (!(power < 0.0))
    throw InvalidParameter("kernel: the E-integral needs power < 0 (lambda = -1 - power > -1)");
  for (double nu : {ch.f_order(), ch.g_order()}) {
    if (!(2.0 * nu + power + 2.0 > 0.0))
      throw InvalidParameter("kernel: power " + std::to_string(power) +
                             " outside the convergence range for Bessel order " + std::to_string(nu));
  }
}

KernelABParts kernel_parts_closed_form(const Channel& ch, double power, double r, double s) {
  check_kernel_power(ch, power);
  const double lambda = -1.0 - power;
  return {kHalfPi * weber_schafheitlin(ch.f_order(), ch.f_order(), lambda, r, s),
          kHalfPi * weber_schafheitlin(ch.g_order(), ch.g_order(), lambda, r, s)};
}

KernelValue kernel_closed_form(const Channel& ch, double power, double r, double s) {
  return KernelValue::from_parts(kernel_parts_closed_form(ch, power, r, s));
}

KernelValue kernel_diagonal(const Channel& ch, double power, double tau) {
  check_kernel_power(ch, power);
  if (!(power < -1.0)) throw InvalidParameter("kernel_diagonal: the diagonal integral needs power < -1");
  const double lambda = -1.0 - power;
  return KernelValue::from_parts({kHalfPi * weber_schafheitlin_diagonal(ch.f_order(), lambda, tau),
                                  kHalfPi * weber_schafheitlin_diagonal(ch.g_order(), lambda, tau)});
}

double kernel_radial_weight(double nu, double power, double r, double s) {
  return std::pow(r, nu) / std::pow(s, nu + power + 2.0);
}

KernelQuadrature kernel_quadrature(const Channel& ch, double power, double r, double s,
                                   double e_max, double delta, double tolerance) {
  check_positive_finite(r, "kernel_quadrature: r");
  check_positive_finite(s, "kernel_quadrature: s");
  check_positive_finite(e_max, "kernel_quadrature: e_max");
  if (r == s) throw UsageError("kernel_quadrature: needs r != s");
  if (!(delta >= 0.0)) throw InvalidParameter("kernel_quadrature: delta must be >= 0");
  check_kernel_power(ch, power);

  // Panels short enough for the fastest oscillation cos((r+s)E), graded
  // geometrically towards E = 0 where the integrand behaves like
  // E^{2 nu + 1 + power}. The piece [0, e0] is integrated analytically from
  // the leading small-argument term of the Bessel product.
  const double h = std::min(0.5, 3.0 / (r + s));
  const int panels = std::max(1, static_cast<int>(std::ceil(e_max / h)));
  const double e0 = 1e-12 * h;
  QuadratureRule rule = geometric_panels(e0, h, 0.3);
  if (panels > 1) rule.append(gauss_panels(h, e_max, panels - 1));

  const specfun::BesselJ jf{specfun::BesselOrder(ch.f_order())};
  const specfun::BesselJ jg{specfun::BesselOrder(ch.g_order())};
  std::vector<double> pf(rule.size()), pg(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double e = rule.nodes[k];
    const double w = rule.weights[k] * std::pow(e, 1.0 + power) * kHalfPi;
    pf[k] = w * jf(e * r) * jf(e * s);
    pg[k] = w * jg(e * r) * jg(e * s);
  }
  auto origin_piece = [&](double nu) {
    const double beta = 2.0 * nu + 1.0 + power;
    const double rg = specfun::reciprocal_gamma(nu + 1.0);
    return kHalfPi * std::pow(0.25 * r * s, nu) * rg * rg * std::pow(e0, beta + 1.0) / (beta + 1.0);
  };
  const double origin_f = origin_piece(ch.f_order());
  const double origin_g = origin_piece(ch.g_order());
  auto damped = [&](double d) {
    KernelABParts out{origin_f, origin_g};
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double damp = d > 0.0 ? std::exp(-d * rule.nodes[k]) : 1.0;
      out.A += pf[k] * damp;
      out.B += pg[k] * damp;
    }
    return out;
  };

  KernelQuadrature q{};
  if (delta == 0.0) {
    q.parts = damped(0.0);
    q.converged = true;
    q.spread = 0.0;
  } else {
    const KernelABParts v1 = damped(delta);
    const KernelABParts v2 = damped(2.0 * delta);
    const KernelABParts v4 = damped(4.0 * delta);
    const KernelABParts fine{2.0 * v1.A - v2.A, 2.0 * v1.B - v2.B};
    const KernelABParts coarse{2.0 * v2.A - v4.A, 2.0 * v2.B - v4.B};
    const double scale = std::max({std::abs(fine.A), std::abs(fine.B), 1e-300});
    q.parts = fine;
    q.spread = std::max(std::abs(fine.A - coarse.A), std::abs(fine.B - coarse.B)) / scale;
    q.converged = q.spread <= tolerance;
  }
  q.value = KernelValue::from_parts(q.parts);
  return q;
}

std::string to_string(PowerConvention c) {
  return c == PowerConvention::absolute ? "absolute" : "principal";
}

PowerConvention power_convention_from_string(const std::string& name) {
  if (name == "absolute") return PowerConvention::absolute;
  if (name == "principal") return PowerConvention::principal;
  throw InvalidParameter("unknown power convention '" + name + "'");
}

RadialSpinor apply_fractional_power(const ChannelTransform& t, double gamma, const RadialSpinor& phi,
                                    PowerConvention conv) {
  if (!std::isfinite(gamma)) throw InvalidParameter("apply_fractional_power: gamma must be finite");
  const cplx minus_phase = conv == PowerConvention::absolute ? cplx(1.0) : unit_phase(gamma);
  return t.apply(phi, [&](double e) {
    const double m = std::pow(e, gamma);
    return std::pair<cplx, cplx>{m, m * minus_phase};
  });
}

RadialSpinor apply_fractional_power(const Channel& ch, double gamma, const RadialSpinor& phi,
                                    PowerConvention conv) {
  const ChannelTransform t(ch, phi.grid(), default_energy_grid());
  return apply_fractional_power(t, gamma, phi, conv);
}

ChannelSet angular_multiplier(double s, const ChannelSet& set) {
  ChannelSet out = set;
  for (int l = set.l_min(); l <= set.l_max(); ++l) {
    RadialSpinor& ch = out.at(l);
    const double mf = std::pow(1.0 + static_cast<double>(l) * l, 0.5 * s);
    const double mg = std::pow(1.0 + static_cast<double>(l + 1) * (l + 1), 0.5 * s);
    for (auto& v : ch.f()) v *= mf;
    for (auto& v : ch.g()) v *= mg;
  }
  return out;
}

}  // namespace abdirac
