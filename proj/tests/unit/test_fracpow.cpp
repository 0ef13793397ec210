#include <doctest.h>

#include <cmath>

#include "abdirac/errors.hpp"
#include "abdirac/fracpow.hpp"
#include "oracles.hpp"

using namespace abdirac;
using doctest::Approx;

namespace {

// |D|^gamma phi has slowly decaying tails, so the semigroup checks need the
// full default radial extent.
const RadialGrid& rgrid() {
  static const RadialGrid g = default_radial_grid();
  return g;
}
const EnergyGrid& egrid() {
  static const EnergyGrid g = default_energy_grid();
  return g;
}

RadialSpinor bump(double r0, double s, cplx af, cplx ag) {
  RadialSpinor out(rgrid());
  for (std::size_t j = 0; j < rgrid().size(); ++j) {
    const double e = std::exp(-(rgrid().nodes()[j] - r0) * (rgrid().nodes()[j] - r0) / (2 * s * s));
    out.f()[j] = af * e;
    out.g()[j] = ag * e;
  }
  return out;
}

double rel(const RadialSpinor& a, const RadialSpinor& b) { return l2_norm(a - b) / l2_norm(b); }

// Restricts the comparison to nodes inside [lo, hi].
double rel_interior(const RadialSpinor& a, const RadialSpinor& b, double lo, double hi) {
  double num = 0.0, den = 0.0;
  const auto& r = a.grid().nodes();
  const auto& w = a.grid().weights();
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j] < lo || r[j] > hi) continue;
    num += w[j] * (std::norm(a.f()[j] - b.f()[j]) + std::norm(a.g()[j] - b.g()[j]));
    den += w[j] * (std::norm(b.f()[j]) + std::norm(b.g()[j]));
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("Weber-Schafheitlin closed form against damped quadrature") {
  const double ref = oracle::weber_schafheitlin_damped(1.0, 1.0, 0.5, 1.0, 2.0);
  CHECK(weber_schafheitlin(1.0, 1.0, 0.5, 1.0, 2.0) == Approx(ref).epsilon(1e-5));
  const double ref2 = oracle::weber_schafheitlin_damped(-0.3, 0.7, 0.1, 0.5, 2.0);
  CHECK(weber_schafheitlin(-0.3, 0.7, 0.1, 0.5, 2.0) == Approx(ref2).epsilon(1e-5));
}

TEST_CASE("Weber-Schafheitlin scales like r^nu near r = 0") {
  const double a = weber_schafheitlin(1.5, 0.5, 0.2, 1e-3, 1.0);
  const double b = weber_schafheitlin(1.5, 0.5, 0.2, 2e-3, 1.0);
  CHECK(b / a == Approx(std::pow(2.0, 1.5)).epsilon(1e-5));
}

TEST_CASE("Weber-Schafheitlin preconditions") {
  CHECK_THROWS_AS(weber_schafheitlin(1, 1, 0.5, 2.0, 1.0), UsageError);
  CHECK_THROWS_AS(weber_schafheitlin(1, 1, 0.5, 1.0, 1.0), UsageError);
  CHECK_THROWS_AS(weber_schafheitlin(0.2, 0.2, 1.5, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(weber_schafheitlin(1, 1, -1.5, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(weber_schafheitlin_diagonal(1, 0.0, 1.0), DomainError);
}

TEST_CASE("diagonal value is the limit r -> s and matches direct quadrature") {
  for (auto [nu, gamma] : {std::pair{0.3, 0.9}, {1.0, 0.7}, {2.5, 1.2}, {0.0, 0.6}}) {
    const double lambda = 2 * gamma - 1;
    const double d = weber_schafheitlin_diagonal(nu, lambda, 1.0);
    CHECK(d == Approx(oracle::bessel_square_moment(nu, gamma)).epsilon(1e-5));
    // The off-diagonal value approaches it like (1 - r/s)^lambda for lambda < 1.
    const double d6 = d - weber_schafheitlin(nu, nu, lambda, 1.0 - 1e-6, 1.0);
    const double d8 = d - weber_schafheitlin(nu, nu, lambda, 1.0 - 1e-8, 1.0);
    if (lambda < 1.0)
      CHECK(std::log(d6 / d8) / std::log(100.0) == Approx(lambda).epsilon(0.05));
    else
      CHECK(std::abs(d8) < 1e-6 * d);
    // homogeneity of degree lambda - 1
    CHECK(weber_schafheitlin_diagonal(nu, lambda, 2.0) == Approx(d * std::pow(2.0, lambda - 1)).epsilon(1e-12));
  }
}

TEST_CASE("kernel parts and algebra") {
  const Channel ch = Channel::make(0, 0.3);
  const KernelValue v = kernel_closed_form(ch, -0.6, 0.5, 2.0);
  const KernelABParts p = kernel_parts_closed_form(ch, -0.6, 0.5, 2.0);
  CHECK(v.F - v.G == Approx(2 * p.A));
  CHECK(v.F + v.G == Approx(2 * p.B));
  const KernelABParts back = v.parts();
  CHECK(back.A == Approx(p.A));
  CHECK(back.B == Approx(p.B));
  const double tau = 3.0;
  CHECK(kernel_radial_weight(0.3, -0.6, tau, tau) == Approx(std::pow(tau, 0.6 - 2.0)));
}

TEST_CASE("kernel closed form against quadrature") {
  const Channel ch = Channel::make(1, 0.5);
  for (double power : {-0.4, -1.3}) {
    const KernelABParts cf = kernel_parts_closed_form(ch, power, 1.0, 2.5);
    const KernelQuadrature q = kernel_quadrature(ch, power, 1.0, 2.5, 30.0 / 0.005, 0.005);
    CHECK(q.converged);
    CHECK(q.parts.A == Approx(cf.A).epsilon(1e-3));
    CHECK(q.parts.B == Approx(cf.B).epsilon(1e-3));
  }
}

TEST_CASE("strongly decaying kernels need no damping") {
  const Channel ch = Channel::make(0, 0.3);
  const KernelABParts cf = kernel_parts_closed_form(ch, -2.5, 0.7, 1.1);
  const KernelQuadrature q = kernel_quadrature(ch, -2.5, 0.7, 1.1, 4000.0, 0.0);
  CHECK(q.parts.A == Approx(cf.A).epsilon(1e-3));
  CHECK(q.parts.B == Approx(cf.B).epsilon(1e-3));
}

TEST_CASE("kernel diagonal continues the off-diagonal values") {
  const Channel ch = Channel::make(2, 0.3);
  const KernelValue d = kernel_diagonal(ch, -1.5, 2.0);
  const KernelValue n = kernel_closed_form(ch, -1.5, 2.0 * (1 - 1e-8), 2.0);
  CHECK(n.F == Approx(d.F).epsilon(1e-4));
  CHECK(n.G == Approx(d.G).epsilon(1e-4));
  CHECK_THROWS_AS(kernel_diagonal(ch, -0.5, 2.0), InvalidParameter);
  CHECK_THROWS_AS(check_kernel_power(ch, 1.0), InvalidParameter);
}

TEST_CASE("kernel diagonal is positive") {
  for (int l : {-2, -1, 0, 1, 3})
    for (double alpha : {0.0, 0.3, 0.5, 0.9})
      for (double power : {-1.2, -1.5, -1.9})
        for (double tau : {0.1, 1.0, 7.0}) {
          const Channel ch = Channel::make(l, alpha);
          try {
            check_kernel_power(ch, power);
          } catch (const InvalidParameter&) {
            continue;
          }
          CHECK(kernel_diagonal(ch, power, tau).F > 0.0);
        }
}

TEST_CASE("fractional powers: identity, semigroup and the operator itself") {
  const Channel ch = Channel::make(0, 0.3);
  const ChannelTransform t(ch, rgrid(), egrid());
  const RadialSpinor phi = bump(8, 1, {1, 0.3}, {0, 0.8});
  CHECK(rel(apply_fractional_power(t, 0.0, phi), phi) < 1e-3);
  const RadialSpinor twice = apply_fractional_power(t, 1.0, apply_fractional_power(t, 1.0, phi));
  CHECK(rel(twice, apply_fractional_power(t, 2.0, phi)) < 1e-3);
  const RadialSpinor half = apply_fractional_power(t, 0.5, apply_fractional_power(t, 0.5, phi));
  // |D|^{1/2} phi decays slower still; the truncation at r_max dominates here.
  CHECK(rel(half, apply_fractional_power(t, 1.0, phi)) < 5e-3);

  const RadialSpinor d1 = apply_fractional_power(t, 1.0, phi, PowerConvention::principal);
  CHECK(rel_interior(d1, apply_radial_dirac(ch, phi), 2.0, 14.0) < 1e-2);
  const RadialSpinor dd = apply_radial_dirac(ch, apply_radial_dirac(ch, phi));
  CHECK(rel_interior(apply_fractional_power(t, 2.0, phi), dd, 2.0, 14.0) < 1e-2);
}

TEST_CASE("absolute fractional powers are symmetric") {
  const ChannelTransform t(Channel::make(-1, 0.5), rgrid(), egrid());
  const RadialSpinor a = bump(6, 1, 1.0, {0, 1}), b = bump(9, 1.5, {0.5, 0.5}, -1.0);
  const cplx l = inner(a, apply_fractional_power(t, 0.7, b));
  const cplx r = inner(apply_fractional_power(t, 0.7, a), b);
  CHECK(std::abs(l - r) < 1e-6 * std::abs(l));
}

TEST_CASE("angular multiplier") {
  ChannelSet set(rgrid(), -1, 1);
  for (int l = -1; l <= 1; ++l) set.set(l, bump(5 + l, 1, 1.0, 2.0));
  const ChannelSet id = angular_multiplier(0.0, set);
  for (int l = -1; l <= 1; ++l) CHECK(l2_norm(id.at(l) - set.at(l)) == 0.0);
  const ChannelSet m = angular_multiplier(-1.0, set);
  CHECK(std::abs(m.at(1).f()[700] - set.at(1).f()[700] / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(m.at(1).g()[700] - set.at(1).g()[700] / std::sqrt(5.0)) < 1e-15);
  const ChannelSet ab = angular_multiplier(0.4, angular_multiplier(-0.9, set));
  const ChannelSet c = angular_multiplier(-0.5, set);
  for (int l = -1; l <= 1; ++l) CHECK(l2_norm(ab.at(l) - c.at(l)) < 1e-14 * l2_norm(c.at(l)));
}

TEST_CASE("power convention names round trip") {
  for (auto c : {PowerConvention::absolute, PowerConvention::principal})
    CHECK(power_convention_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(power_convention_from_string("complex"), InvalidParameter);
}
