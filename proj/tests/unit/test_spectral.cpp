#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abdirac/errors.hpp"
#include "abdirac/spectral.hpp"
#include "abdirac/specfun.hpp"

using namespace abdirac;
using doctest::Approx;

namespace {

const RadialGrid& rgrid() {
  static const RadialGrid g = make_radial_grid(20.0, 2000, QuadratureScheme::composite_gauss);
  return g;
}
const EnergyGrid& egrid() {
  static const EnergyGrid g = make_energy_grid(20.0, 2000, QuadratureScheme::composite_gauss);
  return g;
}

RadialSpinor bump(const RadialGrid& g, double r0, double s, cplx af, cplx ag) {
  RadialSpinor out(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double e = std::exp(-(g.nodes()[j] - r0) * (g.nodes()[j] - r0) / (2 * s * s));
    out.f()[j] = af * e;
    out.g()[j] = ag * e;
  }
  return out;
}

double rel(const RadialSpinor& a, const RadialSpinor& b) { return l2_norm(a - b) / l2_norm(b); }

// sup over nodes in [lo, hi] of |a - b|
double interior_sup(const RadialSpinor& a, const RadialSpinor& b, double lo, double hi) {
  double m = 0.0;
  const auto& r = a.grid().nodes();
  for (std::size_t j = 0; j < r.size(); ++j)
    if (r[j] >= lo && r[j] <= hi)
      m = std::max({m, std::abs(a.f()[j] - b.f()[j]), std::abs(a.g()[j] - b.g()[j])});
  return m;
}

}  // namespace

TEST_CASE("channel bookkeeping") {
  const Channel c = Channel::make(-1, 0.5);
  CHECK(c.eps() == -1);
  CHECK(c.nu_f() == 0.5);
  CHECK(c.nu_g() == 0.5);
  CHECK(c.critical());

  const Channel regular = Channel::make(2, 0.3);
  CHECK(regular.branch() == 1);
  CHECK(regular.f_order() == Approx(2.3));
  CHECK(regular.g_order() == Approx(3.3));
  const Channel negative = Channel::make(-3, 0.3);
  CHECK(negative.branch() == -1);
  CHECK(negative.f_order() == Approx(2.7));
  CHECK(negative.g_order() == Approx(1.7));
}

TEST_CASE("critical channel takes the more regular branch") {
  const Channel a = Channel::make(-1, 0.7);  // kappa = -0.3
  CHECK(a.branch() == 1);
  CHECK(a.f_order() == Approx(-0.3));
  CHECK(a.g_order() == Approx(0.7));
  const Channel b = Channel::make(-1, 0.3);  // kappa = -0.7
  CHECK(b.branch() == -1);
  CHECK(b.f_order() == Approx(0.7));
  CHECK(b.g_order() == Approx(-0.3));
}

TEST_CASE("eigenfunction behaviour at the origin") {
  const Channel ch = Channel::make(1, 0.3);
  const RadialGrid g = make_radial_grid(1e-3, 16, QuadratureScheme::uniform_trapezoid);
  const double E = 2.0;
  const RadialSpinor chi = eigenfunction(ch, E, g);
  const double c = std::sqrt(std::numbers::pi / 2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = E * g.nodes()[j];
    const double lead = std::pow(x / 2, 1.3) / specfun::gamma_fn(2.3);
    CHECK(chi.f()[j].real() / c == Approx(lead).epsilon(1e-6));
  }
  CHECK(eigen_normalization(EigenNormalization::isometric) == Approx(1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(eigenfunction(ch, 0.0, g), InvalidParameter);
}

TEST_CASE("eigen matrix rows carry the negative energy partner") {
  const Channel ch = Channel::make(0, 0.4);
  const EigenMatrix m = eigen_matrix(ch, 1.3, 2.0);
  const RadialGrid g = make_radial_grid(2.0, 16, QuadratureScheme::uniform_trapezoid);
  CHECK(m[1][0] == -m[0][0]);
  CHECK(m[1][1] == m[0][1]);
  const RadialSpinor chi = eigenfunction(ch, 1.3, g);
  CHECK(std::abs(chi.f().back() - m[0][0]) < 1e-14);
  CHECK(std::abs(chi.g().back() - m[0][1]) < 1e-14);
}

TEST_CASE("eigenfunctions solve the radial equation for both energy signs") {
  const RadialGrid g = make_radial_grid(20.0, 4000, QuadratureScheme::uniform_trapezoid);
  for (int l : {-2, -1, 0, 1}) {
    const Channel ch = Channel::make(l, 0.3);
    const RadialSpinor chi = eigenfunction(ch, 1.0, g);
    CHECK(interior_sup(apply_radial_dirac(ch, chi), chi, 1.0, 19.0) < 1e-4);
    // chi_{-E} = (f, -g)
    RadialSpinor neg = chi;
    for (std::size_t j = 0; j < g.size(); ++j) neg.g()[j] = -chi.g()[j];
    CHECK(interior_sup(apply_radial_dirac(ch, neg), cplx(-1.0) * neg, 1.0, 19.0) < 1e-4);
  }
}

TEST_CASE("eigen residual is second order in the grid spacing") {
  for (int l : {0, -1}) {
    const Channel ch = Channel::make(l, 0.3);
    const double h1 = eigen_residual_sup(ch, 1.0, make_radial_grid(20.0, 1000, QuadratureScheme::uniform_trapezoid), 1.0, 19.0);
    const double h2 = eigen_residual_sup(ch, 1.0, make_radial_grid(20.0, 2000, QuadratureScheme::uniform_trapezoid), 1.0, 19.0);
    CHECK(std::log2(h1 / h2) >= 1.8);
  }
}

TEST_CASE("radial operator is symmetric on supported data") {
  const Channel ch = Channel::make(1, 0.3);
  const RadialSpinor a = bump(rgrid(), 6, 1, {1, 0.5}, {0, 1});
  const RadialSpinor b = bump(rgrid(), 7, 1.2, {0.3, -1}, {2, 0});
  const cplx lhs = inner(a, apply_radial_dirac(ch, b));
  const cplx rhs = inner(apply_radial_dirac(ch, a), b);
  // exact symmetry only up to the finite-difference truncation error
  CHECK(std::abs(lhs - rhs) < 1e-4 * std::abs(lhs));
  CHECK(l2_norm(apply_radial_dirac(ch, RadialSpinor(rgrid()))) == 0.0);
}

TEST_CASE("transform is an isometry with a working inverse") {
  for (int l : {-2, -1, 0, 3}) {
    const ChannelTransform t(Channel::make(l, 0.3), rgrid(), egrid());
    const RadialSpinor phi = bump(rgrid(), 5, std::sqrt(0.5), 1.0, 0.0);
    const SpectralCoeff c = t.forward(phi);
    CHECK(std::abs(l2_norm(c) - l2_norm(phi)) < 1e-3 * l2_norm(phi));
    CHECK(rel(t.inverse(c), phi) < 1e-3);
  }
  const ChannelTransform t(Channel::make(0, 0.3), rgrid(), egrid());
  CHECK(l2_norm(t.forward(RadialSpinor(rgrid()))) == 0.0);
  CHECK(l2_norm(t.inverse(SpectralCoeff(egrid()))) == 0.0);
}

TEST_CASE("inverse transform is linear and batches agree with single calls") {
  const ChannelTransform t(Channel::make(1, 0.5), rgrid(), egrid());
  const std::vector<RadialSpinor> phis{bump(rgrid(), 5, 1, 1.0, {0, 1}), bump(rgrid(), 9, 0.7, {0, 2}, 0.5)};
  const auto cs = t.forward(phis);
  const SpectralCoeff c0 = t.forward(phis[0]);
  for (std::size_t k = 0; k < c0.plus().size(); k += 101) CHECK(std::abs(c0.plus()[k] - cs[0].plus()[k]) < 1e-14);
  const RadialSpinor lin = t.inverse(cs[0] + cs[1]);
  CHECK(l2_norm(lin - (t.inverse(cs[0]) + t.inverse(cs[1]))) < 1e-12 * l2_norm(lin));
}

TEST_CASE("transform diagonalises the radial operator") {
  const Channel ch = Channel::make(0, 0.3);
  const ChannelTransform t(ch, rgrid(), egrid());
  const RadialSpinor phi = bump(rgrid(), 8, 1, {1, 0.2}, {0, -0.7});
  const SpectralCoeff lhs = t.forward(apply_radial_dirac(ch, phi));
  SpectralCoeff rhs = t.forward(phi);
  const auto& E = egrid().nodes();
  for (std::size_t k = 0; k < E.size(); ++k) {
    rhs.plus()[k] *= E[k];
    rhs.minus()[k] *= -E[k];
  }
  SpectralCoeff diff = lhs;
  for (std::size_t k = 0; k < E.size(); ++k) {
    diff.plus()[k] -= rhs.plus()[k];
    diff.minus()[k] -= rhs.minus()[k];
  }
  CHECK(l2_norm(diff) < 1e-2 * l2_norm(rhs));
}

TEST_CASE("narrow energy packets keep their overlaps") {
  const ChannelTransform t(Channel::make(-1, 0.3), rgrid(), egrid());
  const auto& E = egrid().nodes();
  const auto& w = egrid().weights();
  auto packet = [&](double e0, double width, bool minus) {
    SpectralCoeff c(egrid());
    for (std::size_t k = 0; k < E.size(); ++k) {
      const double v = std::exp(-(E[k] - e0) * (E[k] - e0) / (2 * width * width));
      (minus ? c.minus() : c.plus())[k] = v;
    }
    return c;
  };
  auto overlap = [&](const SpectralCoeff& a, const SpectralCoeff& b) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < E.size(); ++k)
      acc += w[k] * (std::conj(a.plus()[k]) * b.plus()[k] + std::conj(a.minus()[k]) * b.minus()[k]);
    return acc;
  };
  const SpectralCoeff a = packet(3.0, 0.3, false), b = packet(3.2, 0.3, false), m = packet(3.0, 0.3, true);
  const RadialSpinor ua = t.inverse(a), ub = t.inverse(b), um = t.inverse(m);
  CHECK(std::abs(inner(ua, ub) - overlap(a, b)) < 1e-2 * std::abs(overlap(a, b)));
  CHECK(std::abs(inner(ua, ua) - overlap(a, a)) < 1e-2 * std::abs(overlap(a, a)));
  // opposite energy signs are orthogonal
  CHECK(std::abs(inner(ua, um)) < 1e-2 * std::abs(overlap(a, a)));
}

TEST_CASE("multipliers apply in the spectral domain") {
  const ChannelTransform t(Channel::make(2, 0.1), rgrid(), egrid());
  const RadialSpinor phi = bump(rgrid(), 6, 1, 1.0, 1.0);
  const RadialSpinor same = t.apply(phi, [](double) { return std::pair<cplx, cplx>{1.0, 1.0}; });
  CHECK(rel(same, phi) < 1e-3);
  const RadialSpinor half = t.apply(phi, [](double) { return std::pair<cplx, cplx>{0.5, 0.5}; });
  CHECK(l2_norm(half) == Approx(0.5 * l2_norm(phi)).epsilon(1e-3));
}

TEST_CASE("bessel table cache reuses and evicts") {
  const RadialGrid rg = make_radial_grid(5.0, 64, QuadratureScheme::composite_gauss);
  const EnergyGrid eg = make_energy_grid(5.0, 64, QuadratureScheme::composite_gauss);
  BesselTableCache cache(2);
  const auto a = cache.get(0.3, eg, rg);
  CHECK(cache.get(0.3, eg, rg) == a);
  cache.get(1.3, eg, rg);
  cache.get(2.3, eg, rg);
  CHECK(cache.size() == 2);
  CHECK(cache.get(0.3, eg, rg) != a);
  CHECK(a->matrix()(3, 5) == Approx(specfun::bessel_j(specfun::BesselOrder(0.3), eg.nodes()[3] * rg.nodes()[5])));
}

TEST_CASE("energy sign names round trip") {
  for (auto s : {EnergySign::signed_pair, EnergySign::plus_both}) CHECK(energy_sign_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(energy_sign_from_string("both"), InvalidParameter);
}
