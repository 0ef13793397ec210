#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abdirac/errors.hpp"
#include "abdirac/partialwave.hpp"

using namespace abdirac;
using doctest::Approx;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;

RadialGrid grid() { return make_radial_grid(20.0, 800, QuadratureScheme::composite_gauss); }

double bump(double r, double r0, double s) { return std::exp(-(r - r0) * (r - r0) / (2 * s * s)); }

double sup_diff(const cvec& a, const cvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("angle independent upper component lands in channel 0") {
  const auto field = SpinorField::sample(grid(), 16, [](double r, double) {
    return std::pair<cplx, cplx>{bump(r, 5, 1), 0.0};
  });
  const ChannelSet set = decompose(field, -3, 3);
  for (const auto& [l, sp] : set) {
    if (l == 0) continue;
    CHECK(l2_norm(sp) < 1e-13);
  }
  const RadialSpinor& c0 = set.at(0);
  CHECK(l2_norm(RadialSpinor(c0.grid(), cvec(c0.size()), c0.g())) < 1e-13);
  for (std::size_t j = 0; j < c0.size(); j += 97)
    CHECK(std::abs(c0.f()[j] - std::sqrt(kTwoPi) * bump(grid().nodes()[j], 5, 1)) < 1e-12);
}

TEST_CASE("lower component with one unit of angular momentum belongs to channel 0") {
  const auto field = SpinorField::sample(grid(), 16, [](double r, double phi) {
    return std::pair<cplx, cplx>{0.0, bump(r, 4, 1) * std::exp(cplx(0, phi))};
  });
  const ChannelSet set = decompose(field, -3, 3);
  CHECK(l2_norm(set.at(0)) == Approx(l2_norm(field)).epsilon(1e-12));
  CHECK(l2_norm(RadialSpinor(grid(), set.at(0).f(), cvec(grid().size()))) < 1e-13);
}

TEST_CASE("channel norms add up to the field norm") {
  std::mt19937_64 eng(3);
  std::normal_distribution<double> n;
  std::vector<std::array<cplx, 4>> coef(7);
  for (auto& c : coef)
    for (auto& x : c) x = cplx(n(eng), n(eng));
  const auto field = SpinorField::sample(grid(), 32, [&](double r, double phi) {
    cplx a = 0, b = 0;
    for (int m = -3; m <= 3; ++m) {
      const auto& c = coef[m + 3];
      const cplx e = std::exp(cplx(0, m * phi));
      a += (c[0] * bump(r, 4 + m * 0.5, 1) + c[1] * bump(r, 9, 2)) * e;
      b += (c[2] * bump(r, 6, 0.8) + c[3] * bump(r, 12 - m, 1.5)) * e;
    }
    return std::pair<cplx, cplx>{a, b};
  });
  const ChannelSet set = decompose(field, -4, 3);
  CHECK(l2_norm(set) == Approx(l2_norm(field)).epsilon(1e-12));
}

TEST_CASE("synthesis and decomposition are inverse on band-limited data") {
  const RadialGrid g = grid();
  ChannelSet set(g, -1, 1);
  for (int l = -1; l <= 1; ++l) {
    cvec f(g.size()), h(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      f[j] = cplx(l + 2.0, 0.5) * bump(g.nodes()[j], 5 + l, 1);
      h[j] = cplx(-0.3, l) * bump(g.nodes()[j], 8, 1.5);
    }
    set.set(l, RadialSpinor(g, f, h));
  }
  const ChannelSet back = decompose(synthesize(set, 16), -1, 1);
  for (int l = -1; l <= 1; ++l) {
    CHECK(sup_diff(back.at(l).f(), set.at(l).f()) < 1e-10);
    CHECK(sup_diff(back.at(l).g(), set.at(l).g()) < 1e-10);
  }
  ChannelSet single(g, 2, 2);
  single.set(2, set.at(1));
  const ChannelSet one = decompose(synthesize(single, 16), 2, 2);
  CHECK(sup_diff(one.at(2).f(), set.at(1).f()) < 1e-10);
}

TEST_CASE("empty channel set synthesises the zero field") {
  const ChannelSet empty(grid(), 0, -1);
  CHECK(empty.empty());
  CHECK(l2_norm(synthesize(empty, 8)) == 0.0);
}

TEST_CASE("angular aliasing is rejected") {
  CHECK_THROWS_AS(check_angular_resolution(8, -3, 3), AliasingError);
  CHECK_NOTHROW(check_angular_resolution(16, -3, 3));
  const SpinorField field(grid(), 8);
  CHECK_THROWS_AS(decompose(field, -3, 3), AliasingError);
}

TEST_CASE("channel set rejects spinors on another grid") {
  ChannelSet set(grid(), 0, 0);
  CHECK_THROWS_AS(set.set(0, RadialSpinor(make_radial_grid(10.0, 800, QuadratureScheme::composite_gauss))),
                  InvalidParameter);
  CHECK_THROWS(set.at(3));
}

TEST_CASE("magnetic gradient of a Gaussian") {
  const RadialGrid g = make_radial_grid(40.0, 4000, QuadratureScheme::composite_gauss);
  ChannelSet zero(g, 0, 0);
  CHECK(magnetic_gradient_norm(zero, 0.3) == 0.0);
  cvec f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-g.nodes()[j] * g.nodes()[j] / 2);
  ChannelSet set(g, 0, 0);
  set.set(0, RadialSpinor(g, f, cvec(g.size())));
  CHECK(magnetic_gradient_norm(set, 0.0) == Approx(std::sqrt(0.5)).epsilon(1e-5));
}

TEST_CASE("magnetic gradient includes the shifted angular momentum") {
  const RadialGrid g = make_radial_grid(20.0, 4000, QuadratureScheme::composite_gauss);
  const double alpha = 0.3;
  cvec f(g.size()), h(g.size());
  double ref = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = g.nodes()[j], b = bump(r, 7, 1), db = -(r - 7) * b;
    f[j] = b;
    h[j] = cplx(0, 2) * b;
    // upper component has angular momentum 1, lower one 2
    ref += g.weights()[j] * (db * db + std::pow(1 + alpha, 2) * b * b / (r * r) +
                             4 * (db * db + std::pow(2 + alpha, 2) * b * b / (r * r)));
  }
  ChannelSet set(g, 1, 1);
  set.set(1, RadialSpinor(g, f, h));
  CHECK(magnetic_gradient_norm(set, alpha) == Approx(std::sqrt(ref)).epsilon(1e-5));
}
