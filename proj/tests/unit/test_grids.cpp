#include <doctest.h>

#include <cmath>
#include <vector>

#include "abdirac/errors.hpp"
#include "abdirac/grids.hpp"

using namespace abdirac;
using doctest::Approx;

namespace {
template <class G, class F>
double integrate_fn(const G& g, F fn) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = fn(g.nodes()[i]);
  return g.integrate(v);
}
}  // namespace

TEST_CASE("composite Gauss integrates polynomials against r dr exactly") {
  const RadialGrid g = make_radial_grid(1.0, 64, QuadratureScheme::composite_gauss);
  CHECK(integrate_fn(g, [](double) { return 1.0; }) == Approx(0.5).epsilon(1e-15));
  CHECK(integrate_fn(g, [](double r) { return r; }) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(integrate_fn(g, [](double r) { return std::pow(r, 13); }) == Approx(1.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("Gaussian moment on the default grid") {
  const RadialGrid g = default_radial_grid();
  CHECK(g.size() == 4000);
  CHECK(g.extent() == 40.0);
  CHECK(integrate_fn(g, [](double r) { return std::exp(-r * r); }) == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("uniform trapezoid is second order") {
  auto err = [](int n) {
    const RadialGrid g = make_radial_grid(12.0, n, QuadratureScheme::uniform_trapezoid);
    return std::abs(integrate_fn(g, [](double r) { return std::exp(-(r - 6) * (r - 6)); }) - 6.0 * std::sqrt(std::acos(-1.0)));
  };
  // Smooth data vanishing at both ends: trapezoid is spectrally accurate here,
  // so only check that the error is small and shrinks.
  CHECK(err(400) < 1e-10);
  const RadialGrid g1 = make_radial_grid(1.0, 100, QuadratureScheme::uniform_trapezoid);
  const RadialGrid g2 = make_radial_grid(1.0, 200, QuadratureScheme::uniform_trapezoid);
  const double e1 = std::abs(integrate_fn(g1, [](double r) { return r * r; }) - 0.25);
  const double e2 = std::abs(integrate_fn(g2, [](double r) { return r * r; }) - 0.25);
  CHECK(std::log2(e1 / e2) == Approx(2.0).epsilon(0.05));
}

TEST_CASE("grid construction rejects bad parameters") {
  CHECK_THROWS_AS(make_radial_grid(1.0, 63, QuadratureScheme::composite_gauss), InvalidParameter);
  CHECK_THROWS_AS(make_radial_grid(-1.0, 64, QuadratureScheme::composite_gauss), InvalidParameter);
  CHECK_THROWS_AS(make_energy_grid(1.0, 0, QuadratureScheme::uniform_trapezoid), InvalidParameter);
}

TEST_CASE("graded panels handle a power singularity at the origin") {
  const QuadratureRule rule = graded_gauss_panels(1.0, 4, 30);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], -0.7);
  CHECK(acc == Approx(1.0 / 0.3).epsilon(1e-5));
}

TEST_CASE("spinor norm, inner product and arithmetic") {
  const RadialGrid g = make_radial_grid(40.0, 4000, QuadratureScheme::composite_gauss);
  RadialSpinor zero(g);
  CHECK(l2_norm(zero) == 0.0);
  cvec f(g.size()), h(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes()[i];
    f[i] = std::exp(-r * r / 2);
    h[i] = cplx(0.0, r * std::exp(-r * r / 2));
  }
  const RadialSpinor phi(g, f, cvec(g.size()));
  CHECK(l2_norm(phi) == Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(l2_norm(cplx(2.0, 0.0) * phi) == Approx(2.0 * l2_norm(phi)));
  const RadialSpinor psi(g, cvec(g.size()), h);
  CHECK(std::abs(inner(phi, psi)) < 1e-15);
  CHECK(std::norm(inner(phi, phi)) == Approx(std::pow(l2_norm(phi), 4)));
  const RadialSpinor sum = phi + psi;
  CHECK(l2_norm(sum) * l2_norm(sum) == Approx(l2_norm(phi) * l2_norm(phi) + l2_norm(psi) * l2_norm(psi)));
  CHECK(l2_norm(sum - psi - phi) == 0.0);
}

TEST_CASE("differentiate is second order on non-uniform nodes") {
  auto err = [](int n) {
    const RadialGrid g = make_radial_grid(6.0, n, QuadratureScheme::composite_gauss);
    cvec v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(g.nodes()[i]);
    const cvec d = differentiate(g, v);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(d[i] - std::cos(g.nodes()[i])));
    return e;
  };
  CHECK(std::log2(err(400) / err(800)) > 1.8);
}

TEST_CASE("scheme names round trip") {
  for (auto s : {QuadratureScheme::composite_gauss, QuadratureScheme::uniform_trapezoid})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(scheme_from_string("simpson"), InvalidParameter);
}
