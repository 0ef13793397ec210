#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "abdirac/errors.hpp"
#include "abdirac/estimates.hpp"
#include "oracles.hpp"

using namespace abdirac;
using doctest::Approx;

namespace {
const double kPi = std::numbers::pi;

ChannelSet scaled_bump(const RadialGrid& g, double lambda) {
  ChannelSet set(g, 0, 0);
  RadialSpinor phi(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = lambda * g.nodes()[j];
    phi.f()[j] = std::exp(-(x - 8) * (x - 8) / 2);
    phi.g()[j] = cplx(0, 0.5) * std::exp(-(x - 9) * (x - 9) / 2);
  }
  set.set(0, phi);
  return set;
}
}  // namespace

TEST_CASE("smoothing constant reference value") {
  CHECK(smoothing_constant(1.0, 0.5, 0) == Approx(2 * kPi / 3).epsilon(1e-13));
}

TEST_CASE("smoothing constant is nonincreasing in |l + alpha|") {
  for (double gamma : {0.7, 0.9, 1.2}) {
    for (double alpha : {0.0, 0.3, 0.5}) {
      std::vector<std::pair<double, double>> v;
      for (int l = -6; l <= 6; ++l) {
        try {
          v.emplace_back(std::abs(l + alpha), smoothing_constant(gamma, alpha, l));
        } catch (const RangeError&) {
        }
      }
      std::sort(v.begin(), v.end());
      for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].second <= v[i - 1].second * (1 + 1e-14));
    }
  }
}

TEST_CASE("smoothing constant range and divergence at both ends") {
  CHECK_THROWS_AS(smoothing_constant(0.5, 0.3, 0), RangeError);
  CHECK_THROWS_AS(smoothing_constant(1.3, 0.3, 0), RangeError);
  CHECK_THROWS_AS(smoothing_constant(0.4, 0.0, 3), RangeError);
  double prev = 0.0;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double lo = smoothing_constant(0.5 + d, 0.3, 0);
    CHECK(lo > prev);
    prev = lo;
  }
  CHECK(prev > 1e3);
  prev = 0.0;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double hi = smoothing_constant(1.3 - d, 0.3, 0);
    CHECK(hi > prev);
    prev = hi;
  }
  CHECK(prev > 1e3);
}

TEST_CASE("the magnetic field lowers the constant") {
  CHECK(smoothing_constant(0.9, 0.5, 0) < smoothing_constant(0.9, 0.0, 0));
  CHECK(smoothing_constant(0.7, 0.3, 0) < smoothing_constant(0.7, 0.0, 0));
}

TEST_CASE("distance to the nearest integer") {
  CHECK(mu0(0.3) == Approx(0.3));
  CHECK(mu0(0.7) == Approx(0.3));
  CHECK(mu0(1.5) == Approx(0.5));
  CHECK(mu0(-2.0) == 0.0);
}

TEST_CASE("exact smoothing ratio from Bessel moments") {
  for (double nu : {0.4, 1.4}) CHECK(smoothing_bessel_integral(nu, 0.9) == Approx(oracle::bessel_square_moment(nu, 0.9)).epsilon(1e-6));
  // For kappa >= 0 the squared ratio is twice the closed-form constant.
  for (auto [gamma, alpha, l] : {std::tuple{0.9, 0.4, 0}, {0.7, 0.3, 1}, {1.2, 0.5, 2}}) {
    const double r = smoothing_exact_ratio(Channel::make(l, alpha), gamma);
    CHECK(r * r == Approx(2 * smoothing_constant(gamma, alpha, l)).epsilon(1e-10));
  }
  CHECK(smoothing_finite_upper(Channel::make(-1, 0.3)) == Approx(0.7));
}

TEST_CASE("smoothing norm by Plancherel and in the time domain") {
  const Channel ch = Channel::make(0, 0.4);
  const GridSpec g{60.0, 4800, 20.0, 1600};
  const ChannelTransform t(ch, g.radial(), g.energy());
  CHECK(smoothing_norm_plancherel(t, 0.9, RadialSpinor(t.radial_grid())) == 0.0);
  const RadialSpinor phi = make_bump(t.radial_grid(), Bump{6.0, 1.0, {1.0, 0.0}, {0.0, 0.5}});
  const double p = smoothing_norm_plancherel(t, 0.9, phi);
  CHECK(p / l2_norm(phi) <= smoothing_exact_ratio(ch, 0.9) * (1 + 1e-6));
  const TimeRouteResult tr = smoothing_norm_time(t, 0.9, phi, 30.0, 0.05);
  CHECK(tr.tails_ok);
  CHECK(tr.norm == Approx(p).epsilon(1e-2));
  CHECK(tr.window_norm < tr.norm);
  CHECK(tr.half_line_norm < tr.norm);
}

TEST_CASE("power tail fit on exact data") {
  std::vector<double> t, y;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(10.0 + i);
    y.push_back(3.0 * std::pow(t.back() + 2.0, -1.8));
  }
  const TailFit f = power_tail(t, y, 1.8);
  CHECK(f.ok);
  CHECK(f.shift == Approx(2.0).epsilon(1e-8));
  CHECK(f.tail == Approx(3.0 / 0.8 * std::pow(52.0, -0.8)).epsilon(1e-8));
  y[35] = -1.0;
  CHECK_FALSE(power_tail(t, y, 1.8).ok);
}

TEST_CASE("local smoothing report") {
  SmoothingConfig cfg;
  cfg.samples = 3;
  cfg.time_samples = 0;
  cfg.grid = GridSpec{40.0, 2400, 20.0, 1600};
  const EstimateReport r = verify_local_smoothing(cfg);
  CHECK(r.pass);
  CHECK(r.bound == Approx(smoothing_constant(0.9, 0.4, 0)));
  CHECK(r.measured <= r.details["exact_ratio"].get<double>() * (1 + 1e-6));
  CHECK(r.to_json().dump() == verify_local_smoothing(cfg).to_json().dump());

  cfg.alpha = 0.3;
  cfg.l = -1;
  const EstimateReport d = verify_local_smoothing(cfg);
  CHECK(d.details["divergent"].get<bool>());
  CHECK_FALSE(d.pass);
  CHECK(d.to_json()["measured"].is_null());
}

TEST_CASE("endpoint profile plateaus") {
  EndpointConfig cfg;
  cfg.l = 2;
  cfg.samples = 1;
  cfg.grid = GridSpec{40.0, 2400, 20.0, 1600};
  const EstimateReport r = verify_endpoint(cfg);
  CHECK(r.pass);
  CHECK(r.details["plateau"].get<double>() == Approx(std::sqrt(2.0)).epsilon(0.1));
  const ChannelTransform t(Channel::make(0, 0.3), cfg.grid.radial(), cfg.grid.energy());
  const std::vector<double> radii{32.0, 64.0};
  for (double v : endpoint_profile(t, RadialSpinor(t.radial_grid()), radii)) CHECK(v == 0.0);
}

TEST_CASE("Bessel averages") {
  CHECK(bessel_average(0.0, 1000.0) * kPi == Approx(1.0).epsilon(0.1));
  CHECK(bessel_average(10.0, 1.0) < 1e-10);
  // J_{1/2}^2 r = (2/pi) sin^2 r, so the average is (1/pi)(1 - sin(2R)/(2R)).
  CHECK(bessel_average(0.5, 7.0) == Approx((1 - std::sin(14.0) / 14.0) / kPi).epsilon(1e-10));
  for (double lambda : {0.3, 1.0, 5.0, 20.0})
    for (double R : {1.0, 10.0, 100.0, 1000.0}) CHECK(bessel_average(lambda, R) <= 1.0);
  CHECK_THROWS_AS(bessel_average(1.0, 0.0), InvalidParameter);
}

TEST_CASE("Landau supremum") {
  CHECK(landau_sup(0.5, 60.0) == Approx(std::sqrt(2 / kPi)).epsilon(1e-4));
  double prev = 0.0;
  for (int lambda = 1; lambda <= 10; ++lambda) {
    const double v = landau_sup(lambda, 4.0 * lambda * lambda + 50.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(landau_sup(5.0, 60.0), InvalidParameter);
}

TEST_CASE("power law fit") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 3 * std::pow(2, 0.7), 3 * std::pow(4, 0.7), 3 * std::pow(8, 0.7)};
  const PowerFit f = fit_power_law(x, y);
  CHECK(f.ok);
  CHECK(f.exponent == Approx(0.7).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == Approx(3.0).epsilon(1e-12));
  const std::vector<double> one{1.0};
  CHECK_FALSE(fit_power_law(one, one).ok);
}

TEST_CASE("KSS growth on a short window") {
  KssConfig cfg;
  cfg.horizons = {2, 4, 8, 16};
  cfg.dt = 0.2;
  cfg.grid = GridSpec{32.0, 3200, 30.0, 2400};
  const KssExperiment exp(cfg);
  const EstimateReport r0 = exp.report(0.0, KssWeight::japanese);
  CHECK(r0.details["exponent"].get<double>() == Approx(0.5).epsilon(0.02));
  CHECK(r0.pass);
  const auto n = exp.norms(0.0, KssWeight::homogeneous);
  CHECK(n.back() == Approx(4.0 * exp.data_norm()).epsilon(0.02));
  const EstimateReport r1 = exp.report(-1.0, KssWeight::japanese);
  CHECK(r1.details["exponent"].get<double>() < 0.5);
  const EstimateReport r2 = exp.report(-0.25, KssWeight::japanese);
  CHECK(r2.details["exponent_discrepancy_flag"].get<bool>());
  CHECK_THROWS_AS(exp.report(0.5, KssWeight::japanese), UsageError);
  CHECK(kss_weight_from_string(to_string(KssWeight::homogeneous)) == KssWeight::homogeneous);
}

TEST_CASE("weighted Strichartz sides") {
  const GridSpec g{40.0, 1600, 12.0, 480};
  BumpSampler sampler(42, BumpRanges{3.0, 8.0, 0.5, 1.0, false});
  const ChannelSet f = sample_channel_set(sampler, g.radial(), -1, 1);
  const StrichartzSides zero = strichartz_sides(ChannelSet(g.radial(), 0, 0), 0.3, 4.0, 0.1, g.energy(), 20.0, 0.1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const StrichartzSides q2 = strichartz_sides(f, 0.3, 2.0, 0.1, g.energy(), 20.0, 0.1);
  CHECK(std::isfinite(q2.lhs / q2.rhs));

  const StrichartzSides a = strichartz_sides(f, 0.3, 4.0, 0.1, g.energy(), 20.0, 0.1);
  const GridSpec fine = g.refined(2);
  BumpSampler again(42, BumpRanges{3.0, 8.0, 0.5, 1.0, false});
  const ChannelSet ff = sample_channel_set(again, fine.radial(), -1, 1);
  const StrichartzSides b = strichartz_sides(ff, 0.3, 4.0, 0.1, fine.energy(), 20.0, 0.1);
  CHECK(a.tails_ok);
  CHECK((b.lhs / b.rhs) == Approx(a.lhs / a.rhs).epsilon(0.1));

  StrichartzConfig cfg;
  cfg.q = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("Sobolev trace ratio is scale invariant") {
  const RadialGrid g = default_radial_grid();
  const EnergyGrid eg = default_energy_grid();
  const EstimateReport zero = verify_sobolev_trace(0.1, ChannelSet(g, 0, 0), 0.3, eg);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  const EstimateReport base = verify_sobolev_trace(0.1, scaled_bump(g, 1.0), 0.3, eg);
  CHECK(base.pass);
  CHECK(std::isfinite(base.measured));
  for (double lambda : {0.5, 2.0}) {
    const EstimateReport s = verify_sobolev_trace(0.1, scaled_bump(g, lambda), 0.3, eg);
    CHECK(s.measured == Approx(base.measured).epsilon(1e-3));
  }
  CHECK_THROWS_AS(verify_sobolev_trace(0.5, scaled_bump(g, 1.0), 0.3, eg), UsageError);
}

TEST_CASE("norm identity") {
  const RadialGrid g = make_radial_grid(20.0, 2000, QuadratureScheme::composite_gauss);
  const EstimateReport zero = verify_norm_identity(ChannelSet(g, -1, 1), 0.5);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.pass);
  BumpSampler sampler(9, BumpRanges::supported(1.0, 19.0, 0.5, 1.5));
  CHECK(verify_norm_identity(sample_channel_set(sampler, g, 0, 0), 0.0).measured < 1e-3);
  CHECK(verify_norm_identity(sample_channel_set(sampler, g, -1, 1), 0.5).measured < 1e-3);
}

TEST_CASE("bump sampling is reproducible and respects the ranges") {
  BumpSampler a(42, BumpRanges::supported(1.0, 20.0, 0.5, 1.5)), b(42, BumpRanges::supported(1.0, 20.0, 0.5, 1.5));
  for (int i = 0; i < 50; ++i) {
    const Bump x = a.next(), y = b.next();
    CHECK(x.r0 == y.r0);
    CHECK(x.amp_g == y.amp_g);
    CHECK(x.r0 - 6 * x.sigma >= 1.0);
    CHECK(x.r0 + 6 * x.sigma <= 20.0);
  }
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("report ratio and pass flag") {
  EstimateReport r;
  r.measured = 1.04;
  r.bound = 1.0;
  r.tolerance = 0.05;
  r.finalize();
  CHECK(r.pass);
  r.measured = std::numeric_limits<double>::infinity();
  r.finalize();
  CHECK_FALSE(r.pass);
  CHECK(r.to_json()["ratio"].is_null());
}
