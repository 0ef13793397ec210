#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>

#include "abdirac/errors.hpp"
#include "abdirac/io.hpp"
#include "abdirac/specfun.hpp"
#include "cli.hpp"

namespace cli {

namespace {

using namespace abdirac;
constexpr double kPi = std::numbers::pi;

struct Check {
  std::string name;
  double value;
  double threshold;
  std::string comparison;  // "<", ">=", "=="
  bool pass;
};

Check below(std::string name, double v, double t) { return {std::move(name), v, t, "<", v < t}; }
Check at_least(std::string name, double v, double t) { return {std::move(name), v, t, ">=", v >= t}; }

double rel_diff(const RadialSpinor& a, const RadialSpinor& b) {
  RadialSpinor d = a;
  d -= b;
  return l2_norm(d) / l2_norm(b);
}

}  // namespace

int run_selftest(const json& cfg, Output& out) {
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  Rng rng(seed);
  std::vector<Check> checks;

  {
    double worst = 0.0;
    const specfun::BesselJ j(specfun::BesselOrder(0.5));
    for (int i = 0; i < 200; ++i) {
      const double x = rng.uniform(1e-3, 50.0);
      worst = std::max(worst, std::abs(j(x) - std::sqrt(2.0 / (kPi * x)) * std::sin(x)));
    }
    checks.push_back(below("bessel_half_order_closed_form", worst, 1e-12));
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double nu = rng.uniform(0.0, 10.0), x = rng.uniform(0.5, 40.0);
      const double lhs = specfun::bessel_j(specfun::BesselOrder(nu - 1.0), x) +
                         specfun::bessel_j(specfun::BesselOrder(nu + 1.0), x);
      worst = std::max(worst, std::abs(lhs - 2.0 * nu / x * specfun::bessel_j(specfun::BesselOrder(nu), x)));
    }
    checks.push_back(below("bessel_three_term_recurrence", worst, 1e-10));
  }
  {
    // 2F1(1/2, 1/2; 2; 1) = Gamma(2) Gamma(1) / Gamma(3/2)^2 = 4 / pi
    const double v = specfun::gauss_2f1_at_one(specfun::HypergeometricParams::make(0.5, 0.5, 2.0));
    checks.push_back(below("hypergeometric_gauss_sum", std::abs(v - 4.0 / kPi), 1e-12));
  }
  {
    const Channel ch = Channel::make(0, 0.3);
    const KernelABParts cf = kernel_parts_closed_form(ch, -0.6, 0.5, 2.0);
    const KernelQuadrature q = kernel_quadrature(ch, -0.6, 0.5, 2.0, 30.0 / 0.005, 0.005);
    checks.push_back(below("kernel_closed_form_vs_quadrature",
                           std::max(std::abs(q.parts.A - cf.A) / std::abs(cf.A), std::abs(q.parts.B - cf.B) / std::abs(cf.B)),
                           1e-3));
  }
  const RadialGrid rg = make_radial_grid(20.0, 2000, QuadratureScheme::uniform_trapezoid);
  const EnergyGrid eg = make_energy_grid(40.0, 4000, QuadratureScheme::composite_gauss);
  {
    BumpSampler sampler(seed, BumpRanges::supported(1.0, 19.0, 0.5, 1.5));
    double iso = 0.0, trip = 0.0;
    for (int l : {-1, 0, 1}) {
      const ChannelTransform t(Channel::make(l, 0.3), rg, eg);
      for (int i = 0; i < 3; ++i) {
        const RadialSpinor phi = make_bump(rg, sampler.next());
        const SpectralCoeff c = t.forward(phi);
        iso = std::max(iso, std::abs(l2_norm(c) - l2_norm(phi)) / l2_norm(phi));
        trip = std::max(trip, rel_diff(t.inverse(c), phi));
      }
    }
    checks.push_back(below("transform_isometry", iso, 1e-3));
    checks.push_back(below("transform_round_trip", trip, 1e-3));
  }
  {
    const Channel ch = Channel::make(0, 0.3);
    const RadialSpinor phi = make_bump(rg, Bump{8.0, 1.0, {1.0, 0.0}, {0.0, 0.5}});
    const EnergySignSelection sel = select_energy_sign(ch, phi, 1.0, 1e-3, eg);
    checks.push_back({"energy_sign_signed_selected", sel.chosen == EnergySign::signed_pair ? 1.0 : 0.0, 1.0, "==",
                      sel.chosen == EnergySign::signed_pair});
    checks.push_back(below("propagator_cross_oracle_t1", sel.discrepancy_signed, 1e-2));
    auto t = std::make_shared<const ChannelTransform>(ch, rg, eg);
    const SpectralPropagator prop(t, phi);
    const std::vector<double> times{0.5, 1.0, 2.0};
    double drift = 0.0;
    for (const auto& s : prop.states_at(times)) drift = std::max(drift, std::abs(l2_norm(s) - l2_norm(phi)) / l2_norm(phi));
    checks.push_back(below("spectral_unitarity", drift, 1e-3));
    const RadialSpinor o = evolve_oracle(ch, phi, 1.0, 1e-3);
    checks.push_back(below("oracle_unitarity", std::abs(l2_norm(o) - l2_norm(phi)) / l2_norm(phi), 1e-8));
  }
  {
    const double h1 = eigen_residual_sup(Channel::make(0, 0.3), 1.0, make_radial_grid(20.0, 1000, QuadratureScheme::uniform_trapezoid), 1.0, 19.0);
    const double h2 = eigen_residual_sup(Channel::make(0, 0.3), 1.0, make_radial_grid(20.0, 2000, QuadratureScheme::uniform_trapezoid), 1.0, 19.0);
    checks.push_back(at_least("eigenfunction_residual_order", std::log2(h1 / h2), 1.8));
  }
  checks.push_back(below("smoothing_constant_value", std::abs(smoothing_constant(1.0, 0.5, 0) - 2.0 * kPi / 3.0), 1e-12));
  {
    double prev = std::numeric_limits<double>::infinity(), worst = -std::numeric_limits<double>::infinity();
    for (int l = 0; l <= 6; ++l) {
      const double c = smoothing_constant(0.9, 0.3, l);
      worst = std::max(worst, c - prev);
      prev = c;
    }
    checks.push_back(below("smoothing_constant_nonincreasing_in_l", worst, 1e-15));
  }
  checks.push_back(below("bessel_average_large_R", std::abs(bessel_average(0.0, 1000.0) * kPi - 1.0), 0.1));
  checks.push_back(below("landau_sup_half_order", std::abs(landau_sup(0.5, 51.0) - std::sqrt(2.0 / kPi)), 1e-3));
  {
    double prev = 0.0, worst = std::numeric_limits<double>::infinity();
    for (int lam = 1; lam <= 5; ++lam) {
      const double v = landau_sup(lam, 4.0 * lam * lam + 50.0);
      worst = std::min(worst, v - prev);
      prev = v;
    }
    checks.push_back({"landau_sup_increasing", worst, 0.0, ">", worst > 0.0});
  }
  {
    BumpSampler sampler(seed, BumpRanges::supported(1.0, 19.0, 0.5, 1.5));
    const ChannelSet f = sample_channel_set(sampler, rg, -1, 1);
    checks.push_back(below("norm_identity", verify_norm_identity(f, 0.5).measured, 1e-3));
  }
  {
    EndpointConfig e;
    e.samples = 1;
    e.seed = seed;
    e.grid = GridSpec{20.0, 2000, 40.0, 4000};
    e.bumps = BumpRanges::supported(1.0, 19.0, 0.5, 1.5);
    checks.push_back(below("endpoint_plateau_change", verify_endpoint(e).measured, 0.1));
  }

  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back(json{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                       {"comparison", c.comparison}, {"pass", c.pass}});
    all = all && c.pass;
  }
  json doc = envelope("selftest", cfg);
  doc["checks"] = arr;
  doc["all_pass"] = all;
  write_json(out.stream(), doc);
  if (!all) {
    json diag{{"error", "selftest"}, {"message", "one or more invariants failed"}, {"failed", json::array()}};
    for (const auto& c : checks)
      if (!c.pass) diag["failed"].push_back(c.name);
    std::cerr << diag.dump(2) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cli
