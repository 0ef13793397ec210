#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <regex>

#include "abdirac/errors.hpp"
#include "abdirac/io.hpp"
#include "cli.hpp"

namespace cli {

int run_selftest(const json& cfg, Output& out);

namespace {

using namespace abdirac;

Param real(std::string n, double d, std::string h) { return {std::move(n), Kind::real, d, std::move(h)}; }
Param integer(std::string n, long long d, std::string h) { return {std::move(n), Kind::integer, d, std::move(h)}; }
Param seed() { return {"seed", Kind::seed, std::uint64_t{42}, "Seed of the random data sampler"}; }
Param reals(std::string n, std::vector<double> d, std::string h) {
  return {std::move(n), Kind::real_list, d, std::move(h) + "; comma-separated list"};
}
Param ints(std::string n, std::vector<long long> d, std::string h) {
  return {std::move(n), Kind::int_list, d, std::move(h) + "; comma-separated list"};
}
Param choice(std::string n, std::string d, std::string h, std::vector<std::string> c) {
  return {std::move(n), Kind::choice, d, std::move(h), std::move(c)};
}
Param flag(std::string n, bool d, std::string h) { return {std::move(n), Kind::boolean, d, std::move(h)}; }
Param format(std::string d) { return choice("format", std::move(d), "Output format", {"json", "csv"}); }

std::vector<Param> grid_params(const std::string& prefix, const GridSpec& g, const std::string& what) {
  return {real(prefix + "rmax", g.r_max, "Radial extent of the " + what + " grid"),
          integer(prefix + "nr", g.n_r, "Radial nodes of the " + what + " grid"),
          real(prefix + "emax", g.e_max, "Energy cutoff of the " + what + " grid"),
          integer(prefix + "ne", g.n_e, "Energy nodes of the " + what + " grid")};
}

template <class... V>
std::vector<Param> join(std::vector<Param> a, const V&... more) {
  (a.insert(a.end(), more.begin(), more.end()), ...);
  return a;
}

std::vector<double> reals_of(const json& j) { return j.get<std::vector<double>>(); }
std::vector<int> ints_of(const json& j) { return j.get<std::vector<int>>(); }

void write(Output& out, const json& doc) { write_json(out.stream(), doc); }

// ---- propagate ----

struct Initial {
  std::optional<Bump> bump;
  std::optional<RadialSpinor> spinor;
  json description;
};

Initial parse_initial(const std::string& spec) {
  static const std::regex re(
      R"(^\s*gaussian\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*,\s*(f|g|both)\s*\)\s*$)");
  std::smatch m;
  Initial init;
  if (std::regex_match(spec, m, re)) {
    Bump b{};
    try {
      b.r0 = std::stod(m[1]);
      b.sigma = std::stod(m[2]);
    } catch (const std::exception&) {
      throw UsageError("--initial: malformed gaussian parameters");
    }
    if (!(b.sigma > 0.0) || !(b.r0 > 0.0)) throw UsageError("--initial: r0 and sigma must be positive");
    const std::string comp = m[3];
    b.amp_f = comp == "g" ? 0.0 : 1.0;
    b.amp_g = comp == "f" ? 0.0 : 1.0;
    init.bump = b;
    init.description = json{{"kind", "gaussian"}, {"r0", b.r0}, {"sigma", b.sigma}, {"component", comp}};
    return init;
  }
  std::ifstream in(spec);
  if (!in) throw UsageError("--initial: neither gaussian(r0,sigma,f|g|both) nor a readable file: " + spec);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("--initial: file is not valid JSON: " + std::string(e.what()));
  }
  init.spinor = radial_spinor_from_json(j);
  init.description = json{{"kind", "file"}, {"path", spec}};
  return init;
}

int run_propagate(const json& cfg, Output& out) {
  const double alpha = cfg["alpha"].get<double>();
  const int l = cfg["l"].get<int>();
  const double t_end = cfg["t"].get<double>();
  const int nsnap = cfg["snapshots"].get<int>();
  const double dt = cfg["dt-oracle"].get<double>();
  const std::string method = cfg["method"];
  if (!(t_end > 0.0)) throw UsageError("--t must be positive");
  if (nsnap < 2) throw UsageError("--snapshots must be at least 2");
  if (!(dt > 0.0)) throw UsageError("--dt-oracle must be positive");
  const Initial init = parse_initial(cfg["initial"].get<std::string>());
  RadialGrid grid = init.spinor ? init.spinor->grid()
                                : make_radial_grid(cfg["rmax"].get<double>(), cfg["nr"].get<int>(),
                                                   QuadratureScheme::uniform_trapezoid);
  if (method != "spectral" && grid.scheme() != QuadratureScheme::uniform_trapezoid)
    throw UsageError("the oracle needs a uniform-trapezoid radial grid");
  if (init.bump && init.bump->r0 + 6.0 * init.bump->sigma + t_end > grid.extent())
    throw UsageError("the wave front would reach r_max before t; enlarge --rmax or shorten --t");
  const RadialSpinor phi0 = init.bump ? make_bump(grid, *init.bump) : *init.spinor;
  const EnergyGrid eg = make_energy_grid(cfg["emax"].get<double>(), cfg["ne"].get<int>(),
                                         QuadratureScheme::composite_gauss);
  const Channel ch = Channel::make(l, alpha);
  const EnergySign sign = energy_sign_from_string(cfg["energy-sign"]);
  std::vector<double> times(nsnap);
  for (int i = 0; i < nsnap; ++i) times[i] = t_end * i / (nsnap - 1);
  const double n0 = l2_norm(phi0);

  json doc = envelope("propagate", cfg);
  doc["channel"] = json{{"description", ch.describe()},
                        {"orders", {ch.f_order(), ch.g_order()}},
                        {"normalization", eigen_normalization(EigenNormalization::isometric)}};
  doc["initial"] = init.description;
  doc["initial_norm"] = n0;
  const bool states = cfg["states"].get<bool>();
  std::vector<RadialSpinor> spec_states, orc_states;

  auto drift = [&](const std::vector<RadialSpinor>& s) {
    double d = 0.0;
    for (const auto& x : s) d = std::max(d, std::abs(l2_norm(x) - n0) / n0);
    return d;
  };
  auto as_trajectory = [&](const std::vector<RadialSpinor>& s) {
    Trajectory tr;
    tr.alpha = alpha;
    tr.times = times;
    for (const auto& x : s) {
      ChannelSet set(grid, l, l);
      set.set(l, x);
      tr.states.push_back(std::move(set));
    }
    return tr;
  };
  if (method != "oracle") {
    auto t = std::make_shared<const ChannelTransform>(ch, grid, eg);
    spec_states = SpectralPropagator(t, phi0, sign).states_at(times);
    json s = to_json(as_trajectory(spec_states), states);
    s["energy_sign"] = to_string(sign);
    s["unitarity_drift"] = drift(spec_states);
    doc["spectral"] = s;
  }
  if (method != "spectral") {
    orc_states.push_back(phi0);
    for (int i = 1; i < nsnap; ++i) orc_states.push_back(evolve_oracle(ch, orc_states.back(), times[i] - times[i - 1], dt));
    json s = to_json(as_trajectory(orc_states), states);
    s["unitarity_drift"] = drift(orc_states);
    doc["oracle"] = s;
  }
  if (method == "both") {
    json diff = json::array();
    for (int i = 0; i < nsnap; ++i) {
      RadialSpinor d = spec_states[i];
      d -= orc_states[i];
      diff.push_back(l2_norm(d) / n0);
    }
    doc["relative_l2_difference"] = diff;
  }
  write(out, doc);
  return 0;
}

// ---- smoothing ----

int run_smoothing(const json& cfg, Output& out) {
  std::vector<SmoothingConfig> runs;
  for (int l : ints_of(cfg["l"]))
    for (double g : reals_of(cfg["gamma"])) {
      SmoothingConfig c;
      c.alpha = cfg["alpha"].get<double>();
      c.l = l;
      c.gamma = g;
      c.samples = cfg["samples"].get<int>();
      c.seed = cfg["seed"].get<std::uint64_t>();
      c.time_samples = cfg["time-samples"].get<int>();
      c.t_window = cfg["t-window"].get<double>();
      c.dt = cfg["dt"].get<double>();
      c.tolerance = cfg["tolerance"].get<double>();
      c.grid = grid_from(cfg);
      c.time_grid = grid_from(cfg, "time-");
      c.validate();
      runs.push_back(c);
    }
  std::vector<EstimateReport> reps;
  for (const auto& c : runs) reps.push_back(verify_local_smoothing(c));
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), {"alpha", "l", "gamma", "sample", "data_norm", "lhs", "ratio", "bound",
                               "exact_ratio", "time_route_ratio", "half_line_ratio", "pass"});
    csv_preamble(w, "smoothing", cfg);
    w.header();
    for (std::size_t k = 0; k < reps.size(); ++k) {
      const auto& r = reps[k];
      const json& d = r.details;
      const json exact = d.contains("exact_ratio") ? d["exact_ratio"] : json(nullptr);
      if (!d.contains("samples")) {
        w.row({runs[k].alpha, runs[k].l, runs[k].gamma, -1, nullptr, nullptr, nullptr, r.bound, exact, nullptr,
               nullptr, r.pass});
        continue;
      }
      int i = 0;
      for (const auto& s : d["samples"]) {
        const bool tr = s.contains("time_route");
        w.row({runs[k].alpha, runs[k].l, runs[k].gamma, i++, s["norm"], s["lhs"], s["ratio"], r.bound, exact,
               tr ? s["time_route"]["ratio"] : json(nullptr), tr ? s["time_route"]["half_line_ratio"] : json(nullptr),
               s["ratio"].get<double>() <= r.bound * (1.0 + r.tolerance)});
      }
    }
    return 0;
  }
  json doc = envelope("smoothing", cfg);
  json arr = json::array();
  bool all = true;
  for (const auto& r : reps) {
    arr.push_back(r.to_json());
    all = all && r.pass;
  }
  doc["reports"] = arr;
  doc["all_pass"] = all;
  write(out, doc);
  return 0;
}

// ---- kss ----

int run_kss(const json& cfg, Output& out) {
  KssConfig c;
  c.alpha = cfg["alpha"].get<double>();
  c.horizons = reals_of(cfg["T"]);
  c.dt = cfg["dt"].get<double>();
  c.l_min = cfg["l-min"].get<int>();
  c.l_max = cfg["l-max"].get<int>();
  c.seed = cfg["seed"].get<std::uint64_t>();
  c.bumps = BumpRanges{cfg["r0-min"].get<double>(), cfg["r0-max"].get<double>(), cfg["sigma-min"].get<double>(),
                       cfg["sigma-max"].get<double>(), false};
  c.grid = grid_from(cfg);
  c.tolerance = cfg["tolerance"].get<double>();
  const auto mus = reals_of(cfg["mu"]);
  for (double mu : mus)
    if (!(mu <= 0.0)) throw UsageError("--mu values must be <= 0");
  c.validate();
  std::vector<KssWeight> weights;
  const std::string wname = cfg["weight"];
  if (wname != "homogeneous") weights.push_back(KssWeight::japanese);
  if (wname != "japanese") weights.push_back(KssWeight::homogeneous);
  const KssExperiment ex(c);
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), {"mu", "weight", "T", "norm", "normalized_norm"});
    csv_preamble(w, "kss", cfg);
    w.header();
    for (double mu : mus)
      for (KssWeight wt : weights) {
        const auto v = ex.norms(mu, wt);
        for (std::size_t i = 0; i < v.size(); ++i)
          w.row({mu, to_string(wt), c.horizons[i], v[i], v[i] / ex.data_norm()});
      }
    return 0;
  }
  json doc = envelope("kss", cfg);
  json arr = json::array();
  for (double mu : mus)
    for (KssWeight wt : weights) arr.push_back(ex.report(mu, wt).to_json());
  doc["reports"] = arr;
  doc["note"] =
      "for -1/2 < mu < 0 the stated growth T^(1/2-mu) and the rate T^(1/2+mu) used in the argument differ; "
      "distances to both are reported";
  write(out, doc);
  return 0;
}

// ---- strichartz ----

int run_strichartz(const json& cfg, Output& out) {
  std::vector<StrichartzConfig> runs;
  for (double q : reals_of(cfg["q"]))
    for (double e : reals_of(cfg["epsilon"])) {
      StrichartzConfig c;
      c.alpha = cfg["alpha"].get<double>();
      c.q = q;
      c.epsilon = e;
      c.samples = cfg["samples"].get<int>();
      c.l_min = cfg["l-min"].get<int>();
      c.l_max = cfg["l-max"].get<int>();
      c.seed = cfg["seed"].get<std::uint64_t>();
      c.grid = grid_from(cfg);
      c.t_window = cfg["t-window"].get<double>();
      c.dt = cfg["dt"].get<double>();
      c.ratio_cap = cfg["ratio-cap"].get<double>();
      c.validate();
      runs.push_back(c);
    }
  std::vector<EstimateReport> reps;
  for (const auto& c : runs) reps.push_back(verify_weighted_strichartz(c));
  // The q = infinity member of the family: the Sobolev trace inequality on
  // the same samples.
  std::vector<std::pair<double, std::vector<EstimateReport>>> trace;
  if (cfg["sobolev"].get<bool>()) {
    const StrichartzConfig& c0 = runs.front();
    const RadialGrid rg = c0.grid.radial();
    const EnergyGrid eg = c0.grid.energy();
    for (double e : reals_of(cfg["epsilon"])) {
      BumpSampler sampler(c0.seed, c0.bumps);
      std::vector<EstimateReport> v;
      for (int i = 0; i < c0.samples; ++i) {
        const ChannelSet f = sample_channel_set(sampler, rg, c0.l_min, c0.l_max);
        v.push_back(verify_sobolev_trace(e, f, c0.alpha, eg, c0.ratio_cap));
      }
      trace.emplace_back(e, std::move(v));
    }
  }
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), {"q", "epsilon", "sample", "lhs", "rhs", "ratio", "tail_fraction"});
    csv_preamble(w, "strichartz", cfg);
    w.header();
    for (std::size_t k = 0; k < reps.size(); ++k) {
      int i = 0;
      for (const auto& s : reps[k].details["samples"])
        w.row({runs[k].q, runs[k].epsilon, i++, s["lhs"], s["rhs"], s["ratio"], s["tail_fraction"]});
    }
    for (const auto& [e, v] : trace)
      for (std::size_t i = 0; i < v.size(); ++i)
        w.row({std::numeric_limits<double>::infinity(), e, static_cast<int>(i), v[i].lhs, v[i].rhs, v[i].measured,
               0.0});
    return 0;
  }
  json doc = envelope("strichartz", cfg);
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(r.to_json());
  doc["reports"] = arr;
  json tr = json::array();
  for (const auto& [e, v] : trace) {
    json samples = json::array();
    double worst = 0.0;
    bool pass = true;
    for (const auto& r : v) {
      samples.push_back(r.to_json());
      worst = std::max(worst, r.measured);
      pass = pass && r.pass;
    }
    tr.push_back(json{{"epsilon", e}, {"max_ratio", worst}, {"pass", pass}, {"samples", samples}});
  }
  doc["sobolev_trace"] = tr;
  write(out, doc);
  return 0;
}

// ---- bessel ----

int run_bessel(const json& cfg, Output& out) {
  const auto lambdas = reals_of(cfg["lambda"]);
  const double rmin = cfg["rmin"].get<double>(), rmax = cfg["rmax"].get<double>();
  const int points = cfg["points"].get<int>();
  if (!(rmin > 0.0) || !(rmax >= rmin)) throw UsageError("need 0 < --rmin <= --rmax");
  if (points < 1) throw UsageError("--points must be positive");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw UsageError("--lambda values must be nonnegative");
  const bool landau = cfg["quantity"] == "landau";
  std::vector<std::vector<json>> rows;
  std::vector<std::string> cols;
  if (landau) {
    cols = {"lambda", "r_max", "sup"};
    for (double l : lambdas) {
      const double rm = std::max(rmax, 4.0 * l * l + 50.0);
      rows.push_back({l, rm, landau_sup(l, rm)});
    }
  } else {
    cols = {"lambda", "R", "average"};
    for (double l : lambdas)
      for (int i = 0; i < points; ++i) {
        const double R = points == 1 ? rmax : rmin * std::pow(rmax / rmin, static_cast<double>(i) / (points - 1));
        rows.push_back({l, R, bessel_average(l, R)});
      }
  }
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), cols);
    csv_preamble(w, "bessel", cfg);
    w.header();
    for (const auto& r : rows) w.row(r);
    return 0;
  }
  json doc = envelope("bessel", cfg);
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = r[i];
    arr.push_back(o);
  }
  doc["rows"] = arr;
  write(out, doc);
  return 0;
}

// ---- kernel ----

int run_kernel(const json& cfg, Output& out) {
  const double alpha = cfg["alpha"].get<double>();
  const bool quad = cfg["quadrature"].get<bool>();
  const double qe = cfg["quad-emax"].get<double>(), qd = cfg["quad-delta"].get<double>();
  std::vector<std::string> cols{"l", "alpha", "power", "r", "s", "F", "G", "A", "B"};
  if (quad) cols.insert(cols.end(), {"F_quadrature", "G_quadrature", "relative_error", "converged"});
  std::vector<std::vector<json>> rows;
  for (int l : ints_of(cfg["l"])) {
    const Channel ch = Channel::make(l, alpha);
    for (double p : reals_of(cfg["power"])) {
      check_kernel_power(ch, p);
      for (double r : reals_of(cfg["r"]))
        for (double s : reals_of(cfg["s"])) {
          if (!(r > 0.0) || !(s > 0.0)) throw UsageError("--r and --s must be positive");
          // The kernel is symmetric in (r, s).
          const double lo = std::min(r, s), hi = std::max(r, s);
          const KernelValue v = lo == hi ? kernel_diagonal(ch, p, lo) : kernel_closed_form(ch, p, lo, hi);
          const KernelABParts ab = v.parts();
          std::vector<json> row{l, alpha, p, r, s, v.F, v.G, ab.A, ab.B};
          if (quad) {
            const KernelQuadrature kq = kernel_quadrature(ch, p, lo, hi, qe, qd);
            const double err = std::max(std::abs(kq.parts.A - ab.A), std::abs(kq.parts.B - ab.B)) /
                               std::max(std::abs(ab.A), std::abs(ab.B));
            row.insert(row.end(), {kq.value.F, kq.value.G, err, kq.converged});
          }
          rows.push_back(std::move(row));
        }
    }
  }
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), cols);
    csv_preamble(w, "kernel", cfg);
    w.header();
    for (const auto& r : rows) w.row(r);
    return 0;
  }
  json doc = envelope("kernel", cfg);
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = r[i];
    arr.push_back(o);
  }
  doc["rows"] = arr;
  write(out, doc);
  return 0;
}

// ---- normcheck ----

int run_normcheck(const json& cfg, Output& out) {
  const double alpha = cfg["alpha"].get<double>();
  const int l_min = cfg["l-min"].get<int>(), l_max = cfg["l-max"].get<int>();
  const int samples = cfg["samples"].get<int>();
  if (l_max < l_min) throw UsageError("empty channel range");
  if (samples < 0) throw UsageError("--samples must be nonnegative");
  const RadialGrid rg = make_radial_grid(cfg["rmax"].get<double>(), cfg["nr"].get<int>(), QuadratureScheme::composite_gauss);
  if (rg.extent() < 20.0) throw UsageError("--rmax must be at least 20 (data live in [1, 20])");
  // Smooth data negligible outside [1, 20].
  BumpSampler sampler(cfg["seed"].get<std::uint64_t>(), BumpRanges::supported(1.0, 20.0, 0.5, 1.5));
  std::vector<EstimateReport> reps;
  for (int i = 0; i < samples; ++i) {
    const ChannelSet f = sample_channel_set(sampler, rg, l_min, l_max);
    reps.push_back(verify_norm_identity(f, alpha, cfg["tolerance"].get<double>()));
  }
  if (cfg["format"] == "csv") {
    CsvWriter w(out.stream(), {"sample", "dirac_norm", "gradient_norm", "relative_difference", "pass"});
    csv_preamble(w, "normcheck", cfg);
    w.header();
    for (std::size_t i = 0; i < reps.size(); ++i)
      w.row({static_cast<int>(i), reps[i].lhs, reps[i].rhs, reps[i].measured, reps[i].pass});
    return 0;
  }
  json doc = envelope("normcheck", cfg);
  json arr = json::array();
  bool all = true;
  for (const auto& r : reps) {
    arr.push_back(r.to_json());
    all = all && r.pass;
  }
  doc["reports"] = arr;
  doc["all_pass"] = all;
  write(out, doc);
  return 0;
}

}  // namespace

std::vector<Command> commands() {
  const SmoothingConfig sm;
  const KssConfig kc;
  const StrichartzConfig sc;
  std::vector<Command> c;

  c.push_back({"selftest",
               "Run the invariant suite (special functions, transform, kernels, propagator, estimates)",
               "Output (JSON): program, version, command, config, checks[] with name, value, threshold, "
               "comparison and pass for each invariant, and all_pass.\nExit status 0 when every check passes, "
               "1 otherwise.",
               {seed()},
               run_selftest});

  c.push_back({"propagate",
               "Evolve one partial wave with the spectral propagator and/or the Crank-Nicolson oracle",
               "Output (JSON): channel (description, eigenfunction orders, normalization factor of the eigenfunctions), initial, initial_norm, and per method "
               "(spectral, oracle) alpha, times, snapshots[] (t, norm and, with --states true, the state: grid "
               "and f, g as [re, im] pairs), unitarity_drift (max relative norm change); spectral also carries "
               "energy_sign. With --method both, relative_l2_difference[] per snapshot.\nThe grid is "
               "uniform-trapezoid; a JSON spinor file (grid, f, g) may replace the gaussian initial state.",
               join(std::vector<Param>{real("alpha", 0.3, "Circulation of the Aharonov-Bohm potential"),
                                       integer("l", 0, "Partial-wave index"), real("t", 1.0, "Final time"),
                                       integer("snapshots", 2, "Equally spaced snapshots in [0, t], endpoints included"),
                                       real("dt-oracle", 1e-3, "Time step of the Crank-Nicolson oracle"),
                                       choice("method", "both", "Evolution route", {"spectral", "oracle", "both"}),
                                       {"initial", Kind::text, "gaussian(8,1,both)",
                                        "Initial state: gaussian(r0,sigma,f|g|both) or a JSON spinor file"},
                                       choice("energy-sign", "signed", "Energy label of the minus component",
                                              {"signed", "plus-both"}),
                                       flag("states", true, "Write the snapshot states (true|false)")},
                    std::vector<Param>{real("rmax", 20.0, "Radial extent of the uniform grid"),
                                       integer("nr", 2000, "Radial nodes of the uniform grid"),
                                       real("emax", 40.0, "Energy cutoff of the spectral grid"),
                                       integer("ne", 4000, "Energy nodes of the spectral grid")}),
               run_propagate});

  c.push_back({"smoothing",
               "Local smoothing estimate: || |x|^-gamma |D|^(1/2-gamma) u ||_{L2(R_t; L2)} against the constant",
               "Output (JSON): reports[] (one per l and gamma) with lhs, rhs (data norm) of the worst sample, "
               "measured (worst ratio lhs / ||f||), bound (closed-form constant), ratio = measured / bound, "
               "tolerance, pass (ratio <= 1 + tolerance) and details: exact_ratio, finite_gamma_upper, "
               "divergent, route_relative_gap, samples[] (bump, norm, lhs, ratio, time_route).\n"
               "CSV columns: alpha, l, gamma, sample, data_norm, lhs, ratio, bound, exact_ratio, "
               "time_route_ratio (full line, time-domain route), half_line_ratio (t >= 0 only), pass.\n"
               "The time integral is over the whole line; the half-line value is reported alongside.",
               join(std::vector<Param>{real("alpha", sm.alpha, "Circulation"),
                                       ints("l", {0}, "Partial-wave indices"),
                                       reals("gamma", {sm.gamma}, "Smoothing exponents"),
                                       integer("samples", sm.samples, "Random bumps per (l, gamma)"), seed(),
                                       integer("time-samples", sm.time_samples, "Samples also checked by the time-domain route"),
                                       real("t-window", sm.t_window, "Half-width T of the time window [-T, T]"),
                                       real("dt", sm.dt, "Snapshot spacing of the time-domain route"),
                                       real("tolerance", sm.tolerance, "Allowed relative excess over the bound")},
                    grid_params("", sm.grid, "spectral"), grid_params("time-", sm.time_grid, "time-domain"),
                    std::vector<Param>{format("json")}),
               run_smoothing});

  c.push_back({"kss",
               "KSS growth of ||w u||_{L2([0,T]; L2)} with w = <x>^mu or |x|^mu",
               "Output (JSON): reports[] per (mu, weight) with details.norms[] per T, exponent (log-log fit), "
               "expected, expected_exponent, distance_to_statement and distance_to_proof for -1/2 < mu < 0, "
               "measured (deviation), bound (tolerance), pass.\nCSV columns: mu, weight, T, norm, "
               "normalized_norm (norm / ||f||).",
               join(std::vector<Param>{real("alpha", kc.alpha, "Circulation"),
                                       reals("mu", {0.0, -0.25, -0.5, -1.0}, "Weight exponents (<= 0)"),
                                       choice("weight", "both", "Weight kind", {"japanese", "homogeneous", "both"}),
                                       reals("T", kc.horizons, "Time horizons"),
                                       real("dt", kc.dt, "Snapshot spacing"),
                                       integer("l-min", kc.l_min, "Lowest channel of the data"),
                                       integer("l-max", kc.l_max, "Highest channel of the data"), seed(),
                                       real("r0-min", kc.bumps.r0_lo, "Smallest bump centre"),
                                       real("r0-max", kc.bumps.r0_hi, "Largest bump centre"),
                                       real("sigma-min", kc.bumps.sigma_lo, "Smallest bump width"),
                                       real("sigma-max", kc.bumps.sigma_hi, "Largest bump width"),
                                       real("tolerance", kc.tolerance, "Exponent tolerance (0.05 is used at mu = 0)")},
                    grid_params("", kc.grid, "spectral"), std::vector<Param>{format("json")}),
               run_kss});

  c.push_back({"strichartz",
               "Weighted Strichartz estimate in L^q_t L^q_{rdr} L^2_omega and the Sobolev trace inequality",
               "Output (JSON): reports[] per (q, epsilon) with lhs = ||r^(1/2-eps-2/q) u||, rhs = "
               "||D^(1/2+eps-1/q) Lambda^(-eps+eps/q) f|| of the worst sample, measured (max ratio), bound "
               "(--ratio-cap), pass, details.samples[] (lhs, rhs, ratio, tail_fraction); sobolev_trace[] per "
               "epsilon with sup_r r^(1/2-eps) ||f(r.)|| / ||D^(1/2+eps) Lambda^(-eps) f||.\nCSV columns: q (inf "
               "for the trace inequality), epsilon, sample, lhs, rhs, ratio, tail_fraction.",
               join(std::vector<Param>{real("alpha", sc.alpha, "Circulation"), reals("q", {sc.q}, "Exponents q >= 2"),
                                       reals("epsilon", {sc.epsilon}, "Values of epsilon in (0, 1/2)"),
                                       integer("samples", sc.samples, "Random multi-channel data"),
                                       integer("l-min", sc.l_min, "Lowest channel"),
                                       integer("l-max", sc.l_max, "Highest channel"), seed(),
                                       real("t-window", sc.t_window, "Half-width T of the time window [-T, T]"),
                                       real("dt", sc.dt, "Snapshot spacing"),
                                       real("ratio-cap", sc.ratio_cap, "Largest ratio counted as bounded"),
                                       flag("sobolev", true, "Also run the Sobolev trace inequality (true|false)")},
                    grid_params("", sc.grid, "spectral"), std::vector<Param>{format("json")}),
               run_strichartz});

  c.push_back({"bessel",
               "Bessel bounds: (1/R) int_0^R J_lambda^2 r dr and sup_r sqrt(r) |J_lambda(r)|",
               "CSV columns for --quantity average: lambda, R, average (R geometric from --rmin to --rmax).\n"
               "CSV columns for --quantity landau: lambda, r_max (max(--rmax, 4 lambda^2 + 50)), sup.\n"
               "JSON: the same rows as objects under rows[].",
               {reals("lambda", {1.0, 2.0, 5.0, 10.0}, "Bessel orders"), real("rmin", 1.0, "Smallest R"),
                real("rmax", 1000.0, "Largest R (search range for landau)"),
                integer("points", 25, "Number of R values"),
                choice("quantity", "average", "Quantity", {"average", "landau"}), format("csv")},
               run_bessel});

  c.push_back({"kernel",
               "Closed-form kernel of |D|^p in a partial wave, optionally against quadrature",
               "Kernel entries of int H(Er) H(Es)^dagger E^(1+p) dE (H in the sqrt(pi/2) normalisation), whose "
               "matrix is ((F, G), (G, F)); A and B are the upper- and lower-component parts (F = A + B, G = B - A). "
               "r = s uses the diagonal formula (p < -1).\nCSV columns: l, alpha, power, r, s, F, G, A, B and, "
               "with --quadrature true, F_quadrature, G_quadrature, relative_error, converged.",
               {real("alpha", 0.5, "Circulation"), ints("l", {0}, "Partial-wave indices"),
                reals("power", {-0.6}, "Exponents p of E^(1+p)"), reals("r", {0.5}, "First radii"),
                reals("s", {1.0, 2.0}, "Second radii"),
                flag("quadrature", false, "Also evaluate the damped quadrature oracle (true|false)"),
                real("quad-emax", 6000.0, "Energy cutoff of the quadrature"),
                real("quad-delta", 0.005, "Finest damping rate of the quadrature"), format("csv")},
               run_kernel});

  c.push_back({"normcheck",
               "Check ||D_A f|| = ||nabla_A f|| on random smooth multi-channel data",
               "Output (JSON): reports[] per sample with lhs (||D_A f||), rhs (||nabla_A f||), measured "
               "(relative difference), bound (tolerance), pass; all_pass.\nCSV columns: sample, dirac_norm, "
               "gradient_norm, relative_difference, pass.",
               {real("alpha", 0.5, "Circulation"), integer("l-min", -1, "Lowest channel"),
                integer("l-max", 1, "Highest channel"), integer("samples", 5, "Random data sets"), seed(),
                real("rmax", 40.0, "Radial extent"), integer("nr", 4000, "Radial nodes"),
                real("tolerance", 1e-3, "Allowed relative difference"), format("json")},
               run_normcheck});
  return c;
}

}  // namespace cli
