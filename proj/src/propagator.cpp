#include "abdirac/propagator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "abdirac/errors.hpp"

namespace abdirac {

namespace {

constexpr cplx kI{0.0, 1.0};

// Phase factors for the two components at time t.
std::pair<cplx, cplx> phases(EnergySign sign, double e, double t) {
  const cplx down = std::exp(-kI * e * t);
  return {down, sign == EnergySign::signed_pair ? std::conj(down) : down};
}

Eigen::Map<const Eigen::VectorXcd> view(const cvec& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

SpectralPropagator::SpectralPropagator(std::shared_ptr<const ChannelTransform> transform,
                                       const RadialSpinor& phi0, EnergySign sign)
    : t_(std::move(transform)), c0_(t_->forward(phi0)), sign_(sign) {}

SpectralCoeff SpectralPropagator::coefficients_at(double t) const {
  SpectralCoeff c = c0_;
  const auto& e = c.grid().nodes();
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto [p, m] = phases(sign_, e[k], t);
    c.plus()[k] *= p;
    c.minus()[k] *= m;
  }
  return c;
}

RadialSpinor SpectralPropagator::state_at(double t) const { return t_->inverse(coefficients_at(t)); }

std::vector<RadialSpinor> SpectralPropagator::states_at(std::span<const double> times) const {
  std::vector<SpectralCoeff> cs;
  cs.reserve(times.size());
  for (double t : times) cs.push_back(coefficients_at(t));
  return t_->inverse(std::span<const SpectralCoeff>(cs));
}

Eigen::MatrixXd SpectralPropagator::densities(std::span<const double> times, double power) const {
  const auto& e = c0_.grid().nodes();
  const Eigen::Index ne = static_cast<Eigen::Index>(e.size());
  const Eigen::Index nr = static_cast<Eigen::Index>(t_->radial_grid().size());
  const Eigen::Index nt = static_cast<Eigen::Index>(times.size());
  Eigen::VectorXcd p0 = view(c0_.plus()), m0 = view(c0_.minus());
  if (power != 0.0) {
    for (Eigen::Index k = 0; k < ne; ++k) {
      const double s = std::pow(e[k], power);
      p0[k] *= s;
      m0[k] *= s;
    }
  }
  Eigen::MatrixXd rho(nr, nt);
  // Blocks of snapshots keep the GEMM efficient without holding every state.
  constexpr Eigen::Index block = 64;
  Eigen::MatrixXcd plus, minus, f, g;
  for (Eigen::Index c0 = 0; c0 < nt; c0 += block) {
    const Eigen::Index m = std::min(block, nt - c0);
    plus.resize(ne, m);
    minus.resize(ne, m);
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index k = 0; k < ne; ++k) {
        const auto [pp, mm] = phases(sign_, e[k], times[c0 + c]);
        plus(k, c) = p0[k] * pp;
        minus(k, c) = m0[k] * mm;
      }
    }
    t_->inverse_columns(plus, minus, f, g);
    rho.middleCols(c0, m) = f.cwiseAbs2() + g.cwiseAbs2();
  }
  return rho;
}

RadialSpinor evolve_spectral(const Channel& ch, const RadialSpinor& phi0, double t, const EnergyGrid& eg,
                             EnergySign sign) {
  auto tr = std::make_shared<const ChannelTransform>(ch, phi0.grid(), eg);
  return SpectralPropagator(tr, phi0, sign).state_at(t);
}

struct CrankNicolson::Impl {
  Eigen::SparseMatrix<cplx> rhs;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
};

CrankNicolson::CrankNicolson(const Channel& ch, const RadialGrid& grid, double dt)
    : impl_(std::make_unique<Impl>()), dt_(dt) {
  if (grid.scheme() != QuadratureScheme::uniform_trapezoid)
    throw InvalidParameter("CrankNicolson: requires a uniform-trapezoid radial grid");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("CrankNicolson: dt must be positive");
  const auto& r = grid.nodes();
  const auto& w = grid.weights();
  const int n = static_cast<int>(r.size());
  if (n < 3) throw InvalidParameter("CrankNicolson: grid too small");
  const double h = r[1] - r[0];
  const double kappa = ch.kappa();

  // Lower block B (acts on f, produces g) from the centred stencil; the upper
  // block is W^-1 B^H W. Unknowns are interleaved as (f_1, g_1, f_2, g_2, ...).
  std::vector<Eigen::Triplet<cplx>> op;
  op.reserve(6 * n);
  auto fi = [](int j) { return 2 * j; };
  auto gi = [](int j) { return 2 * j + 1; };
  auto b = [&](int j, int k) -> cplx {
    if (k == j + 1) return -kI / (2.0 * h);
    if (k == j - 1) return kI / (2.0 * h);
    if (k == j) return kI * kappa / r[j];
    return 0.0;
  };
  for (int j = 0; j < n; ++j) {
    for (int k = std::max(0, j - 1); k <= std::min(n - 1, j + 1); ++k) {
      op.emplace_back(gi(j), fi(k), b(j, k));
      op.emplace_back(fi(j), gi(k), std::conj(b(k, j)) * w[k] / w[j]);
    }
  }
  Eigen::SparseMatrix<cplx> d(2 * n, 2 * n);
  d.setFromTriplets(op.begin(), op.end());
  Eigen::SparseMatrix<cplx> id(2 * n, 2 * n);
  id.setIdentity();
  const cplx half = kI * (0.5 * dt);
  Eigen::SparseMatrix<cplx> lhs = id + half * d;
  impl_->rhs = id - half * d;
  lhs.makeCompressed();
  impl_->lu.analyzePattern(lhs);
  impl_->lu.factorize(lhs);
  if (impl_->lu.info() != Eigen::Success) throw SolverError("CrankNicolson: factorisation failed");
}

CrankNicolson::~CrankNicolson() = default;

void CrankNicolson::step(RadialSpinor& phi) const {
  const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
  Eigen::VectorXcd u(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    u[2 * j] = phi.f()[j];
    u[2 * j + 1] = phi.g()[j];
  }
  if (impl_->rhs.rows() != u.size()) throw InvalidParameter("CrankNicolson: spinor is not on the solver grid");
  const Eigen::VectorXcd v = impl_->lu.solve(impl_->rhs * u);
  if (impl_->lu.info() != Eigen::Success || !v.allFinite()) throw SolverError("CrankNicolson: solve failed");
  for (Eigen::Index j = 0; j < n; ++j) {
    phi.f()[j] = v[2 * j];
    phi.g()[j] = v[2 * j + 1];
  }
}

RadialSpinor CrankNicolson::evolve(const RadialSpinor& phi0, int steps) const {
  RadialSpinor phi = phi0;
  for (int s = 0; s < steps; ++s) step(phi);
  return phi;
}

RadialSpinor evolve_oracle(const Channel& ch, const RadialSpinor& phi0, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("evolve_oracle: dt must be positive");
  if (t == 0.0) return phi0;
  const int steps = static_cast<int>(std::ceil(std::abs(t) / dt - 1e-9));
  const CrankNicolson cn(ch, phi0.grid(), t / steps);
  return cn.evolve(phi0, steps);
}

EnergySignSelection select_energy_sign(const Channel& ch, const RadialSpinor& phi0, double t, double dt,
                                       const EnergyGrid& eg) {
  const RadialSpinor ref = evolve_oracle(ch, phi0, t, dt);
  const double scale = l2_norm(ref);
  auto tr = std::make_shared<const ChannelTransform>(ch, phi0.grid(), eg);
  auto gap = [&](EnergySign s) {
    RadialSpinor d = SpectralPropagator(tr, phi0, s).state_at(t);
    d -= ref;
    return l2_norm(d) / scale;
  };
  EnergySignSelection sel{};
  sel.discrepancy_signed = gap(EnergySign::signed_pair);
  sel.discrepancy_plus_both = gap(EnergySign::plus_both);
  sel.chosen = sel.discrepancy_signed <= sel.discrepancy_plus_both ? EnergySign::signed_pair : EnergySign::plus_both;
  return sel;
}

void Trajectory::validate() const {
  if (times.size() != states.size()) throw InvalidParameter("Trajectory: times and states differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidParameter("Trajectory: times must be strictly ascending");
  for (std::size_t i = 1; i < states.size(); ++i)
    if (!(states[i].grid() == states[0].grid()) || states[i].l_min() != states[0].l_min() ||
        states[i].l_max() != states[0].l_max())
      throw InvalidParameter("Trajectory: snapshots must share grid and channel range");
}

Trajectory evolve_trajectory(const ChannelSet& f0, double alpha, std::span<const double> times,
                             const EnergyGrid& eg, EnergySign sign, BesselTableCache* cache) {
  Trajectory traj;
  traj.alpha = alpha;
  traj.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) traj.states.emplace_back(f0.grid(), f0.l_min(), f0.l_max());
  for (const auto& [l, phi] : f0) {
    auto tr = std::make_shared<const ChannelTransform>(Channel::make(l, alpha), f0.grid(), eg, cache);
    traj.transforms[l] = tr;
    const auto states = SpectralPropagator(tr, phi, sign).states_at(times);
    for (std::size_t i = 0; i < times.size(); ++i) traj.states[i].set(l, states[i]);
  }
  traj.validate();
  return traj;
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::homogeneous: return "homogeneous";
    case NormKind::japanese: return "japanese";
    case NormKind::smoothing: return "smoothing";
    case NormKind::strichartz: return "strichartz";
  }
  return "unknown";
}

double space_time_integral(const RadialGrid& grid, const Eigen::MatrixXd& density,
                           std::span<const double> times, const std::vector<double>& radial_weight,
                           double q) {
  const auto& w = grid.weights();
  if (density.rows() != static_cast<Eigen::Index>(w.size()) ||
      density.cols() != static_cast<Eigen::Index>(times.size()) || radial_weight.size() != w.size())
    throw InvalidParameter("space_time_integral: shape mismatch");
  std::vector<double> slice(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double rho = density(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      s += w[j] * radial_weight[j] * (q == 2.0 ? rho : std::pow(rho, 0.5 * q));
    }
    slice[i] = s;
  }
  double total = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) total += 0.5 * (times[i] - times[i - 1]) * (slice[i] + slice[i - 1]);
  return total;
}

NormRecord mixed_norm(const Trajectory& traj, const NormSpec& spec) {
  traj.validate();
  if (traj.times.size() < 2) throw InvalidParameter("mixed_norm: need at least two snapshots");
  if (!(spec.q >= 2.0) || !std::isfinite(spec.q)) throw InvalidParameter("mixed_norm: q must be finite and >= 2");
  if (spec.kind != NormKind::strichartz && spec.q != 2.0)
    throw UsageError("mixed_norm: only the strichartz kind takes q != 2");
  const RadialGrid& grid = traj.states.front().grid();
  const auto& r = grid.nodes();
  const std::size_t nt = traj.times.size();
  const Eigen::Index nr = static_cast<Eigen::Index>(r.size());

  std::vector<double> weight(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    switch (spec.kind) {
      case NormKind::homogeneous: weight[j] = std::pow(r[j], 2.0 * spec.weight); break;
      case NormKind::japanese: weight[j] = std::pow(1.0 + r[j] * r[j], spec.weight); break;
      case NormKind::smoothing: weight[j] = std::pow(r[j], -2.0 * spec.weight); break;
      case NormKind::strichartz: weight[j] = std::pow(r[j], spec.q * spec.weight); break;
    }
  }

  // Total radial density summed over channels (the L2 norm over the circle).
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(nr, static_cast<Eigen::Index>(nt));
  if (spec.kind == NormKind::smoothing) {
    const double p = 0.5 - spec.weight;
    for (const auto& [l, phi] : traj.states.front()) {
      (void)phi;
      auto it = traj.transforms.find(l);
      if (it == traj.transforms.end())
        throw UsageError("mixed_norm: smoothing kind needs the spectral transforms of the trajectory");
      const ChannelTransform& t = *it->second;
      std::vector<RadialSpinor> snaps;
      snaps.reserve(nt);
      for (const auto& s : traj.states) snaps.push_back(s.at(l));
      auto cs = t.forward(std::span<const RadialSpinor>(snaps));
      for (auto& c : cs) {
        const auto& e = c.grid().nodes();
        for (std::size_t k = 0; k < e.size(); ++k) {
          const double m = std::pow(e[k], p);
          c.plus()[k] *= m;
          c.minus()[k] *= m;
        }
      }
      const auto out = t.inverse(std::span<const SpectralCoeff>(cs));
      for (std::size_t i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < nr; ++j)
          rho(j, static_cast<Eigen::Index>(i)) += std::norm(out[i].f()[j]) + std::norm(out[i].g()[j]);
    }
  } else {
    for (std::size_t i = 0; i < nt; ++i)
      for (const auto& [l, phi] : traj.states[i]) {
        (void)l;
        for (Eigen::Index j = 0; j < nr; ++j)
          rho(j, static_cast<Eigen::Index>(i)) += std::norm(phi.f()[j]) + std::norm(phi.g()[j]);
      }
  }
  const double integral = space_time_integral(grid, rho, traj.times, weight, spec.q);
  return NormRecord{spec.kind, spec.weight, spec.q, traj.times.front(), traj.times.back(),
                    std::pow(std::max(integral, 0.0), 1.0 / spec.q)};
}

}  // namespace abdirac
