#pragma once

// Time evolution i du/dt = D u channel by channel: exact phases in the
// spectral representation, an independent Crank-Nicolson finite-difference
// oracle, and space-time norms of trajectories.

#include <map>
#include <memory>
#include <span>
#include <string>

#include "abdirac/fracpow.hpp"
#include "abdirac/partialwave.hpp"
#include "abdirac/spectral.hpp"

namespace abdirac {

// Evolution of one channel through the spectral representation. The
// coefficients of the initial state are computed once; any number of
// snapshots can then be produced by batched inverse transforms.
class SpectralPropagator {
 public:
  SpectralPropagator(std::shared_ptr<const ChannelTransform> transform, const RadialSpinor& phi0,
                     EnergySign sign = kDefaultEnergySign);

  const ChannelTransform& transform() const { return *t_; }
  std::shared_ptr<const ChannelTransform> transform_ptr() const { return t_; }
  const SpectralCoeff& initial_coefficients() const { return c0_; }
  EnergySign sign() const { return sign_; }

  // Coefficients at time t.
  SpectralCoeff coefficients_at(double t) const;
  RadialSpinor state_at(double t) const;
  std::vector<RadialSpinor> states_at(std::span<const double> times) const;

  // Radial densities |f|^2 + |g|^2 of the evolved state (optionally after the
  // spectral multiplier E^power on both components), one column per time.
  Eigen::MatrixXd densities(std::span<const double> times, double power = 0.0) const;

 private:
  std::shared_ptr<const ChannelTransform> t_;
  SpectralCoeff c0_;
  EnergySign sign_;
};

RadialSpinor evolve_spectral(const Channel& ch, const RadialSpinor& phi0, double t,
                             const EnergyGrid& eg = default_energy_grid(),
                             EnergySign sign = kDefaultEnergySign);

// Crank-Nicolson on a uniform-trapezoid grid. The lower block is the centred
// stencil of apply_radial_dirac for -i(d/dr - kappa/r); the upper block is
// its adjoint in the grid inner product, so the discrete operator is exactly
// self-adjoint and each step exactly unitary. f and g vanish at r = 0 and
// beyond r_max.
class CrankNicolson {
 public:
  CrankNicolson(const Channel& ch, const RadialGrid& grid, double dt);
  ~CrankNicolson();
  CrankNicolson(const CrankNicolson&) = delete;
  CrankNicolson& operator=(const CrankNicolson&) = delete;

  double dt() const { return dt_; }
  void step(RadialSpinor& phi) const;
  RadialSpinor evolve(const RadialSpinor& phi0, int steps) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double dt_;
};

// Evolves to time t with ceil(|t| / dt) equal steps.
RadialSpinor evolve_oracle(const Channel& ch, const RadialSpinor& phi0, double t, double dt = 1e-3);

struct EnergySignSelection {
  EnergySign chosen;
  double discrepancy_signed;
  double discrepancy_plus_both;
};

// Evolves phi0 to time t with both spectral conventions and with the
// oracle; picks the convention closer to the oracle.
EnergySignSelection select_energy_sign(const Channel& ch, const RadialSpinor& phi0, double t,
                                       double dt, const EnergyGrid& eg = default_energy_grid());

struct Trajectory {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<ChannelSet> states;
  // Present when the trajectory came from the spectral route; needed by the
  // smoothing norm.
  std::map<int, std::shared_ptr<const ChannelTransform>> transforms;

  void validate() const;
};

// Spectral evolution of every channel of f0 to the given times.
Trajectory evolve_trajectory(const ChannelSet& f0, double alpha, std::span<const double> times,
                             const EnergyGrid& eg = default_energy_grid(),
                             EnergySign sign = kDefaultEnergySign, BesselTableCache* cache = nullptr);

enum class NormKind { homogeneous, japanese, smoothing, strichartz };

std::string to_string(NormKind k);

// homogeneous: ||r^mu u||_{L2_t L2}        (weight = mu)
// japanese:    ||<r>^mu u||_{L2_t L2}      (weight = mu)
// smoothing:   |||x|^-gamma |D|^{1/2-gamma} u||_{L2_t L2}   (weight = gamma)
// strichartz:  ||r^beta u||_{Lq_t Lq_{rdr} L2_omega}        (weight = beta)
struct NormSpec {
  NormKind kind;
  double weight;
  double q = 2.0;
};

struct NormRecord {
  NormKind kind;
  double weight;
  double q;
  double t_begin;
  double t_end;
  double value;
};

// Time integral by the trapezoid rule over the snapshots.
NormRecord mixed_norm(const Trajectory& traj, const NormSpec& spec);

// Space-time integral of a radial density matrix (rows: grid nodes,
// columns: times): returns int dt int w(r) rho(t,r)^{q/2} r dr (no root).
double space_time_integral(const RadialGrid& grid, const Eigen::MatrixXd& density,
                           std::span<const double> times, const std::vector<double>& radial_weight,
                           double q = 2.0);

}  // namespace abdirac
