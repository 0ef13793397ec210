#pragma once

// Generalised eigenfunctions of the radial Dirac operator in one partial
// wave, the operator itself, and the diagonalising Bessel-type transform.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <list>
#include <memory>
#include <string>
#include <utility>

#include "abdirac/grids.hpp"

namespace abdirac {

// Partial-wave channel l of the operator with circulation alpha, kappa = l + alpha.
//
// Eigenfunctions are (s^l J_a(Er), i s^{l+1} J_b(Er)) with a = s kappa and
// b = s (kappa + 1). Outside the critical range -1 < kappa < 0 the branch s
// is the sign of kappa and both orders are nonnegative. Inside it one order
// is necessarily negative; the branch is chosen so that the negative order
// has the smaller magnitude (the most regular of the two pure boundary
// conditions at the origin).
class Channel {
 public:
  static Channel make(int l, double alpha);

  int l() const { return l_; }
  double alpha() const { return alpha_; }
  double kappa() const { return l_ + alpha_; }
  double nu_f() const { return std::abs(kappa()); }
  double nu_g() const { return std::abs(kappa() + 1.0); }
  // +1 if l + alpha >= 0, else -1.
  int eps() const { return kappa() >= 0.0 ? 1 : -1; }
  bool critical() const { return kappa() > -1.0 && kappa() < 0.0; }

  int branch() const { return branch_; }
  double f_order() const { return branch_ * kappa(); }
  double g_order() const { return branch_ * (kappa() + 1.0); }

  std::string describe() const;

 private:
  Channel(int l, double alpha, int branch) : l_(l), alpha_(alpha), branch_(branch) {}
  int l_;
  double alpha_;
  int branch_;
};

// Energy label carried by the two spectral components. The plus component
// always belongs to +E. For the minus component the operator acts as -E
// (signed) or, as literally written in the source formula, as +E.
enum class EnergySign { signed_pair, plus_both };

std::string to_string(EnergySign s);
EnergySign energy_sign_from_string(const std::string& name);

// Convention validated against the finite-difference time stepper.
inline constexpr EnergySign kDefaultEnergySign = EnergySign::signed_pair;

// Overall factor of the eigenfunctions. `bessel` is sqrt(pi/2); `isometric`
// is 1/sqrt(2), which makes the transform an exact L2 isometry and is the one
// used by ChannelTransform.
enum class EigenNormalization { bessel, isometric };
double eigen_normalization(EigenNormalization n);

class SpectralCoeff {
 public:
  explicit SpectralCoeff(EnergyGrid grid);
  SpectralCoeff(EnergyGrid grid, cvec plus, cvec minus);

  const EnergyGrid& grid() const { return grid_; }
  const cvec& plus() const { return plus_; }
  const cvec& minus() const { return minus_; }
  cvec& plus() { return plus_; }
  cvec& minus() { return minus_; }

  SpectralCoeff& operator+=(const SpectralCoeff& o);

 private:
  EnergyGrid grid_;
  cvec plus_, minus_;
};

SpectralCoeff operator+(SpectralCoeff a, const SpectralCoeff& b);
double l2_norm(const SpectralCoeff& c);

RadialSpinor eigenfunction(const Channel& ch, double energy, const RadialGrid& grid,
                           EigenNormalization norm = EigenNormalization::bessel);

// 2x2 matrix with rows chi_E and -chi_{-E} at the point (E, r).
using EigenMatrix = std::array<std::array<cplx, 2>, 2>;
EigenMatrix eigen_matrix(const Channel& ch, double energy, double r,
                         EigenNormalization norm = EigenNormalization::bessel);

// (-i(d/dr + (kappa+1)/r) g, -i(d/dr - kappa/r) f) by finite differences.
RadialSpinor apply_radial_dirac(const Channel& ch, const RadialSpinor& phi);

// max |D chi_E - E chi_E| over the nodes in [r_lo, r_hi], with D from
// apply_radial_dirac (so the value measures the finite-difference error).
double eigen_residual_sup(const Channel& ch, double energy, const RadialGrid& grid, double r_lo, double r_hi);

// Table J_order(E_k r_j), k over the energy grid (rows), j over the radial
// grid (columns).
class BesselTable {
 public:
  BesselTable(double order, const EnergyGrid& eg, const RadialGrid& rg);
  double order() const { return order_; }
  const Eigen::MatrixXd& matrix() const { return k_; }

 private:
  double order_;
  Eigen::MatrixXd k_;
};

// Small LRU cache of Bessel tables so that neighbouring channels (which
// share orders) and repeated transforms reuse them.
class BesselTableCache {
 public:
  explicit BesselTableCache(std::size_t capacity = 3) : capacity_(capacity) {}
  std::shared_ptr<const BesselTable> get(double order, const EnergyGrid& eg, const RadialGrid& rg);
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    double order;
    EnergyGrid eg;
    RadialGrid rg;
    std::shared_ptr<const BesselTable> table;
  };
  std::size_t capacity_;
  std::list<Entry> entries_;
};

// The transform P_l between L2(r dr)^2 and L2(E dE)^2 for one channel.
class ChannelTransform {
 public:
  ChannelTransform(const Channel& ch, RadialGrid rg, EnergyGrid eg,
                   BesselTableCache* cache = nullptr);

  const Channel& channel() const { return ch_; }
  const RadialGrid& radial_grid() const { return rg_; }
  const EnergyGrid& energy_grid() const { return eg_; }

  SpectralCoeff forward(const RadialSpinor& phi) const;
  RadialSpinor inverse(const SpectralCoeff& c) const;

  // Batched versions; one GEMM per component for the whole batch.
  std::vector<SpectralCoeff> forward(std::span<const RadialSpinor> phis) const;
  std::vector<RadialSpinor> inverse(std::span<const SpectralCoeff> cs) const;

  // Multiplier per component: (m_plus(E), m_minus(E)).
  using Multiplier = std::function<std::pair<cplx, cplx>(double energy)>;
  RadialSpinor apply(const RadialSpinor& phi, const Multiplier& m) const;

  // Low-level batched access: columns are inputs. f_in, g_in are nR x m,
  // plus/minus are nE x m.
  void forward_columns(const Eigen::MatrixXcd& f_in, const Eigen::MatrixXcd& g_in,
                       Eigen::MatrixXcd& plus, Eigen::MatrixXcd& minus) const;
  void inverse_columns(const Eigen::MatrixXcd& plus, const Eigen::MatrixXcd& minus,
                       Eigen::MatrixXcd& f_out, Eigen::MatrixXcd& g_out) const;

 private:
  Channel ch_;
  RadialGrid rg_;
  EnergyGrid eg_;
  std::shared_ptr<const BesselTable> tf_, tg_;
};

SpectralCoeff forward_transform(const Channel& ch, const RadialSpinor& phi, const EnergyGrid& eg);
RadialSpinor inverse_transform(const Channel& ch, const SpectralCoeff& c, const RadialGrid& rg);

}  // namespace abdirac
