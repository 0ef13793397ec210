#pragma once

// Partial-wave decomposition of a 2-spinor field on the plane. Channel l
// collects the angular mode e^{il phi} of the upper component and
// e^{i(l+1) phi} of the lower one. Normalisation is chosen so that
// sum_l ||channel_l||^2 equals the L2 norm of the field on R^2.

#include <functional>
#include <map>
#include <utility>

#include "abdirac/grids.hpp"

namespace abdirac {

// Field values on the polar grid (r_j, phi_k = 2 pi k / M), stored
// row-major as index j * M + k.
class SpinorField {
 public:
  SpinorField(RadialGrid grid, int angular_count);
  SpinorField(RadialGrid grid, int angular_count, cvec phi1, cvec phi2);

  using Sampler = std::function<std::pair<cplx, cplx>(double r, double phi)>;
  static SpinorField sample(RadialGrid grid, int angular_count, const Sampler& fn);

  const RadialGrid& grid() const { return grid_; }
  int angular_count() const { return m_; }
  double angle(int k) const;
  const cvec& phi1() const { return phi1_; }
  const cvec& phi2() const { return phi2_; }
  cplx& phi1(std::size_t j, int k) { return phi1_[j * m_ + k]; }
  cplx& phi2(std::size_t j, int k) { return phi2_[j * m_ + k]; }
  cplx phi1(std::size_t j, int k) const { return phi1_[j * m_ + k]; }
  cplx phi2(std::size_t j, int k) const { return phi2_[j * m_ + k]; }

 private:
  RadialGrid grid_;
  int m_;
  cvec phi1_, phi2_;
};

// L2(R^2) norm by radial quadrature times the (spectrally exact) angular
// trapezoid rule.
double l2_norm(const SpinorField& field);

// Channels l_min..l_max on a common radial grid. l_max = l_min - 1 is the
// empty set.
class ChannelSet {
 public:
  ChannelSet(RadialGrid grid, int l_min, int l_max);

  int l_min() const { return l_min_; }
  int l_max() const { return l_max_; }
  const RadialGrid& grid() const { return grid_; }
  bool empty() const { return channels_.empty(); }
  std::size_t size() const { return channels_.size(); }

  RadialSpinor& at(int l);
  const RadialSpinor& at(int l) const;
  // Replaces channel l; the spinor must live on the set's grid.
  void set(int l, RadialSpinor spinor);

  auto begin() const { return channels_.begin(); }
  auto end() const { return channels_.end(); }

 private:
  RadialGrid grid_;
  int l_min_, l_max_;
  std::map<int, RadialSpinor> channels_;
};

double l2_norm(const ChannelSet& set);

// Throws AliasingError unless M >= 2(|l_min| + |l_max| + 2).
void check_angular_resolution(int angular_count, int l_min, int l_max);

ChannelSet decompose(const SpinorField& field, int l_min, int l_max);
SpinorField synthesize(const ChannelSet& set, int angular_count);

// ||nabla_A Phi|| for the field represented by the channel set, with the
// Aharonov-Bohm potential of circulation alpha.
double magnetic_gradient_norm(const ChannelSet& set, double alpha);

}  // namespace abdirac
