#include "abdirac/spectral.hpp"

#include <cmath>
#include <numbers>

#include "abdirac/errors.hpp"
#include "abdirac/specfun.hpp"

namespace abdirac {

namespace {

constexpr cplx kI{0.0, 1.0};

double parity_sign(int branch, int power) {
  if (branch > 0) return 1.0;
  return (power % 2 == 0) ? 1.0 : -1.0;
}

// Real matrix times complex matrix as one real GEMM on [Re | Im].
Eigen::MatrixXcd real_times(const Eigen::MatrixXd& k, const Eigen::MatrixXcd& x, bool transpose) {
  const Eigen::Index m = x.cols();
  Eigen::MatrixXd split(x.rows(), 2 * m);
  split.leftCols(m) = x.real();
  split.rightCols(m) = x.imag();
  Eigen::MatrixXd y = transpose ? Eigen::MatrixXd(k.transpose() * split) : Eigen::MatrixXd(k * split);
  Eigen::MatrixXcd out(y.rows(), m);
  out.real() = y.leftCols(m);
  out.imag() = y.rightCols(m);
  return out;
}

Eigen::Map<const Eigen::VectorXd> weights_of(const std::vector<double>& w) {
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

}  // namespace

Channel Channel::make(int l, double alpha) {
  if (!std::isfinite(alpha)) throw InvalidParameter("Channel: alpha must be finite");
  const double kappa = l + alpha;
  int branch = kappa >= 0.0 ? 1 : -1;
  if (kappa > -1.0 && kappa < 0.0) branch = kappa > -0.5 ? 1 : -1;
  return Channel(l, alpha, branch);
}

std::string Channel::describe() const {
  return "l=" + std::to_string(l_) + " alpha=" + std::to_string(alpha_) +
         " orders=(" + std::to_string(f_order()) + ", " + std::to_string(g_order()) + ")" +
         (critical() ? " critical" : "");
}

std::string to_string(EnergySign s) {
  return s == EnergySign::signed_pair ? "signed" : "plus-both";
}

EnergySign energy_sign_from_string(const std::string& name) {
  if (name == "signed") return EnergySign::signed_pair;
  if (name == "plus-both") return EnergySign::plus_both;
  throw InvalidParameter("unknown energy sign convention '" + name + "'");
}

double eigen_normalization(EigenNormalization n) {
  return n == EigenNormalization::bessel ? std::sqrt(std::numbers::pi / 2.0) : std::sqrt(0.5);
}

SpectralCoeff::SpectralCoeff(EnergyGrid grid)
    : grid_(std::move(grid)), plus_(grid_.size()), minus_(grid_.size()) {}

SpectralCoeff::SpectralCoeff(EnergyGrid grid, cvec plus, cvec minus)
    : grid_(std::move(grid)), plus_(std::move(plus)), minus_(std::move(minus)) {
  if (plus_.size() != grid_.size() || minus_.size() != grid_.size())
    throw InvalidParameter("SpectralCoeff: length does not match grid");
  for (std::size_t k = 0; k < plus_.size(); ++k)
    if (!std::isfinite(std::abs(plus_[k])) || !std::isfinite(std::abs(minus_[k])))
      throw InvalidParameter("SpectralCoeff: non-finite entry");
}

SpectralCoeff& SpectralCoeff::operator+=(const SpectralCoeff& o) {
  if (!(grid_ == o.grid_)) throw InvalidParameter("SpectralCoeff: grid mismatch");
  for (std::size_t k = 0; k < plus_.size(); ++k) {
    plus_[k] += o.plus_[k];
    minus_[k] += o.minus_[k];
  }
  return *this;
}

SpectralCoeff operator+(SpectralCoeff a, const SpectralCoeff& b) { return a += b; }

double l2_norm(const SpectralCoeff& c) {
  const auto& w = c.grid().weights();
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * (std::norm(c.plus()[k]) + std::norm(c.minus()[k]));
  return std::sqrt(s);
}

RadialSpinor eigenfunction(const Channel& ch, double energy, const RadialGrid& grid,
                           EigenNormalization norm) {
  if (!(energy > 0.0)) throw InvalidParameter("eigenfunction: energy must be positive");
  const specfun::BesselJ jf{specfun::BesselOrder(ch.f_order())};
  const specfun::BesselJ jg{specfun::BesselOrder(ch.g_order())};
  const double c = eigen_normalization(norm);
  const double sf = c * parity_sign(ch.branch(), ch.l());
  const double sg = c * parity_sign(ch.branch(), ch.l() + 1);
  RadialSpinor out(grid);
  const auto& r = grid.nodes();
  for (std::size_t j = 0; j < r.size(); ++j) {
    out.f()[j] = sf * jf(energy * r[j]);
    out.g()[j] = kI * sg * jg(energy * r[j]);
  }
  return out;
}

EigenMatrix eigen_matrix(const Channel& ch, double energy, double r, EigenNormalization norm) {
  const double c = eigen_normalization(norm);
  const cplx f = c * parity_sign(ch.branch(), ch.l()) *
                 specfun::bessel_j(specfun::BesselOrder(ch.f_order()), energy * r);
  const cplx g = kI * c * parity_sign(ch.branch(), ch.l() + 1) *
                 specfun::bessel_j(specfun::BesselOrder(ch.g_order()), energy * r);
  // chi_{-E} = (f, -g), so -chi_{-E} = (-f, g).
  return {{{f, g}, {-f, g}}};
}

RadialSpinor apply_radial_dirac(const Channel& ch, const RadialSpinor& phi) {
  const auto& r = phi.grid().nodes();
  const cvec df = differentiate(phi.grid(), phi.f());
  const cvec dg = differentiate(phi.grid(), phi.g());
  const double kappa = ch.kappa();
  RadialSpinor out(phi.grid());
  for (std::size_t j = 0; j < r.size(); ++j) {
    out.f()[j] = -kI * (dg[j] + (kappa + 1.0) / r[j] * phi.g()[j]);
    out.g()[j] = -kI * (df[j] - kappa / r[j] * phi.f()[j]);
  }
  return out;
}

BesselTable::BesselTable(double order, const EnergyGrid& eg, const RadialGrid& rg)
    : order_(order), k_(eg.size(), rg.size()) {
  const specfun::BesselJ j{specfun::BesselOrder(order)};
  const auto& e = eg.nodes();
  const auto& r = rg.nodes();
  const Eigen::Index ne = k_.rows();
  const Eigen::Index nr = k_.cols();
  if (same_nodes(eg, rg)) {
    // Symmetric: fill the lower triangle column by column, then mirror.
    for (Eigen::Index c = 0; c < nr; ++c)
      for (Eigen::Index k = c; k < ne; ++k) k_(k, c) = j(e[k] * r[c]);
    for (Eigen::Index c = 0; c < nr; ++c)
      for (Eigen::Index k = 0; k < c; ++k) k_(k, c) = k_(c, k);
  } else {
    for (Eigen::Index c = 0; c < nr; ++c)
      for (Eigen::Index k = 0; k < ne; ++k) k_(k, c) = j(e[k] * r[c]);
  }
}

std::shared_ptr<const BesselTable> BesselTableCache::get(double order, const EnergyGrid& eg,
                                                         const RadialGrid& rg) {
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->order == order && it->eg == eg && it->rg == rg) {
      entries_.splice(entries_.begin(), entries_, it);
      return entries_.front().table;
    }
  }
  // Drop the oldest entry first so its memory is released before building.
  while (capacity_ > 0 && entries_.size() >= capacity_) entries_.pop_back();
  auto table = std::make_shared<const BesselTable>(order, eg, rg);
  if (capacity_ > 0) entries_.push_front(Entry{order, eg, rg, table});
  return table;
}

ChannelTransform::ChannelTransform(const Channel& ch, RadialGrid rg, EnergyGrid eg,
                                   BesselTableCache* cache)
    : ch_(ch), rg_(std::move(rg)), eg_(std::move(eg)) {
  if (cache) {
    tf_ = cache->get(ch_.f_order(), eg_, rg_);
    tg_ = cache->get(ch_.g_order(), eg_, rg_);
  } else {
    tf_ = std::make_shared<const BesselTable>(ch_.f_order(), eg_, rg_);
    tg_ = ch_.g_order() == ch_.f_order() ? tf_
                                         : std::make_shared<const BesselTable>(ch_.g_order(), eg_, rg_);
  }
}

void ChannelTransform::forward_columns(const Eigen::MatrixXcd& f_in, const Eigen::MatrixXcd& g_in,
                                       Eigen::MatrixXcd& plus, Eigen::MatrixXcd& minus) const {
  const auto w = weights_of(rg_.weights());
  if (f_in.rows() != w.size() || g_in.rows() != w.size())
    throw InvalidParameter("ChannelTransform: input length does not match radial grid");
  const Eigen::MatrixXcd a = real_times(tf_->matrix(), w.asDiagonal() * f_in, false);
  const Eigen::MatrixXcd b = real_times(tg_->matrix(), w.asDiagonal() * g_in, false);
  const double n = eigen_normalization(EigenNormalization::isometric);
  const double sf = n * parity_sign(ch_.branch(), ch_.l());
  const cplx sg = kI * n * parity_sign(ch_.branch(), ch_.l() + 1);
  // <chi_E, phi> pairs f with sf and g with conj(sg) = -sg.
  plus = sf * a - sg * b;
  minus = -(sf * a + sg * b);
}

void ChannelTransform::inverse_columns(const Eigen::MatrixXcd& plus, const Eigen::MatrixXcd& minus,
                                       Eigen::MatrixXcd& f_out, Eigen::MatrixXcd& g_out) const {
  const auto w = weights_of(eg_.weights());
  if (plus.rows() != w.size() || minus.rows() != w.size())
    throw InvalidParameter("ChannelTransform: coefficient length does not match energy grid");
  const double n = eigen_normalization(EigenNormalization::isometric);
  const double sf = n * parity_sign(ch_.branch(), ch_.l());
  const cplx sg = kI * n * parity_sign(ch_.branch(), ch_.l() + 1);
  f_out = sf * real_times(tf_->matrix(), w.asDiagonal() * (plus - minus), true);
  g_out = sg * real_times(tg_->matrix(), w.asDiagonal() * (plus + minus), true);
}

std::vector<SpectralCoeff> ChannelTransform::forward(std::span<const RadialSpinor> phis) const {
  const Eigen::Index nr = static_cast<Eigen::Index>(rg_.size());
  const Eigen::Index m = static_cast<Eigen::Index>(phis.size());
  Eigen::MatrixXcd f(nr, m), g(nr, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const RadialSpinor& p = phis[c];
    if (!(p.grid() == rg_)) throw InvalidParameter("ChannelTransform: spinor is not on the radial grid");
    f.col(c) = Eigen::Map<const Eigen::VectorXcd>(p.f().data(), nr);
    g.col(c) = Eigen::Map<const Eigen::VectorXcd>(p.g().data(), nr);
  }
  Eigen::MatrixXcd plus, minus;
  forward_columns(f, g, plus, minus);
  std::vector<SpectralCoeff> out;
  out.reserve(phis.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    SpectralCoeff s(eg_);
    Eigen::Map<Eigen::VectorXcd>(s.plus().data(), plus.rows()) = plus.col(c);
    Eigen::Map<Eigen::VectorXcd>(s.minus().data(), minus.rows()) = minus.col(c);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RadialSpinor> ChannelTransform::inverse(std::span<const SpectralCoeff> cs) const {
  const Eigen::Index ne = static_cast<Eigen::Index>(eg_.size());
  const Eigen::Index m = static_cast<Eigen::Index>(cs.size());
  Eigen::MatrixXcd plus(ne, m), minus(ne, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    if (!(cs[c].grid() == eg_)) throw InvalidParameter("ChannelTransform: coefficients are not on the energy grid");
    plus.col(c) = Eigen::Map<const Eigen::VectorXcd>(cs[c].plus().data(), ne);
    minus.col(c) = Eigen::Map<const Eigen::VectorXcd>(cs[c].minus().data(), ne);
  }
  Eigen::MatrixXcd f, g;
  inverse_columns(plus, minus, f, g);
  std::vector<RadialSpinor> out;
  out.reserve(cs.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    RadialSpinor s(rg_);
    Eigen::Map<Eigen::VectorXcd>(s.f().data(), f.rows()) = f.col(c);
    Eigen::Map<Eigen::VectorXcd>(s.g().data(), g.rows()) = g.col(c);
    out.push_back(std::move(s));
  }
  return out;
}

SpectralCoeff ChannelTransform::forward(const RadialSpinor& phi) const {
  return std::move(forward(std::span<const RadialSpinor>(&phi, 1)).front());
}

RadialSpinor ChannelTransform::inverse(const SpectralCoeff& c) const {
  return std::move(inverse(std::span<const SpectralCoeff>(&c, 1)).front());
}

RadialSpinor ChannelTransform::apply(const RadialSpinor& phi, const Multiplier& m) const {
  SpectralCoeff c = forward(phi);
  const auto& e = eg_.nodes();
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto [mp, mm] = m(e[k]);
    c.plus()[k] *= mp;
    c.minus()[k] *= mm;
  }
  return inverse(c);
}

SpectralCoeff forward_transform(const Channel& ch, const RadialSpinor& phi, const EnergyGrid& eg) {
  return ChannelTransform(ch, phi.grid(), eg).forward(phi);
}

RadialSpinor inverse_transform(const Channel& ch, const SpectralCoeff& c, const RadialGrid& rg) {
  return ChannelTransform(ch, rg, c.grid()).inverse(c);
}

double eigen_residual_sup(const Channel& ch, double energy, const RadialGrid& grid, double r_lo, double r_hi) {
  const RadialSpinor chi = eigenfunction(ch, energy, grid);
  const RadialSpinor d = apply_radial_dirac(ch, chi);
  const auto& r = grid.nodes();
  double worst = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j] < r_lo || r[j] > r_hi) continue;
    worst = std::max({worst, std::abs(d.f()[j] - energy * chi.f()[j]), std::abs(d.g()[j] - energy * chi.g()[j])});
  }
  return worst;
}

}  // namespace abdirac
