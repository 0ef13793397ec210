#include "abdirac/partialwave.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "abdirac/errors.hpp"

namespace abdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_count(int m) {
  if (m < 2 || m % 2 != 0) throw InvalidParameter("SpinorField: angular count must be even and >= 2");
}

// e^{i n phi_k} for k = 0..M-1, reduced exactly mod M first.
cvec mode_table(int n, int m) {
  cvec out(m);
  for (int k = 0; k < m; ++k) {
    const long long idx = ((static_cast<long long>(n) * k) % m + m) % m;
    const double angle = kTwoPi * static_cast<double>(idx) / m;
    out[k] = {std::cos(angle), std::sin(angle)};
  }
  return out;
}

}  // namespace

SpinorField::SpinorField(RadialGrid grid, int angular_count)
    : grid_(std::move(grid)), m_(angular_count) {
  check_count(m_);
  phi1_.assign(grid_.size() * m_, 0.0);
  phi2_.assign(grid_.size() * m_, 0.0);
}

SpinorField::SpinorField(RadialGrid grid, int angular_count, cvec phi1, cvec phi2)
    : grid_(std::move(grid)), m_(angular_count), phi1_(std::move(phi1)), phi2_(std::move(phi2)) {
  check_count(m_);
  const std::size_t n = grid_.size() * m_;
  if (phi1_.size() != n || phi2_.size() != n)
    throw InvalidParameter("SpinorField: value array does not match grid x angles");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(std::abs(phi1_[i])) || !std::isfinite(std::abs(phi2_[i])))
      throw InvalidParameter("SpinorField: non-finite entry");
}

SpinorField SpinorField::sample(RadialGrid grid, int angular_count, const Sampler& fn) {
  SpinorField field(std::move(grid), angular_count);
  const auto& r = field.grid().nodes();
  for (std::size_t j = 0; j < r.size(); ++j) {
    for (int k = 0; k < angular_count; ++k) {
      const auto [a, b] = fn(r[j], field.angle(k));
      field.phi1(j, k) = a;
      field.phi2(j, k) = b;
    }
  }
  return field;
}

double SpinorField::angle(int k) const { return kTwoPi * k / m_; }

double l2_norm(const SpinorField& field) {
  const auto& w = field.grid().weights();
  const int m = field.angular_count();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double ring = 0.0;
    for (int k = 0; k < m; ++k) ring += std::norm(field.phi1(j, k)) + std::norm(field.phi2(j, k));
    s += w[j] * ring;
  }
  return std::sqrt(s * kTwoPi / m);
}

ChannelSet::ChannelSet(RadialGrid grid, int l_min, int l_max)
    : grid_(std::move(grid)), l_min_(l_min), l_max_(l_max) {
  if (l_max < l_min - 1) throw InvalidParameter("ChannelSet: l_max < l_min - 1");
  for (int l = l_min; l <= l_max; ++l) channels_.emplace(l, RadialSpinor(grid_));
}

RadialSpinor& ChannelSet::at(int l) {
  auto it = channels_.find(l);
  if (it == channels_.end()) throw InvalidParameter("ChannelSet: no channel l = " + std::to_string(l));
  return it->second;
}

const RadialSpinor& ChannelSet::at(int l) const {
  auto it = channels_.find(l);
  if (it == channels_.end()) throw InvalidParameter("ChannelSet: no channel l = " + std::to_string(l));
  return it->second;
}

void ChannelSet::set(int l, RadialSpinor spinor) {
  if (!(spinor.grid() == grid_)) throw InvalidParameter("ChannelSet: spinor grid differs from set grid");
  at(l) = std::move(spinor);
}

double l2_norm(const ChannelSet& set) {
  double s = 0.0;
  for (const auto& [l, ch] : set) {
    const double n = l2_norm(ch);
    s += n * n;
  }
  return std::sqrt(s);
}

void check_angular_resolution(int angular_count, int l_min, int l_max) {
  const int need = 2 * (std::abs(l_min) + std::abs(l_max) + 2);
  if (angular_count < need)
    throw AliasingError("angular count " + std::to_string(angular_count) + " too small for l in [" +
                        std::to_string(l_min) + ", " + std::to_string(l_max) + "]; need >= " +
                        std::to_string(need));
}

ChannelSet decompose(const SpinorField& field, int l_min, int l_max) {
  const int m = field.angular_count();
  check_angular_resolution(m, l_min, l_max);
  ChannelSet out(field.grid(), l_min, l_max);
  const std::size_t nr = field.grid().size();
  // f_l = sqrt(2 pi) (1/M) sum_k Phi_1 e^{-il phi_k}, likewise g_l with l+1.
  const double scale = std::sqrt(kTwoPi) / m;
  for (int l = l_min; l <= l_max; ++l) {
    const cvec e_f = mode_table(-l, m);
    const cvec e_g = mode_table(-(l + 1), m);
    RadialSpinor& ch = out.at(l);
    for (std::size_t j = 0; j < nr; ++j) {
      cplx sf = 0.0, sg = 0.0;
      for (int k = 0; k < m; ++k) {
        sf += field.phi1(j, k) * e_f[k];
        sg += field.phi2(j, k) * e_g[k];
      }
      ch.f()[j] = scale * sf;
      ch.g()[j] = scale * sg;
    }
  }
  return out;
}

SpinorField synthesize(const ChannelSet& set, int angular_count) {
  if (!set.empty()) check_angular_resolution(angular_count, set.l_min(), set.l_max());
  SpinorField field(set.grid(), angular_count);
  const double scale = 1.0 / std::sqrt(kTwoPi);
  const std::size_t nr = set.grid().size();
  for (const auto& [l, ch] : set) {
    const cvec e_f = mode_table(l, angular_count);
    const cvec e_g = mode_table(l + 1, angular_count);
    for (std::size_t j = 0; j < nr; ++j) {
      const cplx f = scale * ch.f()[j];
      const cplx g = scale * ch.g()[j];
      for (int k = 0; k < angular_count; ++k) {
        field.phi1(j, k) += f * e_f[k];
        field.phi2(j, k) += g * e_g[k];
      }
    }
  }
  return field;
}

double magnetic_gradient_norm(const ChannelSet& set, double alpha) {
  const auto& r = set.grid().nodes();
  const auto& w = set.grid().weights();
  double s = 0.0;
  for (const auto& [l, ch] : set) {
    const cvec df = differentiate(set.grid(), ch.f());
    const cvec dg = differentiate(set.grid(), ch.g());
    const double kf = l + alpha;
    const double kg = l + 1 + alpha;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double inv = 1.0 / r[j];
      s += w[j] * (std::norm(df[j]) + kf * kf * inv * inv * std::norm(ch.f()[j]) +
                   std::norm(dg[j]) + kg * kg * inv * inv * std::norm(ch.g()[j]));
    }
  }
  return std::sqrt(s);
}

}  // namespace abdirac
