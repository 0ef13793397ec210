#include "abdirac/grids.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>

#include "abdirac/errors.hpp"

namespace abdirac {

namespace {

using Gauss8 = boost::math::quadrature::gauss<double, kPanelNodes>;

void add_panel(QuadratureRule& rule, double a, double b) {
  static_assert(kPanelNodes % 2 == 0);
  const auto& x = Gauss8::abscissa();
  const auto& w = Gauss8::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Ascending order: negative abscissae first.
  for (int k = kPanelNodes / 2 - 1; k >= 0; --k) {
    rule.nodes.push_back(mid - half * x[k]);
    rule.weights.push_back(half * w[k]);
  }
  for (int k = 0; k < kPanelNodes / 2; ++k) {
    rule.nodes.push_back(mid + half * x[k]);
    rule.weights.push_back(half * w[k]);
  }
}

void check_finite_values(const cvec& v, const char* what) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidParameter(std::string(what) + ": non-finite entry");
}

}  // namespace

std::string to_string(QuadratureScheme scheme) {
  return scheme == QuadratureScheme::composite_gauss ? "composite-gauss" : "uniform-trapezoid";
}

QuadratureScheme scheme_from_string(const std::string& name) {
  if (name == "composite-gauss") return QuadratureScheme::composite_gauss;
  if (name == "uniform-trapezoid") return QuadratureScheme::uniform_trapezoid;
  throw InvalidParameter("unknown quadrature scheme '" + name + "'");
}

void QuadratureRule::append(const QuadratureRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

QuadratureRule gauss_panels(double a, double b, int panels) {
  if (!(b > a) || panels < 1) throw InvalidParameter("gauss_panels: need b > a and panels >= 1");
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * kPanelNodes);
  rule.weights.reserve(static_cast<std::size_t>(panels) * kPanelNodes);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) add_panel(rule, a + p * h, p + 1 == panels ? b : a + (p + 1) * h);
  return rule;
}

QuadratureRule graded_gauss_panels(double b, int panels, int levels, double ratio) {
  if (!(b > 0.0) || panels < 1 || levels < 0 || !(ratio > 0.0 && ratio < 1.0))
    throw InvalidParameter("graded_gauss_panels: invalid arguments");
  const double h = b / panels;
  QuadratureRule rule;
  double lo = h * std::pow(ratio, levels);
  add_panel(rule, 0.0, lo);
  for (int k = levels; k >= 1; --k) {
    const double hi = h * std::pow(ratio, k - 1);
    add_panel(rule, lo, hi);
    lo = hi;
  }
  if (panels > 1) rule.append(gauss_panels(h, b, panels - 1));
  return rule;
}

QuadratureRule geometric_panels(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi > lo) || !(ratio > 0.0 && ratio < 1.0))
    throw InvalidParameter("geometric_panels: invalid arguments");
  QuadratureRule rule;
  double a = lo;
  while (a < hi) {
    const double b = std::min(hi, a / ratio);
    add_panel(rule, a, b);
    a = b;
  }
  return rule;
}

template <class Tag>
MeasureGrid<Tag> MeasureGrid<Tag>::make(double extent, int n, QuadratureScheme scheme) {
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw InvalidParameter("grid: extent must be positive and finite");
  if (n < 16) throw InvalidParameter("grid: need at least 16 nodes");
  auto d = std::make_shared<detail::GridData>();
  d->extent = extent;
  d->scheme = scheme;
  if (scheme == QuadratureScheme::composite_gauss) {
    if (n % kPanelNodes != 0)
      throw InvalidParameter("grid: composite-gauss needs n divisible by " +
                             std::to_string(kPanelNodes));
    QuadratureRule rule = gauss_panels(0.0, extent, n / kPanelNodes);
    d->nodes = std::move(rule.nodes);
    d->weights = std::move(rule.weights);
    for (std::size_t j = 0; j < d->nodes.size(); ++j) d->weights[j] *= d->nodes[j];
  } else {
    // Trapezoid on x_j = j h, j = 0..n; the origin carries zero weight for
    // the measure x dx and is dropped.
    const double h = extent / n;
    d->nodes.resize(n);
    d->weights.resize(n);
    for (int j = 1; j <= n; ++j) {
      d->nodes[j - 1] = j * h;
      d->weights[j - 1] = h * (j * h);
    }
    d->weights.back() *= 0.5;
  }
  return MeasureGrid(std::move(d));
}

template <class Tag>
MeasureGrid<Tag> MeasureGrid<Tag>::from_rule(const QuadratureRule& rule, double extent) {
  if (rule.nodes.size() < 2 || rule.nodes.size() != rule.weights.size())
    throw InvalidParameter("grid: malformed quadrature rule");
  auto d = std::make_shared<detail::GridData>();
  d->extent = extent;
  d->scheme = QuadratureScheme::composite_gauss;
  d->nodes = rule.nodes;
  d->weights = rule.weights;
  for (std::size_t j = 0; j < d->nodes.size(); ++j) {
    if (!(d->nodes[j] > 0.0) || (j > 0 && !(d->nodes[j] > d->nodes[j - 1])) ||
        !(d->weights[j] > 0.0))
      throw InvalidParameter("grid: nodes must be positive and ascending, weights positive");
    d->weights[j] *= d->nodes[j];
  }
  return MeasureGrid(std::move(d));
}

template <class Tag>
double MeasureGrid<Tag>::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw InvalidParameter("grid: integrand length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += weights()[j] * values[j];
  return s;
}

template class MeasureGrid<RadialTag>;
template class MeasureGrid<EnergyTag>;

RadialGrid make_radial_grid(double r_max, int n, QuadratureScheme scheme) {
  return RadialGrid::make(r_max, n, scheme);
}

EnergyGrid make_energy_grid(double e_max, int n, QuadratureScheme scheme) {
  return EnergyGrid::make(e_max, n, scheme);
}

RadialGrid default_radial_grid() {
  static const RadialGrid grid = make_radial_grid(40.0, 4000, QuadratureScheme::composite_gauss);
  return grid;
}

EnergyGrid default_energy_grid() {
  static const EnergyGrid grid = make_energy_grid(40.0, 4000, QuadratureScheme::composite_gauss);
  return grid;
}

RadialSpinor::RadialSpinor(RadialGrid grid)
    : grid_(std::move(grid)), f_(grid_.size()), g_(grid_.size()) {}

RadialSpinor::RadialSpinor(RadialGrid grid, cvec f, cvec g)
    : grid_(std::move(grid)), f_(std::move(f)), g_(std::move(g)) {
  if (f_.size() != grid_.size() || g_.size() != grid_.size())
    throw InvalidParameter("RadialSpinor: component length does not match grid");
  check_finite_values(f_, "RadialSpinor");
  check_finite_values(g_, "RadialSpinor");
}

RadialSpinor& RadialSpinor::operator+=(const RadialSpinor& o) {
  if (!(grid_ == o.grid_)) throw InvalidParameter("RadialSpinor: grid mismatch");
  for (std::size_t j = 0; j < f_.size(); ++j) {
    f_[j] += o.f_[j];
    g_[j] += o.g_[j];
  }
  return *this;
}

RadialSpinor& RadialSpinor::operator-=(const RadialSpinor& o) {
  if (!(grid_ == o.grid_)) throw InvalidParameter("RadialSpinor: grid mismatch");
  for (std::size_t j = 0; j < f_.size(); ++j) {
    f_[j] -= o.f_[j];
    g_[j] -= o.g_[j];
  }
  return *this;
}

RadialSpinor& RadialSpinor::operator*=(cplx s) {
  for (std::size_t j = 0; j < f_.size(); ++j) {
    f_[j] *= s;
    g_[j] *= s;
  }
  return *this;
}

RadialSpinor operator+(RadialSpinor a, const RadialSpinor& b) { return a += b; }
RadialSpinor operator-(RadialSpinor a, const RadialSpinor& b) { return a -= b; }
RadialSpinor operator*(cplx s, RadialSpinor a) { return a *= s; }

double l2_norm(const RadialSpinor& phi) {
  const auto& w = phi.grid().weights();
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * (std::norm(phi.f()[j]) + std::norm(phi.g()[j]));
  return std::sqrt(s);
}

cplx inner(const RadialSpinor& phi, const RadialSpinor& psi) {
  if (!(phi.grid() == psi.grid())) throw InvalidParameter("inner: grid mismatch");
  const auto& w = phi.grid().weights();
  cplx s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    s += w[j] * (std::conj(phi.f()[j]) * psi.f()[j] + std::conj(phi.g()[j]) * psi.g()[j]);
  return s;
}

cvec differentiate(const RadialGrid& grid, std::span<const cplx> v) {
  const auto& x = grid.nodes();
  const std::size_t n = x.size();
  if (v.size() != n) throw InvalidParameter("differentiate: length mismatch");
  cvec d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = (-h2 / (h1 * (h1 + h2))) * v[i - 1] + ((h2 - h1) / (h1 * h2)) * v[i] +
           (h1 / (h2 * (h1 + h2))) * v[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = (-(2 * h1 + h2) / (h1 * (h1 + h2))) * v[0] + ((h1 + h2) / (h1 * h2)) * v[1] -
           (h1 / (h2 * (h1 + h2))) * v[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    d[n - 1] = (h2 / (h1 * (h1 + h2))) * v[n - 3] - ((h1 + h2) / (h1 * h2)) * v[n - 2] +
               ((2 * h2 + h1) / (h2 * (h1 + h2))) * v[n - 1];
  }
  return d;
}

}  // namespace abdirac
