#pragma once

// Quadrature grids for the measures r dr and E dE, radial spinors and the
// weighted L2 structure on them.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace abdirac {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class QuadratureScheme { composite_gauss, uniform_trapezoid };

std::string to_string(QuadratureScheme scheme);
QuadratureScheme scheme_from_string(const std::string& name);

// Nodes per Gauss-Legendre panel used by the composite scheme.
inline constexpr int kPanelNodes = 8;

// Plain quadrature rule for int f(x) dx (no measure folded in).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  void append(const QuadratureRule& other);
  std::size_t size() const { return nodes.size(); }
};

// Composite 8-node Gauss-Legendre on [a, b] with the given panel count.
QuadratureRule gauss_panels(double a, double b, int panels);

// Composite Gauss on [0, b] whose first panel [0, h] is replaced by a
// geometrically graded sequence [h q^k, h q^(k-1)], k = 1..levels, plus
// [0, h q^levels]; handles integrable power singularities at the origin.
QuadratureRule graded_gauss_panels(double b, int panels, int levels, double ratio = 0.2);

// Gauss panels on [lo, hi] with endpoints lo, lo/ratio, lo/ratio^2, ...
// (the last panel is clipped at hi).
QuadratureRule geometric_panels(double lo, double hi, double ratio);

namespace detail {
struct GridData {
  std::vector<double> nodes;
  std::vector<double> weights;  // measure weight x folded in
  double extent = 0.0;
  QuadratureScheme scheme = QuadratureScheme::composite_gauss;
};
}  // namespace detail

// Immutable grid on (0, extent] with weights for int f(x) x dx. Copies share
// storage. Tag distinguishes radial from energy grids at compile time.
template <class Tag>
class MeasureGrid {
 public:
  // Composite Gauss requires n to be a multiple of kPanelNodes.
  static MeasureGrid make(double extent, int n, QuadratureScheme scheme);
  // Grid from an arbitrary plain rule; the measure factor is folded in here.
  static MeasureGrid from_rule(const QuadratureRule& rule, double extent);

  const std::vector<double>& nodes() const { return data_->nodes; }
  const std::vector<double>& weights() const { return data_->weights; }
  double extent() const { return data_->extent; }
  QuadratureScheme scheme() const { return data_->scheme; }
  std::size_t size() const { return data_->nodes.size(); }

  double integrate(std::span<const double> values) const;

  bool operator==(const MeasureGrid& other) const {
    return data_ == other.data_ ||
           (nodes() == other.nodes() && weights() == other.weights());
  }

 private:
  explicit MeasureGrid(std::shared_ptr<const detail::GridData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::GridData> data_;
};

struct RadialTag {};
struct EnergyTag {};
using RadialGrid = MeasureGrid<RadialTag>;
using EnergyGrid = MeasureGrid<EnergyTag>;

extern template class MeasureGrid<RadialTag>;
extern template class MeasureGrid<EnergyTag>;

RadialGrid make_radial_grid(double r_max, int n, QuadratureScheme scheme);
EnergyGrid make_energy_grid(double e_max, int n, QuadratureScheme scheme);

// Default grids: (0, 40] with 4000 composite Gauss nodes.
RadialGrid default_radial_grid();
EnergyGrid default_energy_grid();

// True when both grids carry the same node values (Bessel tables are then
// symmetric).
template <class A, class B>
bool same_nodes(const MeasureGrid<A>& a, const MeasureGrid<B>& b) {
  return a.nodes() == b.nodes();
}

// One partial-wave channel: upper and lower radial components on a grid.
class RadialSpinor {
 public:
  explicit RadialSpinor(RadialGrid grid);
  RadialSpinor(RadialGrid grid, cvec f, cvec g);

  const RadialGrid& grid() const { return grid_; }
  const cvec& f() const { return f_; }
  const cvec& g() const { return g_; }
  cvec& f() { return f_; }
  cvec& g() { return g_; }
  std::size_t size() const { return f_.size(); }

  RadialSpinor& operator+=(const RadialSpinor& o);
  RadialSpinor& operator-=(const RadialSpinor& o);
  RadialSpinor& operator*=(cplx s);

 private:
  RadialGrid grid_;
  cvec f_, g_;
};

RadialSpinor operator+(RadialSpinor a, const RadialSpinor& b);
RadialSpinor operator-(RadialSpinor a, const RadialSpinor& b);
RadialSpinor operator*(cplx s, RadialSpinor a);

double l2_norm(const RadialSpinor& phi);
// <phi, psi> = sum_j w_j (conj(f_phi) f_psi + conj(g_phi) g_psi).
cplx inner(const RadialSpinor& phi, const RadialSpinor& psi);

// Second-order derivative on the (possibly non-uniform) grid nodes:
// centred three-point formula inside, one-sided three-point at the ends.
cvec differentiate(const RadialGrid& grid, std::span<const cplx> values);

}  // namespace abdirac
