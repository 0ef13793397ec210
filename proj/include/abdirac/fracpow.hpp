#pragma once

// Fractional powers of the radial Dirac operator: closed-form kernels built
// from Weber-Schafheitlin integrals, an independent quadrature oracle for
// them, the spectral-route operator itself, and the angular multiplier.

#include "abdirac/partialwave.hpp"
#include "abdirac/spectral.hpp"

namespace abdirac {

// int_0^inf J_nu(r t) J_mu(s t) t^{-lambda} dt for 0 < r < s.
// Throws DomainError outside nu + mu - lambda + 1 > 0, lambda > -1 and
// UsageError when r >= s (swap the roles of the two Bessel factors).
double weber_schafheitlin(double nu, double mu, double lambda, double r, double s);

// The same integral with nu = mu and r = s = tau; needs lambda > 0 and
// 2 nu - lambda + 1 > 0.
double weber_schafheitlin_diagonal(double nu, double lambda, double tau);

// Kernel entries of int H(Er) H(Es)^dagger E^{1+power} dE, with H the 2x2
// eigenfunction matrix in the sqrt(pi/2) normalisation. The matrix is
// ((F, G), (G, F)).
struct KernelABParts {
  double A;  // Bessel pair of the upper component
  double B;  // Bessel pair of the lower component
};

struct KernelValue {
  double F;
  double G;
  static KernelValue from_parts(const KernelABParts& p) { return {p.A + p.B, -p.A + p.B}; }
  KernelABParts parts() const { return {(F - G) / 2.0, (F + G) / 2.0}; }
};

// Checks the convergence conditions of the kernel integral for this channel
// and exponent; throws InvalidParameter otherwise.
void check_kernel_power(const Channel& ch, double power);

KernelABParts kernel_parts_closed_form(const Channel& ch, double power, double r, double s);
KernelValue kernel_closed_form(const Channel& ch, double power, double r, double s);
// r = s = tau; requires power < -1 (the diagonal integral converges).
KernelValue kernel_diagonal(const Channel& ch, double power, double tau);

// r^nu / s^(nu + power + 2): the power-law weight in front of each part.
double kernel_radial_weight(double nu, double power, double r, double s);

struct KernelQuadrature {
  KernelValue value;
  KernelABParts parts;
  // False when the two Richardson estimates disagree by more than the
  // tolerance passed in.
  bool converged;
  double spread;  // relative disagreement between the estimates
};

// Oracle: E-quadrature on (0, e_max] with damping e^{-d E} for
// d in {4 delta, 2 delta, delta} and extrapolation d -> 0 (two-point estimate
// from the two finest levels, checked against the coarser pair). delta = 0
// integrates without damping (only sensible for power < -2).
KernelQuadrature kernel_quadrature(const Channel& ch, double power, double r, double s,
                                   double e_max, double delta, double tolerance = 1e-3);

// How the multiplier E^gamma acts on the minus (negative-energy) component.
//  absolute:  E^gamma on both components, i.e. |D|^gamma. Self-adjoint and a
//             semigroup in gamma; this is the operator in the estimates.
//  principal: (-E)^gamma = e^{i pi gamma} E^gamma on the minus component.
//             Reduces to D for gamma = 1 and is a semigroup, but is only
//             self-adjoint for integer gamma.
enum class PowerConvention { absolute, principal };

std::string to_string(PowerConvention c);
PowerConvention power_convention_from_string(const std::string& name);

RadialSpinor apply_fractional_power(const ChannelTransform& t, double gamma, const RadialSpinor& phi,
                                    PowerConvention conv = PowerConvention::absolute);
RadialSpinor apply_fractional_power(const Channel& ch, double gamma, const RadialSpinor& phi,
                                    PowerConvention conv = PowerConvention::absolute);

// Lambda_omega^s on a channel set: factor (1 + l^2)^{s/2} on the upper
// component of channel l, (1 + (l+1)^2)^{s/2} on the lower one.
ChannelSet angular_multiplier(double s, const ChannelSet& set);

}  // namespace abdirac
