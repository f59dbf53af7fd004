#pragma once

#include "gkdv/profiles.hpp"

namespace gkdv {

// Linearization of the flow at phi_c:
//   L_plus v = -v'' + c v - p phi_c^{p-1} v      (self-adjoint)
//   L  v     = d/dx (L_plus v)
//   L* v     = -L_plus (d/dx v)
// Derivatives are spectral on periodic grids and 4th-order finite
// differences on line grids.
namespace linop {

RealField apply_Lplus(const RealField& v, const SolitonParams& sp);
ComplexField apply_Lplus(const ComplexField& v, const SolitonParams& sp);

RealField apply_L(const RealField& v, const SolitonParams& sp);
ComplexField apply_L(const ComplexField& v, const SolitonParams& sp);

RealField apply_L_adjoint(const RealField& v, const SolitonParams& sp);
ComplexField apply_L_adjoint(const ComplexField& v, const SolitonParams& sp);

// Nonnegative functional vanishing exactly on multiples of phi (c = 1):
//   V[psi] = (3(p-1) / (2(p+1))) int |(psi/phi)'|^2 phi^{p+1} dx.
// Its vanishing characterises the kernel direction in the no-embedded-
// eigenvalue argument.  The quotient is formed where phi > floor.
double virial_mm08_functional(const ComplexField& psi, double p,
                              double floor = 1e-12);

// The same quantity obtained from -Re <psi, L_plus(psi')mu> with
// mu = -phi'/phi; used as a cross-check of the integration by parts.
double virial_mm08_crosscheck(const ComplexField& psi, double p);

} // namespace linop
} // namespace gkdv
