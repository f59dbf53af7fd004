#pragma once

#include "gkdv/field.hpp"

namespace gkdv {

// Traveling-wave data for u_t = -(u_xx + f(u))_x with f(u) = |u|^{p-1} u.
struct SolitonParams {
    double p = 2.0; // nonlinearity power, 1 < p < 5
    double c = 1.0; // wave speed, c > 0

    void validate() const;
};

namespace profiles {

// Ground state at c = 1:
//   phi(x) = ((p+1)/2)^{1/(p-1)} sech^{2/(p-1)}((p-1) x / 2),
// solving phi'' = phi - phi^p.
double phi(double x, double p);
double phi_x(double x, double p);   // = -phi(x) tanh((p-1)x/2)
double phi_xx(double x, double p);  // = phi - phi^p

// Rescaled wave phi_c(x) = c^{1/(p-1)} phi(sqrt(c) x) and derivatives.
double phi_c(double x, const SolitonParams& sp);
double phi_c_x(double x, const SolitonParams& sp);
double phi_c_xx(double x, const SolitonParams& sp);

// d/dc phi_c = c^{-1} phi_c/(p-1) + c^{-1} x phi_c'/2.
double phi_c_dc(double x, const SolitonParams& sp);

// beta(p) = (2(p+1))^{1/(p-1)}: the coefficient in phi(x) ~ beta e^{-|x|}
// as |x| -> infinity (c = 1).
double beta(double p);

// Scaling generator (c = 1): Lambda_p v = x v'/2 + v/(p-1).
RealField lambda_p(const RealField& v, double p);

// Conserved-mass profile q(c) = ||phi_c||_{L^2}^2 / 2 and its c-derivative.
// The L^2 norm of phi is evaluated by quadrature on `grid`.
double mass_q(double c, double p, const RealField& grid);
double mass_q_prime(double c, double p, const RealField& grid);

// Generalized kernel of the linearization and its dual basis:
//   xi1 = phi_c',   xi2 = d_c phi_c,
//   eta1 = theta1 int_{-inf}^x d_c phi_c + theta2 phi_c,   eta2 = theta3 phi_c,
// normalised so that <xi_i, eta_j> = delta_ij.
struct KernelFunctions {
    RealField xi1, xi2, eta1, eta2;
    double theta1 = 0, theta2 = 0, theta3 = 0;
    double gram[2][2] = {{0, 0}, {0, 0}};      // <xi_i, eta_j> as computed
    double gram_residual = 0;                  // max |gram - identity|
    // Residual of the same Gram matrix when theta2 is taken as
    // ||d_c phi_c||_{L^1}^2 / q'(c) instead of the orthogonalising value.
    double gram_residual_l1_variant = 0;
};

KernelFunctions kernel_functions(const SolitonParams& sp, const RealField& grid,
                                 double tol = 1e-7);

} // namespace profiles
} // namespace gkdv
