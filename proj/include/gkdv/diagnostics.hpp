#pragma once

#include <utility>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// Cutoffs, exponential weights, weighted norms and virial functionals
// used to monitor trajectories.
namespace diagnostics {

struct WeightConfig {
    double A = 800.0;
    double B = 20.0;
    double A1 = 2.714417616594906; // B^{1/3}
    double kappa = 0.25;           // in (0, p-1)
    double a = 0.125;              // weight decay rate, a <= kappa/2

    void validate(double p) const;
};

// Even C^inf cutoff: 1 on [-1,1], supported in [-2,2], monotone in |x|.
double chi(double x);
// Decreasing C^inf transition: 1 for x <= 1, 0 for x >= 2.
double theta1(double x);
// C^inf bump with support [1/2, 4], equal to 1 on [1,2].
double chi_tilde(double x);
// zeta_C(x) = exp(-(|x|/C)(1 - chi(x)))
double zeta(double x, double C);

RealField zeta_field(const RealField& grid, double C);
// varphi_C = int_0^x zeta_C^2 (odd primitive, cumulative quadrature)
RealField phi_weight(const RealField& grid, double C);
// vartheta_{iA1}(x) = theta_i(x / A1), i = 1 or 2
RealField theta_field(const RealField& grid, int i, double A1);
// varphi_{iAA1} = int_0^x zeta_A^2 vartheta_{iA1}^2
RealField phi_iAA1(const RealField& grid, int i, const WeightConfig& cfg);
// tilde-varphi_{nA1} = int_0^x chi_tilde(y / (2^{n-1} A1)) dy
RealField phi_tilde_n(const RealField& grid, int n, double A1);

// (Sigma_1, Sigma_2): || (theta_i zeta_A v)' || + || theta_i zeta_A v ||
std::pair<double, double> sigma_norms(const RealField& v, const WeightConfig& cfg);

// || sech(kappa x) v ||_{L2}
double sech_norm(const RealField& v, double kappa);

struct VirialValues {
    double I1 = 0, I2 = 0;          // 1/2 <v, varphi_{iAA1} v>
    std::vector<double> tildeI;      // 1/2 <v, tilde-varphi_{lA1} v>, l = 1..19
    double boldI20 = 0;              // sum_l A1^{-2l} tildeI_l
};
VirialValues virial_functionals(const RealField& v, const WeightConfig& cfg);

struct SmoothingResult {
    double integral = 0;                              // time integral of the
                                                      // weighted H1 norm squared
    std::vector<std::pair<double, double>> pointwise; // (t, weighted L2 norm)
};
// weight e^{-a <x>}, <x> = sqrt(1 + x^2)
SmoothingResult smoothing_integral(const std::vector<double>& times,
                                   const std::vector<RealField>& vs, double a);

} // namespace diagnostics
} // namespace gkdv
