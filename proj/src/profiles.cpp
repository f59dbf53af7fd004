#include "gkdv/profiles.hpp"

#include <cmath>

namespace gkdv {

void SolitonParams::validate() const {
    if (!(p > 1.0 && p < 5.0)) throw Error("SolitonParams: need 1 < p < 5");
    if (!(c > 0.0)) throw Error("SolitonParams: need c > 0");
}

namespace profiles {

double phi(double x, double p) {
    const double a = 0.5 * (p - 1.0);
    // sech^{2/(p-1)}(ax) computed through logs to stay finite for large |x|
    const double ax = std::abs(a * x);
    const double lsech = std::log(2.0) - ax - std::log1p(std::exp(-2.0 * ax));
    return std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0)) *
           std::exp((2.0 / (p - 1.0)) * lsech);
}

double phi_x(double x, double p) {
    return -phi(x, p) * std::tanh(0.5 * (p - 1.0) * x);
}

double phi_xx(double x, double p) {
    const double f = phi(x, p);
    return f - std::pow(f, p);
}

double phi_c(double x, const SolitonParams& sp) {
    return std::pow(sp.c, 1.0 / (sp.p - 1.0)) * phi(std::sqrt(sp.c) * x, sp.p);
}

double phi_c_x(double x, const SolitonParams& sp) {
    return std::pow(sp.c, 1.0 / (sp.p - 1.0) + 0.5) * phi_x(std::sqrt(sp.c) * x, sp.p);
}

double phi_c_xx(double x, const SolitonParams& sp) {
    return std::pow(sp.c, 1.0 / (sp.p - 1.0) + 1.0) * phi_xx(std::sqrt(sp.c) * x, sp.p);
}

double phi_c_dc(double x, const SolitonParams& sp) {
    return (phi_c(x, sp) / (sp.p - 1.0) + 0.5 * x * phi_c_x(x, sp)) / sp.c;
}

double beta(double p) { return std::pow(2.0 * (p + 1.0), 1.0 / (p - 1.0)); }

RealField lambda_p(const RealField& v, double p) {
    RealField d = fd_derivative4(v);
    RealField out = v;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.values[i] = 0.5 * v.x(i) * d.values[i] + v.values[i] / (p - 1.0);
    return out;
}

double mass_q(double c, double p, const RealField& grid) {
    RealField f = sampled_like(grid, [&](double x) {
        double v = phi(x, p);
        return v * v;
    });
    return 0.5 * std::pow(c, 0.5 * (5.0 - p) / (p - 1.0)) * integrate(f);
}

double mass_q_prime(double c, double p, const RealField& grid) {
    return 0.5 * (5.0 - p) / (p - 1.0) * mass_q(c, p, grid) / c;
}

KernelFunctions kernel_functions(const SolitonParams& sp, const RealField& grid,
                                 double tol) {
    sp.validate();
    if (grid.xmax() < 20.0 || grid.xmin > -20.0)
        throw GridTooSmall("kernel_functions: grid must cover at least [-20, 20]");

    KernelFunctions k;
    k.xi1 = sampled_like(grid, [&](double x) { return phi_c_x(x, sp); });
    k.xi2 = sampled_like(grid, [&](double x) { return phi_c_dc(x, sp); });
    RealField phic = sampled_like(grid, [&](double x) { return phi_c(x, sp); });

    const double qp = mass_q_prime(sp.c, sp.p, grid);
    const double S = integrate(k.xi2);          // int d_c phi_c dx
    const double l1 = norm_l1(k.xi2);

    k.theta1 = -1.0 / qp;
    k.theta3 = 1.0 / qp;
    // theta2 fixed by requiring <xi2, eta1> = 0; see the L1 variant below.
    k.theta2 = 0.5 * S * S / (qp * qp);
    const double theta2_l1 = l1 * l1 / qp;

    RealField prim = cumulative_integral4(k.xi2); // int_{-inf}^x d_c phi_c
    k.eta1 = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        k.eta1.values[i] = k.theta1 * prim.values[i] + k.theta2 * phic.values[i];
    k.eta2 = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        k.eta2.values[i] = k.theta3 * phic.values[i];

    const RealField* xis[2] = {&k.xi1, &k.xi2};
    const RealField* etas[2] = {&k.eta1, &k.eta2};
    double res = 0, res_l1 = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            k.gram[i][j] = inner(*xis[i], *etas[j]);
            double target = (i == j) ? 1.0 : 0.0;
            res = std::max(res, std::abs(k.gram[i][j] - target));
            // same pairing with the L1-based theta2 (only eta1 changes)
            double g = k.gram[i][j];
            if (j == 0) g += (theta2_l1 - k.theta2) * inner(*xis[i], phic);
            res_l1 = std::max(res_l1, std::abs(g - target));
        }
    k.gram_residual = res;
    k.gram_residual_l1_variant = res_l1;
    if (res > tol)
        throw BiorthogonalityFailure("kernel_functions: Gram residual " +
                                     std::to_string(res));
    return k;
}

} // namespace profiles
} // namespace gkdv
