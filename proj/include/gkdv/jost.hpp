#pragma once

#include <array>
#include <limits>

#include "gkdv/cubic_spectrum.hpp"
#include "gkdv/field.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {

// Scattering solutions of the linearized third-order ODE at c = 1,
//   u''' - u' + lambda u + (V u)' = 0,   V = f'(phi) = p phi^{p-1},
// normalized to pure exponentials e^{mu_j x} at one end; built from
// Volterra / fixed-point integral equations by exponential-kernel
// product-integration marching.
namespace jost {

struct Config {
    double L = 40.0;            // line grid [-L, L]
    double h = 5e-4;            // grid spacing
    double contraction_target = 0.5;
    double contraction_abort = 0.9;
    double fixed_point_tol = 1e-12;
    int max_iter = 400;
    double extension_span = 15.0; // ODE-continuation reach past the cap
    double settle_window = 4.0;   // trailing window for limit read-off
    double settle_tol = 1e-6;
};

RealField jost_grid(const Config& cfg);

// One solution written as f = e^{mu x} m(x); m, m', m'' are stored on
// the grid, valid on indices [lo, hi].
struct Solution {
    cplx lambda{}, mu{};
    std::size_t lo = 0, hi = 0;
    ComplexField m, mp, mpp;
    double xcap = std::numeric_limits<double>::quiet_NaN(); // x0/x1/x2/x3

    cplx f(std::size_t i) const { return std::exp(mu * m.x(i)) * m.values[i]; }
    cplx fp(std::size_t i) const {
        return std::exp(mu * m.x(i)) * (mu * m.values[i] + mp.values[i]);
    }
    cplx fpp(std::size_t i) const {
        return std::exp(mu * m.x(i)) *
               (mu * mu * m.values[i] + 2.0 * mu * mp.values[i] + mpp.values[i]);
    }
};

// Jost solutions normalized at +inf (m1) and -inf (m3).
Solution solve_m1(cplx lambda, double p, const Config& cfg = {});
Solution solve_m3(cplx lambda, double p, const Config& cfg = {});

// Bounded-at--inf solution ftilde2 = e^{mu2 x} m2tilde: fixed point of the
// three-term operator on (-inf, x0], continued to x > x0 through the ODE.
Solution solve_m2tilde(cplx lambda, double p, const Config& cfg = {});

// Auxiliary solutions F_j = e^{mu_j x} M_j with M1 -> 1 at -inf and
// M2, M3 -> 1 at +inf, each on its contraction range plus a finite
// ODE-continued extension.
Solution solve_F(int j, cplx lambda, double p, const Config& cfg = {});

// Truncated Neumann iteration for m1 with the same quadrature (oracle).
ComplexField neumann_m1(cplx lambda, double p, int terms, const Config& cfg = {});

// b(x) = f_a f_b' - f_a' f_b on the overlap of the valid ranges
// (zero-filled outside).
ComplexField wronskian_b(const Solution& a, const Solution& b);

struct EvansResult {
    cplx lambda;
    cplx D;       // lim_{x->+inf} m3(x,-lambda)
    cplx D_alt;   // lim_{x->-inf} m1(x,lambda)
    double settle;
};
EvansResult evans(cplx lambda, double p, const Config& cfg = {});

struct Connection {
    cplx c21, c22, c23; // ftilde2 = c21 f1 + c22 F2 + c23 F3
    cplx c31, c32, c33; // f3     = c31 f1 + c32 F2 + c33 F3
    double cond = 0;    // condition estimate of the matching matrix
};
Connection connection_of(const Solution& m1, const Solution& m2t,
                         const Solution& m3, const Solution& F2,
                         const Solution& F3);

// c0(lambda) = lambda c23(lambda) / D(-lambda) through quartic
// least-squares fits of numerator and denominator on i[-0.08, 0.08]
// (both vanish at 0; the quotient is regular).
struct C0Fit {
    std::array<cplx, 4> c23_coef{};  // c23 ~ sum_k coef[k-1] lambda^k
    std::array<cplx, 3> dm_coef{};   // D(-lambda) ~ sum_k coef[k-2] lambda^k
    cplx operator()(cplx lambda) const;
};
C0Fit make_c0fit(double p, const Config& cfg = {});

// Everything at one lambda: solutions, connection, Evans values, the
// corrected f2 = lambda ftilde2 - c0 f3, and the Wronskian fields the
// resolvent needs.
struct Bundle {
    cplx lambda;
    double p = 0;
    Config cfg;
    Solution m1, m3, m2t, F2, F3;
    Connection conn;
    cplx D{}, Dminus{}, W0{}, c0{};
    cplx W{};                    // det[f1 f2 f3; ...'] at x = 0
    double w_constancy = 0;      // relative variation of W across x
    ComplexField f2, f2p, f2pp;  // assembled corrected solution
    ComplexField b13, b12, b23;  // Wronskians with f2 in place
    ComplexField bt12, bt32;     // b-tilde fields f_j vs ftilde2
};
Bundle build_bundle(cplx lambda, double p, const C0Fit* c0fit = nullptr,
                    const Config& cfg = {});

struct WronskianCheck {
    cplx W, lambdaDW0;
    double residual;    // |W - lambda D W0| / (|lambda D W0| + 1e-30)
    double constancy;   // relative x-variation of W
};
WronskianCheck wronskian_identity_check(const Bundle& b);

} // namespace jost
} // namespace gkdv
