#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/jost.hpp"
#include "gkdv/profiles.hpp"

using namespace gkdv;

namespace {

double sup_on(const ComplexField& f, double a, double b,
              const ComplexField& g) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = f.x(i);
        if (x < a || x > b) continue;
        s = std::max(s, std::abs(f.values[i] - g.values[i]));
    }
    return s;
}

} // namespace

TEST_CASE("m1 against a truncated Neumann series at weak coupling") {
    // oracle: for lambda far from 0 the Volterra series converges fast and
    // its first terms are an independent approximation of the full solve
    jost::Config cfg;
    cplx lam(0.0, 4.0);
    jost::Solution m1 = jost::solve_m1(lam, 2.0, cfg);
    double prev = -1;
    for (int terms : {6, 10, 14}) {
        ComplexField neu = jost::neumann_m1(lam, 2.0, terms, cfg);
        double r = 0;
        for (std::size_t i = 0; i < m1.m.size(); ++i)
            r = std::max(r, std::abs(m1.m.values[i] - neu.values[i]));
        if (prev >= 0) CHECK(r < 0.1 * prev); // geometric convergence
        prev = r;
    }
    CHECK(prev < 1e-7);
}

TEST_CASE("Wronskian identity W(lambda) = lambda D(lambda) W0(lambda)") {
    jost::Config cfg;
    jost::C0Fit fit = jost::make_c0fit(2.0, cfg);
    for (double t : {0.05, 0.2, 1.0, 5.0}) {
        jost::Bundle b = jost::build_bundle(cplx(0, t), 2.0, &fit, cfg);
        jost::WronskianCheck wc = jost::wronskian_identity_check(b);
        CHECK(wc.residual < 1e-4);
        CHECK(wc.constancy < 1e-6);
    }
}

TEST_CASE("symmetry m1(-x, lambda) = m3(x, -lambda)") {
    jost::Config cfg;
    cplx lam(0.0, 0.8);
    jost::Solution m1 = jost::solve_m1(lam, 2.0, cfg);
    jost::Solution m3 = jost::solve_m3(-lam, 2.0, cfg);
    const std::size_t n = m1.m.size();
    double r = 0;
    for (std::size_t i = 0; i < n; ++i)
        r = std::max(r, std::abs(m1.m.values[i] - m3.m.values[n - 1 - i]));
    CHECK(r < 1e-8);
}

TEST_CASE("zero-energy structure") {
    jost::Config cfg;
    const double p = 2.0;
    const double beta = profiles::beta(p);
    jost::Solution m1 = jost::solve_m1(cplx(0, 0), p, cfg);
    jost::Solution m3 = jost::solve_m3(cplx(0, 0), p, cfg);

    // f1(., 0) = -beta^{-1} phi' (compared away from the left edge, where
    // the e^{-x} prefactor amplifies the marching error by e^{|x|})
    RealField grid = jost::jost_grid(cfg);
    ComplexField target = to_complex(grid);
    ComplexField f1 = to_complex(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        target.values[i] = -profiles::phi_x(grid.x(i), p) / beta;
        f1.values[i] = m1.f(i);
    }
    CHECK(sup_on(f1, -15.0, 40.0, target) < 1e-6);

    // b13(., 0) = 0 and its lambda-derivative vanishes as well: the finite
    // difference along the imaginary axis stays at noise level
    ComplexField b0 = jost::wronskian_b(m1, m3);
    double r0 = 0;
    for (const cplx& v : b0.values) r0 = std::max(r0, std::abs(v));
    CHECK(r0 < 1e-4);
    const double d = 0.01;
    jost::Solution m1a = jost::solve_m1(cplx(0, d), p, cfg);
    jost::Solution m3a = jost::solve_m3(cplx(0, d), p, cfg);
    jost::Solution m1b = jost::solve_m1(cplx(0, 2 * d), p, cfg);
    jost::Solution m3b = jost::solve_m3(cplx(0, 2 * d), p, cfg);
    ComplexField ba = jost::wronskian_b(m1a, m3a);
    ComplexField bb = jost::wronskian_b(m1b, m3b);
    double rd = 0;
    for (std::size_t i = 0; i < ba.size(); ++i) {
        double x = ba.x(i);
        if (x < -15.0 || x > 15.0) continue;
        rd = std::max(rd, std::abs((16.0 * ba.values[i].imag() -
                                    2.0 * bb.values[i].imag()) /
                                   (12.0 * d)));
    }
    CHECK(rd < 1e-4);
}

TEST_CASE("dual pairing fields at lambda = 0") {
    // b-tilde_{12}(., 0) = + beta^{-1} <Lambda_p phi, phi> eta2 and
    // b-tilde_{32}(., 0) = - the same; each compared on the half-line away
    // from the edge where its exponential prefactor amplifies noise
    jost::Config cfg;
    const double p = 2.0;
    RealField grid = jost::jost_grid(cfg);
    const double beta = profiles::beta(p);
    const double qp = profiles::mass_q_prime(1.0, p, grid);
    RealField phi = sampled_like(grid, [&](double x) { return profiles::phi(x, p); });
    RealField lam_phi = profiles::lambda_p(phi, p);
    const double G = inner(lam_phi, phi);

    jost::Solution m1 = jost::solve_m1(cplx(0, 0), p, cfg);
    jost::Solution m3 = jost::solve_m3(cplx(0, 0), p, cfg);
    jost::Solution m2t = jost::solve_m2tilde(cplx(0, 0), p, cfg);
    ComplexField bt12 = jost::wronskian_b(m1, m2t);
    ComplexField bt32 = jost::wronskian_b(m3, m2t);
    ComplexField tgt = to_complex(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        tgt.values[i] = G / (beta * qp) * phi.values[i];
    CHECK(sup_on(bt12, -15.0, 40.0, tgt) < 1e-5);
    for (auto& v : tgt.values) v = -v;
    CHECK(sup_on(bt32, -40.0, 15.0, tgt) < 1e-5);
}

TEST_CASE("Evans function at the origin and on the axis") {
    jost::Config cfg;
    jost::EvansResult d0 = jost::evans(cplx(0, 0), 2.0, cfg);
    CHECK(std::abs(d0.D) < 1e-5);
    jost::EvansResult dp = jost::evans(cplx(0, 1e-3), 2.0, cfg);
    jost::EvansResult dm = jost::evans(cplx(0, -1e-3), 2.0, cfg);
    CHECK(std::abs((dp.D - dm.D) / 2e-3) < 1e-4);
}
