#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/jost.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/resolvent.hpp"

using namespace gkdv;

namespace {

const double p = 2.0;

ComplexField apply_shifted(const ComplexField& u, const ComplexField& upp,
                           cplx lam) {
    // (L - lambda)u = d/dx(-u'' + u - p phi^{p-1} u) - lambda u
    ComplexField br = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double V = p * std::pow(profiles::phi(u.x(i), p), p - 1.0);
        br.values[i] = -upp.values[i] + u.values[i] - V * u.values[i];
    }
    ComplexField d = fd_derivative4(br);
    for (std::size_t i = 0; i < u.size(); ++i) d.values[i] -= lam * u.values[i];
    return d;
}

double sup_window(const ComplexField& f, double a, double b) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.x(i) >= a && f.x(i) <= b) s = std::max(s, std::abs(f.values[i]));
    return s;
}

} // namespace

TEST_CASE("resolvent residual (L - lambda) R(lambda) g = g") {
    jost::Config cfg;
    jost::C0Fit fit = jost::make_c0fit(p, cfg);
    RealField grid = jost::jost_grid(cfg);
    ComplexField g =
        to_complex(sampled_like(grid, [](double x) { return std::exp(-x * x); }));
    for (double t : {0.5, 2.0}) {
        cplx lam(0, t);
        jost::Bundle b = jost::build_bundle(lam, p, &fit, cfg);
        resolvent::ResolventResult r = resolvent::apply_resolvent(g, b);
        ComplexField res = apply_shifted(r.u, r.upp, lam);
        for (std::size_t i = 0; i < res.size(); ++i)
            res.values[i] -= g.values[i];
        CHECK(sup_window(res, -15.0, 15.0) < 1e-4 * norm_sup(g));
    }
}

TEST_CASE("regularized and direct forms agree off the origin") {
    jost::Config cfg;
    jost::C0Fit fit = jost::make_c0fit(p, cfg);
    RealField grid = jost::jost_grid(cfg);
    ComplexField g = to_complex(sampled_like(
        grid, [](double x) { return x * std::exp(-0.7 * x * x); }));
    resolvent::ProjectionPair proj = resolvent::make_projections(p, cfg);
    resolvent::ZeroEnergyData zed = resolvent::make_zero_energy_data(p, cfg);
    ComplexField qg = proj.Q(g);
    // P annihilates Q-projected data
    CHECK(norm_l2(proj.P(qg)) < 1e-10 * norm_l2(qg));
    for (double t : {0.05, 0.1}) {
        jost::Bundle b = jost::build_bundle(cplx(0, t), p, &fit, cfg);
        resolvent::ResolventResult dir = resolvent::apply_resolvent(qg, b);
        ComplexField reg = resolvent::apply_resolvent_regularized(qg, b, zed, proj);
        ComplexField r0 = resolvent::apply_r0(qg, b, zed);
        double dmax = 0, scale = norm_sup(dir.u);
        for (std::size_t i = 0; i < reg.size(); ++i) {
            double x = reg.x(i);
            if (x < -15.0 || x > 15.0) continue;
            dmax = std::max(dmax, std::abs(reg.values[i] + r0.values[i] -
                                           dir.u.values[i]));
        }
        CHECK(dmax < 1e-3 * scale);
    }
}

TEST_CASE("regularized resolvent stays bounded toward the origin") {
    jost::Config cfg;
    jost::C0Fit fit = jost::make_c0fit(p, cfg);
    RealField grid = jost::jost_grid(cfg);
    ComplexField g =
        to_complex(sampled_like(grid, [](double x) { return std::exp(-x * x); }));
    resolvent::ProjectionPair proj = resolvent::make_projections(p, cfg);
    resolvent::ZeroEnergyData zed = resolvent::make_zero_energy_data(p, cfg);
    ComplexField qg = proj.Q(g);
    double prev = -1;
    for (double t : {0.02, 0.005, 0.001}) {
        jost::Bundle b = jost::build_bundle(cplx(0, t), p, &fit, cfg);
        ComplexField reg = resolvent::apply_resolvent_regularized(qg, b, zed, proj);
        double n = resolvent::sech_weighted_norm(reg, 0.25);
        CHECK(n > 0.0);
        if (prev >= 0) CHECK(std::abs(n - prev) < 0.1 * prev); // plateau
        prev = n;
    }
}

TEST_CASE("unprojected data is rejected") {
    jost::Config cfg;
    jost::C0Fit fit = jost::make_c0fit(p, cfg);
    RealField grid = jost::jost_grid(cfg);
    ComplexField g = to_complex(
        sampled_like(grid, [](double x) { return profiles::phi(x, 2.0); }));
    resolvent::ProjectionPair proj = resolvent::make_projections(p, cfg);
    resolvent::ZeroEnergyData zed = resolvent::make_zero_energy_data(p, cfg);
    jost::Bundle b = jost::build_bundle(cplx(0, 0.05), p, &fit, cfg);
    CHECK_THROWS_AS(resolvent::apply_resolvent_regularized(g, b, zed, proj),
                    NotProjected);
}
