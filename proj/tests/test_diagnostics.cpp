#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gkdv/diagnostics.hpp"

using namespace gkdv;

TEST_CASE("cutoff functions: supports, ranges, monotonicity") {
    using namespace diagnostics;
    // chi: even, 1 on [-1,1], 0 outside [-2,2], monotone in |x|
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(-0.99) == 1.0);
    CHECK(chi(2.0) == 0.0);
    CHECK(chi(-2.5) == 0.0);
    for (double x = 1.0; x < 2.0; x += 0.05) {
        CHECK(chi(x) == doctest::Approx(chi(-x)).epsilon(1e-15));
        CHECK(chi(x + 0.05) <= chi(x) + 1e-15);
        CHECK(chi(x) >= 0.0);
        CHECK(chi(x) <= 1.0);
    }
    // theta1: decreasing transition, NOT symmetric
    CHECK(theta1(0.0) == 1.0);
    CHECK(theta1(1.0) == 1.0);
    CHECK(theta1(2.0) == 0.0);
    CHECK(theta1(-5.0) == 1.0);
    // chi_tilde: supported in [1/2, 4], 1 on [1, 2]
    CHECK(chi_tilde(0.4) == 0.0);
    CHECK(chi_tilde(1.0) == 1.0);
    CHECK(chi_tilde(1.7) == 1.0);
    CHECK(chi_tilde(2.0) == 1.0);
    CHECK(chi_tilde(4.1) == 0.0);
    // zeta: 1 on [-C, C] core, exponential outside
    CHECK(diagnostics::zeta(0.0, 30.0) == 1.0);
    CHECK(diagnostics::zeta(0.5, 30.0) == 1.0);
    CHECK(diagnostics::zeta(90.0, 30.0) ==
          doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("weight configuration validation") {
    diagnostics::WeightConfig w;
    w.validate(2.0); // defaults are admissible
    diagnostics::WeightConfig bad = w;
    bad.A = w.B * w.B; // requires strict A > B^2
    CHECK_THROWS_AS(bad.validate(2.0), Error);
    bad = w;
    bad.kappa = 1.5; // not < p - 1 at p = 2
    CHECK_THROWS_AS(bad.validate(2.0), Error);
    bad = w;
    bad.a = w.kappa; // needs a <= kappa / 2
    CHECK_THROWS_AS(bad.validate(2.0), Error);
}

TEST_CASE("weight primitive differentiates back to zeta^2") {
    diagnostics::WeightConfig w;
    RealField grid = periodic_grid(40.0, 4096);
    RealField prim = diagnostics::phi_weight(grid, w.A);
    RealField der = fd_derivative4(prim);
    double r = 0;
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
        double z = diagnostics::zeta(grid.x(i), w.A);
        r = std::max(r, std::abs(der.values[i] - z * z));
    }
    CHECK(r < 1e-5);
    // odd primitive, zero at the origin
    std::size_t mid = grid.size() / 2;
    CHECK(std::abs(prim.values[mid]) < 1e-12);
}

TEST_CASE("sigma norms against direct quadrature") {
    diagnostics::WeightConfig w;
    RealField grid = periodic_grid(40.0, 4096);
    RealField v = sampled_like(grid, [](double x) {
        return std::exp(-0.3 * x * x) * (1.0 + 0.2 * std::sin(3.0 * x));
    });
    auto [s1, s2] = diagnostics::sigma_norms(v, w);
    // oracle: independent trapezoid quadrature of ||(theta_i zeta_A v)'||
    // + ||theta_i zeta_A v|| with a 2nd-order centered derivative
    auto oracle = [&](int i) {
        RealField w1 = grid;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double x = grid.x(k);
            double th = (i == 1) ? diagnostics::theta1(x / w.A1)
                                 : 1.0 - diagnostics::theta1(x / w.A1);
            w1.values[k] = th * diagnostics::zeta(x, w.A) * v.values[k];
        }
        RealField d = w1;
        const double h = grid.x(1) - grid.x(0);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            std::size_t a = (k + grid.size() - 1) % grid.size();
            std::size_t b = (k + 1) % grid.size();
            d.values[k] = (w1.values[b] - w1.values[a]) / (2.0 * h);
        }
        return norm_l2(d) + norm_l2(w1);
    };
    CHECK(s1 == doctest::Approx(oracle(1)).epsilon(1e-4));
    CHECK(s2 == doctest::Approx(oracle(2)).epsilon(1e-4));
}

TEST_CASE("virial functionals are positive quadratic forms") {
    diagnostics::WeightConfig w;
    RealField grid = periodic_grid(40.0, 4096);
    RealField v = sampled_like(grid, [](double x) {
        return std::exp(-0.5 * x * x) * std::cos(2.0 * x);
    });
    diagnostics::VirialValues vv = diagnostics::virial_functionals(v, w);
    // oracle: the same quadratic forms by direct quadrature against the
    // primitive weights (the weights are odd, so the forms are indefinite
    // in general; the content of the check is agreement, not sign)
    auto quad = [&](const RealField& weight) {
        RealField dens = v;
        for (std::size_t i = 0; i < v.size(); ++i)
            dens.values[i] = v.values[i] * weight.values[i] * v.values[i];
        return 0.5 * integrate(dens);
    };
    CHECK(vv.I1 == doctest::Approx(quad(diagnostics::phi_iAA1(grid, 1, w)))
                       .epsilon(1e-10));
    CHECK(vv.I2 == doctest::Approx(quad(diagnostics::phi_iAA1(grid, 2, w)))
                       .epsilon(1e-10));
    REQUIRE(vv.tildeI.size() == 19);
    CHECK(vv.tildeI[0] ==
          doctest::Approx(quad(diagnostics::phi_tilde_n(grid, 1, w.A1)))
              .epsilon(1e-10));
    // bold I20 is the stated geometric combination of the tilde values
    double acc = 0, fac = 1.0;
    for (std::size_t l = 0; l < vv.tildeI.size(); ++l) {
        fac /= w.A1 * w.A1;
        acc += fac * vv.tildeI[l];
    }
    CHECK(vv.boldI20 == doctest::Approx(acc).epsilon(1e-12));
    // quadratic scaling in the argument
    RealField v2 = v;
    for (auto& val : v2.values) val *= 3.0;
    diagnostics::VirialValues vv2 = diagnostics::virial_functionals(v2, w);
    CHECK(vv2.I1 == doctest::Approx(9.0 * vv.I1).epsilon(1e-12));
}

TEST_CASE("smoothing integral: trapezoid in time of the weighted norm") {
    diagnostics::WeightConfig w;
    RealField grid = periodic_grid(40.0, 1024);
    std::vector<double> times;
    std::vector<RealField> vs;
    for (int k = 0; k <= 10; ++k) {
        double t = 0.1 * k;
        times.push_back(t);
        vs.push_back(sampled_like(grid, [&](double x) {
            return std::exp(-t) * std::exp(-x * x);
        }));
    }
    diagnostics::SmoothingResult sr = diagnostics::smoothing_integral(times, vs, w.a);
    CHECK(sr.integral > 0.0);
    REQUIRE(sr.pointwise.size() == times.size());
    // pointwise curve decays like e^{-2t} in the squared norm's sqrt
    double ratio = sr.pointwise.back().second / sr.pointwise.front().second;
    CHECK(ratio == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}
