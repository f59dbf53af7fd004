#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "gkdv/evolver.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/profiles.hpp"

using namespace gkdv;

namespace {

evolver::Config base() {
    evolver::Config ec;
    ec.L = 40.0;
    ec.n = 1024;
    ec.dt = 1e-3;
    ec.p = 2.0;
    ec.t_end = 10.0;
    return ec;
}

RealField soliton(const evolver::Config& ec) {
    RealField u = periodic_grid(ec.L, ec.n);
    for (std::size_t i = 0; i < u.size(); ++i)
        u.values[i] = profiles::phi(u.x(i), ec.p);
    return u;
}

} // namespace

TEST_CASE("traveling soliton and conservation") {
    evolver::Config ec = base();
    RealField u0 = soliton(ec);
    evolver::Trajectory tr = evolver::evolve(u0, ec);
    const evolver::Frame& last = tr.frames.back();
    RealField ref = fourier::translate(u0, last.t);
    double err = 0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        err = std::max(err, std::abs(ref.values[i] - last.u.values[i]));
    CHECK(err < 1e-6);
    double q0 = tr.conserved.front().Q, qe = tr.conserved.back().Q;
    double e0 = tr.conserved.front().E, ee = tr.conserved.back().E;
    CHECK(std::abs(qe - q0) < 1e-10 * q0);
    CHECK(std::abs(ee - e0) < 1e-9 * std::abs(e0));
}

TEST_CASE("temporal convergence order under dt halving") {
    evolver::Config ec = base();
    ec.t_end = 1.0;
    RealField u0 = soliton(ec);
    double errs[2];
    int k = 0;
    for (double dt : {2e-3, 1e-3}) {
        evolver::Config e2 = ec;
        e2.dt = dt;
        evolver::Trajectory tr = evolver::evolve(u0, e2);
        RealField ref = fourier::translate(u0, tr.frames.back().t);
        double e = 0;
        for (std::size_t i = 0; i < ref.size(); ++i)
            e = std::max(e, std::abs(ref.values[i] -
                                     tr.frames.back().u.values[i]));
        errs[k++] = e;
    }
    double order = std::log2(errs[0] / errs[1]);
    CHECK(order > 3.5);
}

TEST_CASE("blowup and resolution guards") {
    // a 40x soliton steepens until the grid can no longer hold it
    evolver::Config ec = base();
    ec.t_end = 1.0;
    RealField big = soliton(ec);
    for (auto& v : big.values) v *= 40.0; // far above the soliton branch
    CHECK_THROWS_AS(evolver::evolve(big, ec), ResolutionLoss);

    // sup-norm guard, exercised via its threshold: focusing dynamics of
    // the same data grows the peak past a 1.5x allowance quickly
    evolver::Config tight = base();
    tight.t_end = 1.0;
    tight.blowup_factor = 1.5;
    CHECK_THROWS_AS(evolver::evolve(big, tight), BlowupDetected);

    evolver::Config coarse = base();
    coarse.n = 256;
    RealField rough = periodic_grid(coarse.L, coarse.n);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (std::size_t i = 0; i < rough.size(); ++i)
        rough.values[i] = profiles::phi(rough.x(i), 2.0) + noise(rng);
    CHECK_THROWS_AS(evolver::evolve(rough, coarse), ResolutionLoss);
}

TEST_CASE("absorbing layer damps remote content, leaves the soliton alone") {
    evolver::Config ec = base();
    ec.t_end = 5.0;
    ec.sponge_strength = 2.0;
    ec.sponge_width = 15.0;
    RealField u0 = soliton(ec);
    double bump0 = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        // smooth bump at the antipode of the soliton, inside the layer
        double d = std::abs(u0.x(i)) - ec.L; // distance from the seam
        double b = 0.05 * std::exp(-0.25 * d * d);
        u0.values[i] += b;
        bump0 = std::max(bump0, b);
    }
    evolver::Trajectory tr = evolver::evolve(u0, ec);
    const RealField& uT = tr.frames.back().u;
    double bumpT = 0.0, peakT = 0.0;
    for (std::size_t i = 0; i < uT.size(); ++i) {
        if (std::abs(std::abs(uT.x(i)) - ec.L) < 5.0)
            bumpT = std::max(bumpT, std::abs(uT.values[i]));
        peakT = std::max(peakT, uT.values[i]);
    }
    CHECK(bumpT < 0.05 * bump0);                       // layer absorbed it
    CHECK(std::abs(peakT - 1.5) < 1e-3);               // soliton untouched
}

TEST_CASE("snapshot roundtrip") {
    evolver::Config ec = base();
    RealField u0 = soliton(ec);
    const char* path = "snapshot_roundtrip.bin";
    evolver::write_snapshot(path, u0, 3.25);
    evolver::Frame fr = evolver::read_snapshot(path);
    std::remove(path);
    CHECK(fr.t == 3.25);
    REQUIRE(fr.u.size() == u0.size());
    double err = 0;
    for (std::size_t i = 0; i < u0.size(); ++i)
        err = std::max(err, std::abs(u0.values[i] - fr.u.values[i]));
    CHECK(err == 0.0);
}
