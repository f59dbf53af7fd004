#include "gkdv/cubic_spectrum.hpp"

#include <cmath>

namespace gkdv {
namespace cubic_spectrum {

namespace {

// Newton for mu^3 - mu + lambda = 0 from a seed on the tracked branch.
cplx polish(cplx mu, cplx lambda) {
    for (int it = 0; it < 60; ++it) {
        cplx f = mu * mu * mu - mu + lambda;
        cplx df = 3.0 * mu * mu - 1.0;
        if (std::abs(df) < 1e-14)
            throw DegenerateRoots("cubic: Newton derivative vanished");
        cplx step = f / df;
        mu -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(mu))) return mu;
    }
    throw NonConvergence("cubic: Newton did not converge");
}

std::array<cplx, 3> companions(cplx mu2) {
    // remaining roots of the monic cubic with root sum zero
    cplx s = std::sqrt(1.0 - 0.75 * mu2 * mu2);
    if (s.real() < 0.0) s = -s;
    return {-0.5 * mu2 - s, mu2, -0.5 * mu2 + s};
}

} // namespace

std::array<cplx, 3> weights(const std::array<cplx, 3>& mu) {
    const cplx d12 = mu[0] - mu[1], d13 = mu[0] - mu[2], d23 = mu[1] - mu[2];
    if (std::abs(d12) < 1e-12 || std::abs(d13) < 1e-12 || std::abs(d23) < 1e-12)
        throw DegenerateRoots("cubic: coincident roots");
    return {1.0 / (d12 * d13), -1.0 / (d12 * d23), 1.0 / (d13 * d23)};
}

cplx w0(const std::array<cplx, 3>& mu) {
    return (mu[1] - mu[0]) * (mu[2] - mu[0]) * (mu[2] - mu[1]);
}

SpectralPoint solve(cplx lambda) {
    const double lcrit = 2.0 / (3.0 * std::sqrt(3.0));
    if (std::abs(lambda - lcrit) < 1e-9 || std::abs(lambda + lcrit) < 1e-9)
        throw DegenerateRoots("cubic: lambda at branch collision");

    // continuation of the mu2 branch from 0 along the straight segment
    cplx mu2 = 0.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(lambda) / 0.05)));
    for (int s = 1; s <= steps; ++s) {
        cplx lam = lambda * (static_cast<double>(s) / steps);
        cplx seed = (s == 1 && std::abs(lam) < 0.2) ? lam : mu2;
        mu2 = polish(seed, lam);
    }

    SpectralPoint pt;
    pt.lambda = lambda;
    pt.mu = companions(mu2);
    for (auto& m : pt.mu) m = polish(m, lambda);
    if (pt.mu[0].real() > pt.mu[2].real())
        std::swap(pt.mu[0], pt.mu[2]);
    if (std::abs(lambda) > 1e-12 &&
        (std::abs(pt.mu[0].real() - pt.mu[1].real()) < 1e-12 ||
         std::abs(pt.mu[2].real() - pt.mu[1].real()) < 1e-12))
        throw BranchAmbiguity("cubic: equal real parts beyond the origin");
    pt.a = weights(pt.mu);
    pt.w0 = w0(pt.mu);
    return pt;
}

} // namespace cubic_spectrum
} // namespace gkdv
