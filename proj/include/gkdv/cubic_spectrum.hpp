#pragma once

#include <array>

#include "gkdv/field.hpp"

namespace gkdv {

// Roots of the characteristic polynomial mu^3 - mu + lambda = 0 of the
// constant-coefficient part of (L - lambda) at c = 1, labelled so that
// Re mu1 <= Re mu2 <= Re mu3, with mu2 the branch through mu2(0) = 0
// (mu2 = lambda + O(lambda^3) near the origin).
namespace cubic_spectrum {

struct SpectralPoint {
    cplx lambda;
    std::array<cplx, 3> mu;  // mu1, mu2, mu3
    std::array<cplx, 3> a;   // partial-fraction weights a1, a2, a3
    cplx w0;                 // Wronskian of {e^{mu_j x}} at x = 0
};

// Branch-consistent root set obtained by continuation from lambda = 0
// along the straight segment, Newton-polished at every step.
SpectralPoint solve(cplx lambda);

// Wronskian of the free exponentials: the Vandermonde determinant
// prod_{i<j} (mu_j - mu_i); equals 2 at lambda = 0.
cplx w0(const std::array<cplx, 3>& mu);

// a1 = 1/((mu1-mu2)(mu1-mu3)) etc.; sum a_j = 0, sum a_j mu_j = 0,
// sum a_j mu_j^2 = 1.
std::array<cplx, 3> weights(const std::array<cplx, 3>& mu);

} // namespace cubic_spectrum
} // namespace gkdv
