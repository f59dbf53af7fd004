#pragma once

#include <vector>

#include "gkdv/diagnostics.hpp"
#include "gkdv/evolver.hpp"
#include "gkdv/field.hpp"

namespace gkdv {

// Decomposition u = phi_c(. - D) + v(. - D) with v orthogonal to the
// weighted dual pair (zeta_B eta1[c], eta2[c]), and tracking of
// (c(t), D(t), v(t)) along a trajectory.
namespace modulation {

struct Config {
    double p = 2.0;
    double B = 20.0;
    double newton_tol = 1e-10; // on the pairings, relative to ||u||
    int max_iter = 50;
    double fd_step = 1e-6;     // Jacobian finite-difference step
    double tube_limit = 0.2;   // H1 distance triggering TubeExit
};

struct State {
    double t = 0;
    double c = 1;
    double D = 0;
    RealField v;               // in the soliton frame: e^{D dx} u - phi_c
    double ortho1 = 0, ortho2 = 0; // residual pairings at the solution
    double vnorm_h1 = 0;
    double cdot = 0, Ddot_minus_c = 0; // centered differences (track only)
    double discrete_ratio = 0; // (|cdot|+|Ddot-c|) / (B^{-1}(Sigma1+Sigma2))
};

// The two pairings G(c, D) whose joint zero defines the decomposition.
std::pair<double, double> pairings(const RealField& u, double c, double D,
                                   const Config& cfg);

State decompose(const RealField& u, const Config& cfg, double c_guess = 1.0,
                double D_guess = 0.0);

// d(B^{-1/2} G1, G2) / d(D-tilde, c) at (c, D), D-tilde = B^{-1/2} D;
// expected close to diag(+1, -1) for B large.
struct JacobianStructure {
    double dd = 0, dc = 0; // row G1
    double cd = 0, cc = 0; // row G2
};
JacobianStructure jacobian_structure(const RealField& u, double c, double D,
                                     const Config& cfg);

// Per-frame decomposition with warm starts, derivative estimates by
// centered differences, and the discrete-mode bound ratio (needs the
// weight tuple for the Sigma norms).
std::vector<State> track(const evolver::Trajectory& traj, const Config& cfg,
                         const diagnostics::WeightConfig& wcfg);

} // namespace modulation
} // namespace gkdv
