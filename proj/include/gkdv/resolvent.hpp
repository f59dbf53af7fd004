#pragma once

#include "gkdv/jost.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {

// Resolvent of L = d/dx (-d^2/dx^2 + 1 - p phi^{p-1}) at c = 1, built from
// the Jost solutions by variation of parameters, plus the spectral
// projections onto / off the generalized kernel and the near-zero
// regularized form.
namespace resolvent {

struct ProjectionPair {
    profiles::KernelFunctions k; // xi1, xi2, eta1, eta2 on the jost grid

    ComplexField P(const ComplexField& g) const;
    ComplexField Q(const ComplexField& g) const;
};

ProjectionPair make_projections(double p, const jost::Config& cfg = {});

// u = R(lambda) g with analytically assembled first two derivatives (so
// residual checks need only one finite difference of u'').
struct ResolventResult {
    ComplexField u, up, upp;
};

ResolventResult apply_resolvent(const ComplexField& g, const jost::Bundle& bundle);

// lambda-independent data of the zero-energy expansion: the Taylor terms
// N(0)g and d/dlambda N(0)g of the numerator of the f2-tilde form of the
// resolvent, built from the closed lambda = 0 expressions plus one
// Richardson finite difference in lambda for the b-tilde fields.
struct ZeroEnergyData {
    double p;
    jost::Config cfg;
    ComplexField f1_0, f3_0;     // f1(.,0), f3(.,0) = -/+ beta^{-1} phi'
    ComplexField df1_0, df3_0;   // d_lambda f1/f3 at 0 (closed forms)
    ComplexField bt12_0, bt32_0; // b-tilde_{j2}(.,0)
    // The lambda-linear Taylor term of the numerator is obtained by a
    // Richardson difference of the full numerator operator along the
    // imaginary axis; the individual ingredient fields are not smooth
    // across lambda = 0 (the connection normalization is singular there),
    // but the assembled numerator is analytic.
    double delta = 0.0;          // finite-difference step
    jost::Bundle bdl1, bdl2;     // bundles at i*delta and 2i*delta
};

ZeroEnergyData make_zero_energy_data(double p, const jost::Config& cfg = {});

// Regularized resolvent for g in ker P: the f2-tilde form with the first
// two numerator Taylor terms subtracted; bounded as lambda -> 0.
ComplexField apply_resolvent_regularized(const ComplexField& g,
                                         const jost::Bundle& bundle,
                                         const ZeroEnergyData& zed,
                                         const ProjectionPair& proj);

// The subtracted expansion term R^(0)(lambda) g alone (vanishes on ker P).
ComplexField apply_r0(const ComplexField& g, const jost::Bundle& bundle,
                      const ZeroEnergyData& zed);

// ||sech(kappa x) v||_{L2}
double sech_weighted_norm(const ComplexField& v, double kappa);

struct SmoothingRow {
    double tau;
    double sup_norm;        // sup over probes of the weighted output norm
    double sup_norm_dx;     // same with d/dx-applied probes
};

// Scan of the Kato-smoothing surrogate sup_tau ||sech R(i tau) Q g||.
std::vector<SmoothingRow> smoothing_norm_scan(const std::vector<double>& taus,
                                              const std::vector<ComplexField>& probes,
                                              double p, double kappa,
                                              const jost::Config& cfg = {},
                                              int workers = 1);

} // namespace resolvent
} // namespace gkdv
