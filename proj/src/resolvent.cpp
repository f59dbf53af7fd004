#include "gkdv/resolvent.hpp"

#include <cmath>
#include <future>
#include <thread>

namespace gkdv {
namespace resolvent {

namespace {

// reverse cumulative trapezoid: out[i] = int_{x_i}^{x_max} q dy
ComplexField upper_cumulative(const ComplexField& q) {
    ComplexField out = q;
    const std::size_t n = q.size();
    out.values[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 0;)
        out.values[i] = out.values[i + 1] +
                        (q.values[i] + q.values[i + 1]) * (0.5 * q.h);
    return out;
}

ComplexField lower_cumulative(const ComplexField& q) {
    return cumulative_integral(q);
}

} // namespace

ComplexField ProjectionPair::P(const ComplexField& g) const {
    cplx a1 = inner(to_complex(k.eta1), g);
    cplx a2 = inner(to_complex(k.eta2), g);
    ComplexField out = g;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values[i] = a1 * k.xi1.values[i] + a2 * k.xi2.values[i];
    return out;
}

ComplexField ProjectionPair::Q(const ComplexField& g) const {
    ComplexField pg = P(g);
    ComplexField out = g;
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] -= pg.values[i];
    return out;
}

ProjectionPair make_projections(double p, const jost::Config& cfg) {
    ProjectionPair pp;
    pp.k = profiles::kernel_functions(SolitonParams{p, 1.0}, jost::jost_grid(cfg));
    return pp;
}

ResolventResult apply_resolvent(const ComplexField& g, const jost::Bundle& b) {
    if (std::abs(b.W) < 1e-10)
        throw NearSingular("resolvent: |W| = " + std::to_string(std::abs(b.W)));
    const std::size_t n = g.size();
    ComplexField q13 = g, q23 = g, q12 = g;
    for (std::size_t i = 0; i < n; ++i) {
        q13.values[i] = g.values[i] * b.b13.values[i] / b.W;
        q23.values[i] = g.values[i] * b.b23.values[i] / b.W;
        q12.values[i] = g.values[i] * b.b12.values[i] / b.W;
    }
    ComplexField I1 = upper_cumulative(q13);
    ComplexField I23 = lower_cumulative(q23);
    ComplexField I21 = upper_cumulative(q12);

    ResolventResult r{g, g, g};
    for (std::size_t i = 0; i < n; ++i) {
        r.u.values[i] = -b.f2.values[i] * I1.values[i] -
                        b.m1.f(i) * I23.values[i] + b.m3.f(i) * I21.values[i];
        r.up.values[i] = -b.f2p.values[i] * I1.values[i] -
                         b.m1.fp(i) * I23.values[i] + b.m3.fp(i) * I21.values[i];
        r.upp.values[i] = -b.f2pp.values[i] * I1.values[i] -
                          b.m1.fpp(i) * I23.values[i] + b.m3.fpp(i) * I21.values[i];
    }
    return r;
}

ZeroEnergyData make_zero_energy_data(double p, const jost::Config& cfg) {
    ZeroEnergyData z;
    z.p = p;
    z.cfg = cfg;
    RealField grid = jost::jost_grid(cfg);
    const double beta = profiles::beta(p);
    const double qp = profiles::mass_q_prime(1.0, p, grid);

    RealField phi = sampled_like(grid, [&](double x) { return profiles::phi(x, p); });
    RealField phix = sampled_like(grid, [&](double x) { return profiles::phi_x(x, p); });
    RealField lam_phi = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        lam_phi.values[i] = 0.5 * grid.x(i) * phix.values[i] +
                            phi.values[i] / (p - 1.0);
    const double G = inner(lam_phi, phi); // <Lambda_p phi, phi>

    auto mk = [&](auto f) {
        ComplexField out = to_complex(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(i);
        return out;
    };
    z.f1_0 = mk([&](std::size_t i) { return -phix.values[i] / beta; });
    z.f3_0 = mk([&](std::size_t i) { return phix.values[i] / beta; });
    z.df1_0 = mk([&](std::size_t i) {
        return (phix.values[i] / (p - 1.0) + lam_phi.values[i]) / beta;
    });
    z.df3_0 = mk([&](std::size_t i) {
        return (phix.values[i] / (p - 1.0) - lam_phi.values[i]) / beta;
    });
    // eta2 = phi / q'(1); b-tilde_{12}(.,0) = +G/beta eta2, _{32} = -G/beta eta2
    z.bt12_0 = mk([&](std::size_t i) { return G / (beta * qp) * phi.values[i]; });
    z.bt32_0 = mk([&](std::size_t i) { return -G / (beta * qp) * phi.values[i]; });

    // bundles for the Richardson difference of the numerator operator
    z.delta = 0.01;
    jost::C0Fit fit = jost::make_c0fit(p, cfg);
    z.bdl1 = jost::build_bundle(cplx(0.0, z.delta), p, &fit, cfg);
    z.bdl2 = jost::build_bundle(cplx(0.0, 2.0 * z.delta), p, &fit, cfg);
    return z;
}

namespace {

ComplexField full_numerator(const ComplexField& g, const jost::Bundle& b) {
    ComplexField q13 = g, q32 = g, q12 = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        q13.values[i] = g.values[i] * b.b13.values[i];
        q32.values[i] = g.values[i] * b.bt32.values[i];
        q12.values[i] = g.values[i] * b.bt12.values[i];
    }
    ComplexField A = upper_cumulative(q13);
    ComplexField B = cumulative_integral(q32);
    ComplexField C = upper_cumulative(q12);
    ComplexField out = g;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values[i] = -b.m2t.f(i) * A.values[i] + b.m1.f(i) * B.values[i] +
                        b.m3.f(i) * C.values[i];
    return out;
}

// d/dlambda at 0 of the numerator applied to a real-valued field, by a
// one-sided Richardson difference along the imaginary axis (the numerator
// of a real field satisfies N(conj lambda) g = conj(N(lambda) g), so the
// imaginary parts at i*delta and 2i*delta determine the odd Taylor part
// with O(delta^4) error).
ComplexField numerator_dlambda_real(const ComplexField& g,
                                    const ZeroEnergyData& z) {
    ComplexField n1 = full_numerator(g, z.bdl1);
    ComplexField n2 = full_numerator(g, z.bdl2);
    ComplexField out = g;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values[i] = (16.0 * n1.values[i].imag() -
                         2.0 * n2.values[i].imag()) /
                        (12.0 * z.delta);
    return out;
}

// The two numerator Taylor terms of the f2-tilde resolvent form: the
// lambda = 0 term from the closed zero-energy expressions, the linear
// term from the Richardson difference above (split over real and
// imaginary parts of g by linearity).
ComplexField taylor_numerator(const ComplexField& g, cplx lambda,
                              const ZeroEnergyData& z) {
    ComplexField q32 = g, q12 = g;
    ComplexField gr = g, gi = g;
    double inorm = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        q32.values[i] = g.values[i] * z.bt32_0.values[i];
        q12.values[i] = g.values[i] * z.bt12_0.values[i];
        gr.values[i] = g.values[i].real();
        gi.values[i] = g.values[i].imag();
        inorm = std::max(inorm, std::abs(g.values[i].imag()));
    }
    ComplexField B0 = cumulative_integral(q32);
    ComplexField C0 = upper_cumulative(q12);
    ComplexField d_re = numerator_dlambda_real(gr, z);
    ComplexField out = g;
    if (inorm > 0.0) {
        ComplexField d_im = numerator_dlambda_real(gi, z);
        for (std::size_t i = 0; i < g.size(); ++i)
            d_re.values[i] += cplx(0.0, 1.0) * d_im.values[i];
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx n0 = z.f1_0.values[i] * B0.values[i] +
                  z.f3_0.values[i] * C0.values[i];
        out.values[i] = n0 + lambda * d_re.values[i];
    }
    return out;
}

} // namespace

ComplexField apply_r0(const ComplexField& g, const jost::Bundle& b,
                      const ZeroEnergyData& z) {
    ComplexField num = taylor_numerator(g, b.lambda, z);
    const cplx den = b.D * b.W0;
    for (auto& v : num.values) v /= den;
    return num;
}

ComplexField apply_resolvent_regularized(const ComplexField& g,
                                         const jost::Bundle& b,
                                         const ZeroEnergyData& z,
                                         const ProjectionPair& proj) {
    ComplexField pg = proj.P(g);
    if (norm_l2(pg) > 1e-8 * norm_l2(g))
        throw NotProjected("resolvent: g not in ker P");
    ComplexField num = full_numerator(g, b);
    ComplexField sub = taylor_numerator(g, b.lambda, z);
    const cplx den = b.D * b.W0;
    ComplexField out = g;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values[i] = (num.values[i] - sub.values[i]) / den;
    return out;
}

double sech_weighted_norm(const ComplexField& v, double kappa) {
    RealField w = real_part(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        w.values[i] = std::norm(v.values[i]) /
                      std::pow(std::cosh(kappa * v.x(i)), 2);
    return std::sqrt(integrate(w));
}

std::vector<SmoothingRow> smoothing_norm_scan(const std::vector<double>& taus,
                                              const std::vector<ComplexField>& probes,
                                              double p, double kappa,
                                              const jost::Config& cfg,
                                              int workers) {
    ProjectionPair proj = make_projections(p, cfg);
    bool need_small = false;
    bool need_fit = false;
    for (double t : taus) {
        if (std::abs(t) <= 0.02) need_small = true;
        if (std::abs(t) < 0.1) need_fit = true;
    }
    jost::C0Fit fit;
    if (need_fit) fit = jost::make_c0fit(p, cfg);
    ZeroEnergyData zed;
    if (need_small) zed = make_zero_energy_data(p, cfg);

    std::vector<SmoothingRow> rows(taus.size());
    auto work = [&](std::size_t i) {
        const double tau = taus[i];
        jost::Bundle b = jost::build_bundle(cplx(0.0, tau), p, &fit, cfg);
        double sup = 0.0, sup_dx = 0.0;
        for (const ComplexField& probe : probes) {
            ComplexField qg = proj.Q(probe);
            ComplexField u = (std::abs(tau) <= 0.02)
                                 ? apply_resolvent_regularized(qg, b, zed, proj)
                                 : apply_resolvent(qg, b).u;
            sup = std::max(sup, sech_weighted_norm(u, kappa));
            ComplexField dprobe = fd_derivative4(probe);
            ComplexField qdg = proj.Q(dprobe);
            ComplexField udx = (std::abs(tau) <= 0.02)
                                   ? apply_resolvent_regularized(qdg, b, zed, proj)
                                   : apply_resolvent(qdg, b).u;
            sup_dx = std::max(sup_dx, sech_weighted_norm(udx, kappa));
        }
        rows[i] = SmoothingRow{tau, sup, sup_dx};
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < taus.size(); ++i) work(i);
    } else {
        std::vector<std::future<void>> futs;
        std::size_t next = 0;
        while (next < taus.size()) {
            futs.clear();
            for (int w = 0; w < workers && next < taus.size(); ++w, ++next)
                futs.push_back(std::async(std::launch::async, work, next));
            for (auto& f : futs) f.get();
        }
    }
    return rows;
}

} // namespace resolvent
} // namespace gkdv
