#include "gkdv/modulation.hpp"

#include <cmath>

#include "gkdv/fourier.hpp"
#include "gkdv/profiles.hpp"

namespace gkdv {
namespace modulation {

namespace {

struct Pairing {
    RealField v;
    double g1, g2;
};

// v = e^{D dx} u - phi_c and the two orthogonality pairings
Pairing eval(const RealField& u, double c, double D, const Config& cfg) {
    Pairing out;
    out.v = fourier::translate(u, -D);
    profiles::KernelFunctions k =
        profiles::kernel_functions(SolitonParams{cfg.p, c}, out.v);
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v.values[i] -= profiles::phi_c(out.v.x(i), SolitonParams{cfg.p, c});
    RealField w1 = out.v;
    for (std::size_t i = 0; i < w1.size(); ++i)
        w1.values[i] = diagnostics::zeta(w1.x(i), cfg.B) * k.eta1.values[i];
    out.g1 = inner(out.v, w1);
    out.g2 = inner(out.v, k.eta2);
    return out;
}

double h1_norm(const RealField& v) {
    const double a = norm_l2(v);
    const double b = norm_l2(v.periodic ? fourier::derivative(v, 1)
                                        : fd_derivative4(v));
    return std::sqrt(a * a + b * b);
}

} // namespace

std::pair<double, double> pairings(const RealField& u, double c, double D,
                                   const Config& cfg) {
    Pairing pr = eval(u, c, D, cfg);
    return {pr.g1, pr.g2};
}

State decompose(const RealField& u, const Config& cfg, double c_guess,
                double D_guess) {
    if (!u.periodic) throw GridTooSmall("decompose: periodic grid required");
    const double scale = norm_l2(u);
    double c = c_guess, D = D_guess;
    const double d = cfg.fd_step;
    for (int it = 0; it < cfg.max_iter; ++it) {
        Pairing pr = eval(u, c, D, cfg);
        if (std::abs(pr.g1) <= cfg.newton_tol * scale &&
            std::abs(pr.g2) <= cfg.newton_tol * scale) {
            State st;
            st.c = c;
            st.D = D;
            st.v = std::move(pr.v);
            st.ortho1 = pr.g1;
            st.ortho2 = pr.g2;
            st.vnorm_h1 = h1_norm(st.v);
            if (st.vnorm_h1 > cfg.tube_limit)
                throw TubeExit("decompose: H1 distance " +
                               std::to_string(st.vnorm_h1));
            return st;
        }
        Pairing pc = eval(u, c + d, D, cfg);
        Pairing pd = eval(u, c, D + d, cfg);
        const double j11 = (pd.g1 - pr.g1) / d, j12 = (pc.g1 - pr.g1) / d;
        const double j21 = (pd.g2 - pr.g2) / d, j22 = (pc.g2 - pr.g2) / d;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14)
            throw NewtonDivergence("decompose: singular Jacobian");
        D -= (j22 * pr.g1 - j12 * pr.g2) / det;
        c -= (-j21 * pr.g1 + j11 * pr.g2) / det;
        if (!(c > 0.05 && std::isfinite(c) && std::isfinite(D)))
            throw NewtonDivergence("decompose: iterate left valid region");
    }
    throw NewtonDivergence("decompose: no convergence in " +
                           std::to_string(cfg.max_iter) + " iterations");
}

JacobianStructure jacobian_structure(const RealField& u, double c, double D,
                                     const Config& cfg) {
    const double d = cfg.fd_step;
    const double rB = std::sqrt(cfg.B);
    Pairing pr = eval(u, c, D, cfg);
    Pairing pc = eval(u, c + d, D, cfg);
    Pairing pd = eval(u, c, D + d, cfg);
    JacobianStructure j;
    // rows (B^{-1/2} G1, G2), columns (D-tilde = B^{-1/2} D, c)
    j.dd = (pd.g1 - pr.g1) / d;               // B^{-1/2} * B^{1/2} cancels
    j.dc = (pc.g1 - pr.g1) / d / rB;
    j.cd = (pd.g2 - pr.g2) / d * rB;
    j.cc = (pc.g2 - pr.g2) / d;
    return j;
}

std::vector<State> track(const evolver::Trajectory& traj, const Config& cfg,
                         const diagnostics::WeightConfig& wcfg) {
    std::vector<State> out;
    out.reserve(traj.frames.size());
    double c = 1.0, D = 0.0;
    const double twoL =
        traj.frames.empty() ? 0.0 : traj.frames.front().u.length();
    if (!traj.frames.empty()) {
        // seed the first Newton solve from the peak of the field: its
        // location approximates D and its height fixes c through the
        // soliton amplitude c^{1/(p-1)} ((p+1)/2)^{1/(p-1)}
        const RealField& u0 = traj.frames.front().u;
        std::size_t imax = 0;
        for (std::size_t i = 1; i < u0.size(); ++i)
            if (u0.values[i] > u0.values[imax]) imax = i;
        D = u0.x(imax);
        const double amp0 = std::pow(0.5 * (cfg.p + 1.0), 1.0 / (cfg.p - 1.0));
        if (u0.values[imax] > 0)
            c = std::pow(u0.values[imax] / amp0, cfg.p - 1.0);
    }
    for (std::size_t k = 0; k < traj.frames.size(); ++k) {
        const auto& fr = traj.frames[k];
        double D_pred = D;
        if (k > 0) D_pred = D + c * (fr.t - traj.frames[k - 1].t);
        State st = decompose(fr.u, cfg, c, D_pred);
        // unwrap the periodic translation to the branch nearest the
        // prediction
        st.D += twoL * std::round((D_pred - st.D) / twoL);
        st.t = fr.t;
        c = st.c;
        D = st.D;
        out.push_back(std::move(st));
    }
    // centered differences in t (one-sided at the ends)
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t a = k > 0 ? k - 1 : k;
        const std::size_t b = k + 1 < out.size() ? k + 1 : k;
        if (a == b) continue;
        const double dt = out[b].t - out[a].t;
        out[k].cdot = (out[b].c - out[a].c) / dt;
        out[k].Ddot_minus_c = (out[b].D - out[a].D) / dt - out[k].c;
        auto [s1, s2] = diagnostics::sigma_norms(out[k].v, wcfg);
        const double rhs = (s1 + s2) / cfg.B;
        out[k].discrete_ratio =
            (std::abs(out[k].cdot) + std::abs(out[k].Ddot_minus_c)) /
            (rhs + 1e-300);
    }
    return out;
}

} // namespace modulation
} // namespace gkdv
