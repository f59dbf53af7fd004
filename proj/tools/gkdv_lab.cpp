// Batch front-end for the soliton-stability laboratory: closed-form
// identity checks, Evans-function and resolvent scans, time evolution,
// and full perturbed-soliton stability runs with modulation tracking.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkdv/cubic_spectrum.hpp"
#include "gkdv/diagnostics.hpp"
#include "gkdv/evolver.hpp"
#include "gkdv/field.hpp"
#include "gkdv/fourier.hpp"
#include "gkdv/jost.hpp"
#include "gkdv/linop.hpp"
#include "gkdv/modulation.hpp"
#include "gkdv/profiles.hpp"
#include "gkdv/resolvent.hpp"

using namespace gkdv;

namespace {

struct KeyValues {
    std::vector<std::pair<std::string, std::string>> items;

    template <class T>
    void add(const std::string& k, const T& v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        items.emplace_back(k, ss.str());
    }
    void header(std::ostream& os) const {
        for (const auto& [k, v] : items) os << "# " << k << " = " << v << "\n";
    }
};

std::ofstream open_output(const std::string& path, const KeyValues& cfg) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file " + path);
    cfg.header(os);
    os.precision(15);
    return os;
}

int g_workers = 1;

template <class F>
void parallel_for(std::size_t n, F&& f) {
    if (g_workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t next = 0;
    while (next < n) {
        std::vector<std::future<void>> futs;
        for (int w = 0; w < g_workers && next < n; ++w, ++next)
            futs.push_back(std::async(std::launch::async, f, next));
        for (auto& fu : futs) fu.get();
    }
}

// ---------------------------------------------------------------- identities

int run_identities(double p, const std::string& out_path) {
    KeyValues cfg;
    cfg.add("command", "identities");
    cfg.add("p", p);

    RealField grid = periodic_grid(40.0, 8192);
    struct Row {
        std::string name;
        double value, expected, tol;
    };
    std::vector<Row> rows;

    RealField phi = sampled_like(grid, [&](double x) { return profiles::phi(x, p); });
    RealField phix = sampled_like(grid, [&](double x) { return profiles::phi_x(x, p); });
    RealField resid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = phi.values[i];
        resid.values[i] = profiles::phi_xx(grid.x(i), p) - (f - std::pow(f, p));
    }
    rows.push_back({"profile_ode_residual", norm_sup(resid), 0.0, 1e-12});

    const double n2 = norm_l2(phi);
    RealField lphi = profiles::lambda_p(phi, p);
    const double lpp = inner(lphi, phi);
    rows.push_back({"scaling_pairing_vs_closed_form",
                    lpp - (5.0 - p) / (4.0 * (p - 1.0)) * n2 * n2, 0.0, 1e-7});

    profiles::KernelFunctions k = profiles::kernel_functions(SolitonParams{p, 1.0}, grid);
    rows.push_back({"dual_basis_gram_residual", k.gram_residual, 0.0, 1e-7});

    // generalized-kernel chain: L xi1 = 0, L xi2 = -xi1, L* eta2 = 0,
    // L* eta1 = -eta2 (spectral derivatives; eta1' sampled in closed form)
    const SolitonParams sp{p, 1.0};
    RealField lxi1 = linop::apply_L(k.xi1, sp);
    RealField lxi2 = linop::apply_L(k.xi2, sp);
    RealField leta2 = linop::apply_L_adjoint(k.eta2, sp);
    RealField eta1p = grid;
    for (std::size_t i = 0; i < grid.size(); ++i)
        eta1p.values[i] = k.theta1 * k.xi2.values[i] + k.theta2 * k.xi1.values[i];
    RealField leta1 = linop::apply_Lplus(eta1p, sp);
    for (auto& v : leta1.values) v = -v;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        s1 = std::max(s1, std::abs(lxi1.values[i]));
        s2 = std::max(s2, std::abs(lxi2.values[i] + k.xi1.values[i]));
        s3 = std::max(s3, std::abs(leta2.values[i]));
        s4 = std::max(s4, std::abs(leta1.values[i] + k.eta2.values[i]));
    }
    rows.push_back({"kernel_chain_Lxi1", s1, 0.0, 1e-7});
    rows.push_back({"kernel_chain_Lxi2_plus_xi1", s2, 0.0, 1e-7});
    rows.push_back({"kernel_chain_Lstar_eta2", s3, 0.0, 1e-7});
    rows.push_back({"kernel_chain_Lstar_eta1_plus_eta2", s4, 0.0, 1e-7});

    const double vir = linop::virial_mm08_functional(to_complex(phix), p);
    rows.push_back({"virial_nonnegative_on_phi_prime", std::min(vir, 0.0), 0.0, 1e-12});

    bool pass = true;
    std::ostringstream rep;
    for (const auto& r : rows) {
        const bool ok = std::abs(r.value - r.expected) <= r.tol;
        pass = pass && ok;
        rep << r.name << "\t" << r.value << "\t" << r.tol << "\t"
            << (ok ? "pass" : "FAIL") << "\n";
    }
    rep << "pairing_Lambda_phi_phi\t" << lpp << "\n";
    if (!out_path.empty()) {
        auto os = open_output(out_path, cfg);
        os << rep.str();
    }
    std::cout << rep.str();
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------- evans scan

int run_evans_scan(double p, double tau_min, double tau_max, int npts,
                   double L, double h, const std::string& out_path) {
    KeyValues cfg;
    cfg.add("command", "evans-scan");
    cfg.add("p", p);
    cfg.add("tau_min", tau_min);
    cfg.add("tau_max", tau_max);
    cfg.add("points", npts);
    cfg.add("L", L);
    cfg.add("h", h);
    cfg.add("workers", g_workers);

    jost::Config jc;
    jc.L = L;
    jc.h = h;

    struct Row {
        double tau = 0;
        cplx D{};
        bool ok = false;
        std::string flag;
    };
    std::vector<Row> rows(static_cast<std::size_t>(npts));
    parallel_for(rows.size(), [&](std::size_t i) {
        const double tau =
            tau_min + (tau_max - tau_min) * static_cast<double>(i) /
                          static_cast<double>(npts - 1);
        rows[i].tau = tau;
        try {
            rows[i].D = jost::evans(cplx(0.0, tau), p, jc).D;
            rows[i].ok = true;
        } catch (const Error& e) {
            rows[i].flag = e.what();
        }
    });

    double min_abs = 1e300, argmin = 0;
    for (const auto& r : rows)
        if (r.ok && std::abs(r.D) < min_abs) {
            min_abs = std::abs(r.D);
            argmin = r.tau;
        }
    // curvature at 0 from small-tau samples: Re D(i tau) ~ -D''(0) tau^2/2
    double fit = 0;
    {
        double sxx = 0, sxy = 0;
        for (double tau : {0.02, 0.04, 0.06, 0.08}) {
            const cplx Dv = jost::evans(cplx(0.0, tau), p, jc).D;
            const double x = tau * tau;
            sxx += x * x;
            sxy += x * Dv.real();
        }
        fit = -2.0 * sxy / sxx;
    }
    cfg.add("min_abs_D", min_abs);
    cfg.add("argmin_tau", argmin);
    cfg.add("second_derivative_at_zero", fit);

    auto os = open_output(out_path, cfg);
    os << "tau\tre_D\tim_D\tabs_D\tflag\n";
    for (const auto& r : rows)
        os << r.tau << "\t" << r.D.real() << "\t" << r.D.imag() << "\t"
           << std::abs(r.D) << "\t" << (r.ok ? "ok" : r.flag) << "\n";
    std::cout << "min |D| = " << min_abs << " at tau = " << argmin
              << ", D''(0) fit = " << fit << "\n";
    return min_abs > 0 ? 0 : 1;
}

// ---------------------------------------------------------------- jost

int run_jost(double p, double lam_re, double lam_im, double L, double h,
             const std::string& out_path) {
    KeyValues cfg;
    cfg.add("command", "jost");
    cfg.add("p", p);
    cfg.add("lambda_re", lam_re);
    cfg.add("lambda_im", lam_im);
    cfg.add("L", L);
    cfg.add("h", h);

    jost::Config jc;
    jc.L = L;
    jc.h = h;
    const cplx lambda(lam_re, lam_im);
    jost::C0Fit fit;
    const bool small = std::abs(lambda) < 0.1;
    if (small) fit = jost::make_c0fit(p, jc);
    jost::Bundle b = jost::build_bundle(lambda, p, small ? &fit : nullptr, jc);
    jost::WronskianCheck wc = jost::wronskian_identity_check(b);

    std::ostringstream rep;
    rep.precision(15);
    rep << "D = " << b.D << "\nD(-lambda) = " << b.Dminus << "\nW0 = " << b.W0
        << "\nc0 = " << b.c0 << "\nW = " << b.W
        << "\nwronskian_identity_residual = " << wc.residual
        << "\nwronskian_constancy = " << wc.constancy << "\ncaps = ["
        << b.m2t.xcap << ", " << b.F2.xcap << ", " << b.F3.xcap << "]\n";
    if (!out_path.empty()) {
        auto os = open_output(out_path, cfg);
        os << rep.str();
    }
    std::cout << rep.str();
    return 0;
}

// ---------------------------------------------------------------- resolvent

int run_resolvent_scan(double p, double kappa, double tau_min, double tau_max,
                       int npts, unsigned seed, const std::string& out_path) {
    KeyValues cfg;
    cfg.add("command", "resolvent-scan");
    cfg.add("p", p);
    cfg.add("kappa", kappa);
    cfg.add("tau_min", tau_min);
    cfg.add("tau_max", tau_max);
    cfg.add("points", npts);
    cfg.add("seed", seed);
    cfg.add("workers", g_workers);

    jost::Config jc;
    RealField grid = jost::jost_grid(jc);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::vector<ComplexField> probes;
    for (int i = 0; i < 3; ++i) {
        const double x0 = center(rng), w = 1.0 + 0.5 * center(rng) / 3.0;
        probes.push_back(to_complex(sampled_like(grid, [&](double x) {
            return std::exp(-(x - x0) * (x - x0) / (w * w));
        })));
    }
    std::vector<double> taus(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i)
        taus[static_cast<std::size_t>(i)] =
            tau_min + (tau_max - tau_min) * i / double(npts - 1);

    auto rows = resolvent::smoothing_norm_scan(taus, probes, p, kappa, jc,
                                               g_workers);
    auto os = open_output(out_path, cfg);
    os << "tau\tsup_weighted_norm\tsup_weighted_norm_dx\n";
    for (const auto& r : rows)
        os << r.tau << "\t" << r.sup_norm << "\t" << r.sup_norm_dx << "\n";
    return 0;
}

// ---------------------------------------------------------------- evolve

RealField initial_state(double p, double c, double delta, double L,
                        std::size_t n, unsigned seed) {
    RealField u = periodic_grid(L, n);
    const SolitonParams sp{p, c};
    for (std::size_t i = 0; i < n; ++i)
        u.values[i] = profiles::phi_c(u.x(i), sp);
    if (delta != 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const double x0 = 2.0 * dist(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = u.x(i) - x0;
            u.values[i] += delta * std::exp(-x * x);
        }
    }
    return u;
}

int run_evolve(const evolver::Config& ec, double c, double delta, unsigned seed,
               const std::string& out_path, const std::string& snap_path) {
    KeyValues cfg;
    cfg.add("command", "evolve");
    cfg.add("p", ec.p);
    cfg.add("c", c);
    cfg.add("delta", delta);
    cfg.add("L", ec.L);
    cfg.add("n", ec.n);
    cfg.add("dt", ec.dt);
    cfg.add("t_end", ec.t_end);
    cfg.add("f_variant", ec.signed_power ? "signed" : "unsigned");
    cfg.add("seed", seed);

    RealField u0 = initial_state(ec.p, c, delta, ec.L, ec.n, seed);
    evolver::Trajectory traj = evolver::evolve(u0, ec);
    auto os = open_output(out_path, cfg);
    os << "t\tQ\tE\n";
    for (const auto& r : traj.conserved)
        os << r.t << "\t" << r.Q << "\t" << r.E << "\n";
    if (!snap_path.empty())
        evolver::write_snapshot(snap_path, traj.frames.back().u,
                                traj.frames.back().t);
    const double drift = std::abs(traj.conserved.back().Q - traj.conserved.front().Q) /
                         std::abs(traj.conserved.front().Q);
    std::cout << "relative Q drift = " << drift << "\n";
    return 0;
}

// ---------------------------------------------------------------- stability

int run_stability(const evolver::Config& ec, double c, double delta,
                  unsigned seed, double B, double A, double kappa, double a,
                  const std::string& prefix) {
    KeyValues cfg;
    cfg.add("command", "stability-run");
    cfg.add("p", ec.p);
    cfg.add("c", c);
    cfg.add("delta", delta);
    cfg.add("L", ec.L);
    cfg.add("n", ec.n);
    cfg.add("dt", ec.dt);
    cfg.add("t_end", ec.t_end);
    cfg.add("f_variant", ec.signed_power ? "signed" : "unsigned");
    cfg.add("seed", seed);
    cfg.add("B", B);
    cfg.add("A", A);
    cfg.add("kappa", kappa);
    cfg.add("a", a);

    RealField u0 = initial_state(ec.p, c, delta, ec.L, ec.n, seed);
    evolver::Trajectory traj = evolver::evolve(u0, ec);

    modulation::Config mc;
    mc.p = ec.p;
    mc.B = B;
    diagnostics::WeightConfig wc;
    wc.A = A;
    wc.B = B;
    wc.A1 = std::cbrt(B);
    wc.kappa = kappa;
    wc.a = a;
    wc.validate(ec.p);
    std::vector<modulation::State> states = modulation::track(traj, mc, wc);

    {
        auto os = open_output(prefix + "_conserved.tsv", cfg);
        os << "t\tQ\tE\n";
        for (const auto& r : traj.conserved)
            os << r.t << "\t" << r.Q << "\t" << r.E << "\n";
    }
    std::vector<double> times;
    std::vector<RealField> vs;
    {
        auto os = open_output(prefix + "_modulation.tsv", cfg);
        os << "t\tc\tD\tortho1\tortho2\tvnorm_h1\tcdot\tDdot_minus_c\tratio\n";
        for (const auto& s : states) {
            os << s.t << "\t" << s.c << "\t" << s.D << "\t" << s.ortho1 << "\t"
               << s.ortho2 << "\t" << s.vnorm_h1 << "\t" << s.cdot << "\t"
               << s.Ddot_minus_c << "\t" << s.discrete_ratio << "\n";
            times.push_back(s.t);
            vs.push_back(s.v);
        }
    }
    diagnostics::SmoothingResult sm = diagnostics::smoothing_integral(times, vs, a);
    {
        auto os = open_output(prefix + "_diagnostics.tsv", cfg);
        os << "t\tsigma1\tsigma2\tsech\tI1\tI2\tboldI20\tweighted_l2\n";
        for (std::size_t i = 0; i < states.size(); ++i) {
            auto [g1, g2] = diagnostics::sigma_norms(states[i].v, wc);
            diagnostics::VirialValues vv =
                diagnostics::virial_functionals(states[i].v, wc);
            os << states[i].t << "\t" << g1 << "\t" << g2 << "\t"
               << diagnostics::sech_norm(states[i].v, kappa) << "\t" << vv.I1
               << "\t" << vv.I2 << "\t" << vv.boldI20 << "\t"
               << sm.pointwise[i].second << "\n";
        }
    }
    // summary: c+ estimate, smoothing integral, variation and decay ratios
    double tv_first = 0, tv_second = 0;
    for (std::size_t i = 1; i < states.size(); ++i) {
        const double d = std::abs(states[i].c - states[i - 1].c);
        (states[i].t <= 0.5 * ec.t_end ? tv_first : tv_second) += d;
    }
    double dec_first = 0, dec_last = 0;
    std::size_t nq = std::max<std::size_t>(1, states.size() / 4);
    for (std::size_t i = 0; i < nq; ++i) dec_first += sm.pointwise[i].second;
    for (std::size_t i = states.size() - nq; i < states.size(); ++i)
        dec_last += sm.pointwise[i].second;
    {
        auto os = open_output(prefix + "_summary.tsv", cfg);
        os << "c_plus_estimate\t" << states.back().c << "\n"
           << "smoothing_integral\t" << sm.integral << "\n"
           << "c_total_variation_first_half\t" << tv_first << "\n"
           << "c_total_variation_second_half\t" << tv_second << "\n"
           << "weighted_l2_first_quarter_mean\t" << dec_first / double(nq) << "\n"
           << "weighted_l2_last_quarter_mean\t" << dec_last / double(nq) << "\n";
    }
    std::cout << "c+ = " << states.back().c << ", smoothing integral = "
              << sm.integral << "\n";
    return 0;
}

// ---------------------------------------------------------------- defaults

int run_print_defaults() {
    evolver::Config ec;
    jost::Config jc;
    modulation::Config mc;
    diagnostics::WeightConfig wc;
    std::cout << "p = 2\nc = 1\ndelta = 0\nseed = 1\n"
              << "L = " << ec.L << "\nn = " << ec.n << "\ndt = " << ec.dt
              << "\nt_end = " << ec.t_end << "\nf_variant = signed\n"
              << "jost_L = " << jc.L << "\njost_h = " << jc.h << "\n"
              << "B = " << mc.B << "\nA = " << wc.A << "\nA1 = " << wc.A1
              << "\nkappa = " << wc.kappa << "\na = " << wc.a << "\n"
              << "workers = 1\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soliton stability laboratory for the generalized KdV equation"};
    app.set_config("--config", "", "key = value configuration file");
    app.add_option("--workers", g_workers, "worker thread count")
        ->envname("GKDV_WORKERS");
    app.require_subcommand(1);

    double p = 2.0, c = 1.0, delta = 0.0;
    unsigned seed = 1;
    double tau_min = 0.05, tau_max = 30.0;
    int npts = 200;
    double lam_re = 0.0, lam_im = 1.0;
    double kappa = 0.25, a = 0.125, B = 20.0, A = 800.0;
    std::string out = "out.tsv", snap, prefix = "run";
    bool unsigned_power = false;
    evolver::Config ec;
    jost::Config jc;

    auto add_common = [&](CLI::App* s) {
        s->add_option("--p", p, "nonlinearity exponent, 1 < p < 5");
    };

    auto* s_id = app.add_subcommand("identities", "closed-form identity battery");
    add_common(s_id);
    s_id->add_option("--output", out);

    auto* s_ev = app.add_subcommand("evans-scan", "Evans function on i[tau_min, tau_max]");
    add_common(s_ev);
    s_ev->add_option("--tau-min", tau_min);
    s_ev->add_option("--tau-max", tau_max);
    s_ev->add_option("--points", npts);
    s_ev->add_option("--scatter-L", jc.L);
    s_ev->add_option("--scatter-h", jc.h);
    s_ev->add_option("--output", out);

    auto* s_j = app.add_subcommand("jost", "scattering bundle at one lambda");
    add_common(s_j);
    s_j->add_option("--lambda-re", lam_re);
    s_j->add_option("--lambda-im", lam_im);
    s_j->add_option("--scatter-L", jc.L);
    s_j->add_option("--scatter-h", jc.h);
    s_j->add_option("--output", out);

    auto* s_r = app.add_subcommand("resolvent-scan", "weighted resolvent norms on i[tau_min, tau_max]");
    add_common(s_r);
    s_r->add_option("--kappa", kappa);
    s_r->add_option("--tau-min", tau_min);
    s_r->add_option("--tau-max", tau_max);
    s_r->add_option("--points", npts);
    s_r->add_option("--seed", seed);
    s_r->add_option("--output", out);

    auto add_evolve_opts = [&](CLI::App* s) {
        add_common(s);
        s->add_option("--c", c);
        s->add_option("--delta", delta);
        s->add_option("--seed", seed);
        s->add_option("--L", ec.L);
        s->add_option("--n", ec.n);
        s->add_option("--dt", ec.dt);
        s->add_option("--t-end", ec.t_end);
        s->add_option("--frame-interval", ec.frame_interval);
        s->add_flag("--unsigned-power", unsigned_power,
                    "use f(u) = |u|^p instead of |u|^{p-1} u");
    };
    auto* s_e = app.add_subcommand("evolve", "time integration of one initial state");
    add_evolve_opts(s_e);
    s_e->add_option("--output", out);
    s_e->add_option("--snapshot", snap, "binary field snapshot of the final frame");

    auto* s_s = app.add_subcommand("stability-run", "perturbed soliton run with tracking");
    add_evolve_opts(s_s);
    s_s->add_option("--B", B);
    s_s->add_option("--A", A);
    s_s->add_option("--kappa", kappa);
    s_s->add_option("--a", a);
    s_s->add_option("--prefix", prefix, "output file prefix");

    app.add_subcommand("print-defaults", "print every default as key = value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (s_id->parsed()) return run_identities(p, out);
        if (s_ev->parsed())
            return run_evans_scan(p, tau_min, tau_max, npts, jc.L, jc.h, out);
        if (s_j->parsed()) return run_jost(p, lam_re, lam_im, jc.L, jc.h, out);
        if (s_r->parsed())
            return run_resolvent_scan(p, kappa, tau_min, tau_max, npts, seed, out);
        if (s_e->parsed()) {
            ec.p = p;
            ec.signed_power = !unsigned_power;
            return run_evolve(ec, c, delta, seed, out, snap);
        }
        if (s_s->parsed()) {
            ec.p = p;
            ec.signed_power = !unsigned_power;
            return run_stability(ec, c, delta, seed, B, A, kappa, a, prefix);
        }
        return run_print_defaults();
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
