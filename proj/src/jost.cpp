#include "gkdv/jost.hpp"

#include <algorithm>
#include <cmath>

namespace gkdv {
namespace jost {

namespace {

using cubic_spectrum::SpectralPoint;

struct Pot {
    double p;
    std::vector<double> V, Vp;

    explicit Pot(double p_, const RealField& grid) : p(p_) {
        V.resize(grid.size());
        Vp.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double x = grid.x(i);
            V[i] = eval(x);
            Vp[i] = eval_p(x);
        }
    }
    double eval(double x) const {
        return p * std::pow(profiles::phi(x, p), p - 1.0);
    }
    double eval_p(double x) const {
        return p * (p - 1.0) * std::pow(profiles::phi(x, p), p - 2.0) *
               profiles::phi_x(x, p);
    }
};

// Product-integration weights: cell integrals of e^{-kappa s} against the
// quadratic through the three downstream nodes (W*) or the linear pair (T*).
struct QuadWeights {
    cplx E;          // e^{-kappa h}
    cplx W0, W1, W2; // quadratic: nodes s = 0, h, 2h on cell [0, h]
    cplx T0, T1;     // linear fallback: nodes s = 0, h
};

QuadWeights make_weights(cplx kappa, double h) {
    QuadWeights w;
    const cplx z = kappa * h;
    w.E = std::exp(-z);
    cplx M0, M1, M2; // moments int_0^h e^{-kappa s} s^k ds
    if (std::abs(z) < 1e-3) {
        M0 = h * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 +
                  z * z * z * z / 120.0);
        M1 = h * h * (0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 +
                      z * z * z * z / 144.0);
        M2 = h * h * h * (1.0 / 3.0 - z / 4.0 + z * z / 10.0 -
                          z * z * z / 36.0 + z * z * z * z / 168.0);
    } else {
        M0 = (1.0 - w.E) / kappa;
        M1 = (M0 - h * w.E) / kappa;
        M2 = (2.0 * M1 - h * h * w.E) / kappa;
    }
    const double h2 = h * h;
    w.W0 = (M2 - 3.0 * h * M1 + 2.0 * h2 * M0) / (2.0 * h2);
    w.W1 = (2.0 * h * M1 - M2) / h2;
    w.W2 = (M2 - h * M1) / (2.0 * h2);
    w.T1 = M1 / h;
    w.T0 = M0 - w.T1;
    return w;
}

// T(x_i) = int_{x_i}^{x_hi} e^{kappa (x_i - y)} g(y) dy, marching right
// to left; stable for Re kappa >= 0.
void march_upper(const std::vector<cplx>& g, std::size_t lo, std::size_t hi,
                 cplx kappa, double h, std::vector<cplx>& T) {
    QuadWeights w = make_weights(kappa, h);
    T[hi] = 0.0;
    for (std::size_t i = hi; i-- > lo;) {
        if (i + 2 <= hi)
            T[i] = w.E * T[i + 1] + w.W0 * g[i] + w.W1 * g[i + 1] + w.W2 * g[i + 2];
        else
            T[i] = w.E * T[i + 1] + w.T0 * g[i] + w.T1 * g[i + 1];
    }
}

// T(x_i) = int_{x_lo}^{x_i} e^{kappa (x_i - y)} g(y) dy, marching left to
// right; stable for Re kappa <= 0.
void march_lower(const std::vector<cplx>& g, std::size_t lo, std::size_t hi,
                 cplx kappa, double h, std::vector<cplx>& T) {
    QuadWeights w = make_weights(-kappa, h); // w.E = e^{kappa h}
    T[lo] = 0.0;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (i >= lo + 2)
            T[i] = w.E * T[i - 1] + w.W0 * g[i] + w.W1 * g[i - 1] +
                   w.W2 * g[i - 2];
        else
            T[i] = w.E * T[i - 1] + w.T0 * g[i] + w.T1 * g[i - 1];
    }
}

struct TermSpec {
    cplx gamma; // coefficient; sign convention: -a_j mu_j for lower-limit
                // integrals, +a_j mu_j for upper-limit ones
    cplx kappa;
    int delta;  // +1: T' = g + kappa T (lower limit fixed); -1: T' = -g + kappa T
};

// One application of m -> 1 + sum_t gamma_t T_t[V m] on [lo, hi].
// Optionally keeps the per-term integrals for derivative assembly.
void apply_terms(const std::vector<TermSpec>& terms, const Pot& pot,
                 const std::vector<cplx>& m, std::size_t lo, std::size_t hi,
                 double h, std::vector<cplx>& out,
                 std::vector<std::vector<cplx>>* keep = nullptr) {
    const std::size_t n = m.size();
    std::vector<cplx> g(n, 0.0), T(n, 0.0);
    for (std::size_t i = lo; i <= hi; ++i) g[i] = pot.V[i] * m[i];
    std::fill(out.begin(), out.end(), cplx(0.0));
    if (keep) keep->assign(terms.size(), std::vector<cplx>(n, 0.0));
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const TermSpec& ts = terms[t];
        if (ts.delta > 0)
            march_lower(g, lo, hi, ts.kappa, h, T);
        else
            march_upper(g, lo, hi, ts.kappa, h, T);
        for (std::size_t i = lo; i <= hi; ++i) out[i] += ts.gamma * T[i];
        if (keep) (*keep)[t] = T;
    }
    for (std::size_t i = lo; i <= hi; ++i) out[i] += 1.0;
}

// Sup of the absolute-kernel operator applied to the constant 1: an upper
// proxy for the sup-norm contraction factor on [lo, hi].
double operator_norm_estimate(const std::vector<TermSpec>& terms, const Pot& pot,
                              std::size_t lo, std::size_t hi, double h) {
    const std::size_t n = pot.V.size();
    std::vector<cplx> g(n, 0.0), T(n, 0.0);
    std::vector<double> acc(n, 0.0);
    for (std::size_t i = lo; i <= hi; ++i) g[i] = pot.V[i];
    for (const TermSpec& ts : terms) {
        cplx kap(ts.kappa.real(), 0.0);
        if (ts.delta > 0)
            march_lower(g, lo, hi, kap, h, T);
        else
            march_upper(g, lo, hi, kap, h, T);
        for (std::size_t i = lo; i <= hi; ++i)
            acc[i] += std::abs(ts.gamma) * std::abs(T[i]);
    }
    double s = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) s = std::max(s, acc[i]);
    return s;
}

// Fill m', m'' on [lo, hi] from the per-term integrals:
//   m'  = sum_t gamma_t (delta_t g + kappa_t T_t)
//   m'' = sum_t gamma_t (delta_t (g' + kappa_t g) + kappa_t^2 T_t)
void assemble_derivatives(const std::vector<TermSpec>& terms, const Pot& pot,
                          const std::vector<std::vector<cplx>>& T,
                          const std::vector<cplx>& m, std::size_t lo,
                          std::size_t hi, std::vector<cplx>& mp,
                          std::vector<cplx>& mpp) {
    for (std::size_t i = lo; i <= hi; ++i) {
        const cplx g = pot.V[i] * m[i];
        cplx d1 = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t)
            d1 += terms[t].gamma *
                  (static_cast<double>(terms[t].delta) * g + terms[t].kappa * T[t][i]);
        mp[i] = d1;
    }
    for (std::size_t i = lo; i <= hi; ++i) {
        const cplx g = pot.V[i] * m[i];
        const cplx gp = pot.Vp[i] * m[i] + pot.V[i] * mp[i];
        cplx d2 = 0.0;
        for (std::size_t t = 0; t < terms.size(); ++t)
            d2 += terms[t].gamma *
                  (static_cast<double>(terms[t].delta) * (gp + terms[t].kappa * g) +
                   terms[t].kappa * terms[t].kappa * T[t][i]);
        mpp[i] = d2;
    }
}

Solution make_solution(cplx lambda, cplx mu, const RealField& grid) {
    Solution s;
    s.lambda = lambda;
    s.mu = mu;
    s.m = to_complex(grid);
    std::fill(s.m.values.begin(), s.m.values.end(), cplx(0.0));
    s.mp = s.m;
    s.mpp = s.m;
    s.lo = 0;
    s.hi = grid.size() - 1;
    return s;
}

// Implicit single-pass marching for the pure Volterra solutions m1 / m3.
Solution solve_volterra(cplx lambda, double p, const Config& cfg, bool at_plus_inf) {
    RealField grid = jost_grid(cfg);
    Pot pot(p, grid);
    SpectralPoint sp = cubic_spectrum::solve(lambda);
    const cplx mu = at_plus_inf ? sp.mu[0] : sp.mu[2];
    Solution s = make_solution(lambda, mu, grid);

    std::vector<TermSpec> terms;
    for (int j = 0; j < 3; ++j) {
        cplx c = sp.a[j] * sp.mu[j];
        if (at_plus_inf)
            terms.push_back({c, sp.mu[j] - mu, -1});
        else
            terms.push_back({-c, sp.mu[j] - mu, +1});
    }

    const std::size_t n = grid.size();
    const double h = grid.h;
    std::vector<QuadWeights> w(3);
    cplx sumw0 = 0.0;
    for (int j = 0; j < 3; ++j) {
        w[j] = make_weights(at_plus_inf ? terms[j].kappa : -terms[j].kappa, h);
        sumw0 += terms[j].gamma * w[j].W0;
    }
    std::vector<std::vector<cplx>> T(3, std::vector<cplx>(n, 0.0));
    std::vector<cplx> g(n, 0.0);

    auto step = [&](std::size_t i, std::size_t prev, std::size_t prev2, bool quad) {
        cplx rhs = 1.0;
        std::array<cplx, 3> part{};
        for (int j = 0; j < 3; ++j) {
            cplx Efac = w[j].E; // e^{-kappa h} rightward, e^{kappa h} leftward
            if (quad)
                part[j] = Efac * T[j][prev] + w[j].W1 * g[prev] + w[j].W2 * g[prev2];
            else
                part[j] = Efac * T[j][prev] + w[j].T1 * g[prev];
            rhs += terms[j].gamma * part[j];
        }
        cplx w0use = quad ? sumw0 : (terms[0].gamma * w[0].T0 +
                                     terms[1].gamma * w[1].T0 +
                                     terms[2].gamma * w[2].T0);
        cplx mi = rhs / (1.0 - pot.V[i] * w0use);
        s.m.values[i] = mi;
        g[i] = pot.V[i] * mi;
        for (int j = 0; j < 3; ++j)
            T[j][i] = part[j] + (quad ? w[j].W0 : w[j].T0) * g[i];
    };

    if (at_plus_inf) {
        s.m.values[n - 1] = 1.0;
        g[n - 1] = pot.V[n - 1];
        step(n - 2, n - 1, n - 1, false);
        for (std::size_t i = n - 2; i-- > 0;) step(i, i + 1, i + 2, true);
    } else {
        s.m.values[0] = 1.0;
        g[0] = pot.V[0];
        step(1, 0, 0, false);
        for (std::size_t i = 2; i < n; ++i) step(i, i - 1, i - 2, true);
    }

    assemble_derivatives(terms, pot, T, s.m.values, 0, n - 1, s.mp.values,
                         s.mpp.values);
    return s;
}

// RK4 continuation of Y = (f, f', f'') through
//   f''' = -(lambda + V') f + (1 - V) f',
// storing m = e^{-mu x} f into the solution over [from, to].
void continue_ode(Solution& s, double p, std::size_t from,
                  std::size_t to) {
    if (from == to) return;
    const double h0 = s.m.h;
    const cplx lambda = s.lambda, mu = s.mu;
    const bool fwd = to > from;
    const double dir = fwd ? 1.0 : -1.0;

    auto rhs = [&](double x, const std::array<cplx, 3>& y) {
        double phi = profiles::phi(x, p);
        double V = p * std::pow(phi, p - 1.0);
        double Vp = p * (p - 1.0) * std::pow(phi, p - 2.0) *
                    profiles::phi_x(x, p);
        return std::array<cplx, 3>{
            y[1], y[2], -(lambda + Vp) * y[0] + (1.0 - V) * y[1]};
    };

    double x = s.m.x(from);
    cplx e = std::exp(mu * x);
    std::array<cplx, 3> y{
        e * s.m.values[from],
        e * (mu * s.m.values[from] + s.mp.values[from]),
        e * (mu * mu * s.m.values[from] + 2.0 * mu * s.mp.values[from] +
             s.mpp.values[from])};

    std::size_t i = from;
    while (i != to) {
        const double hh = dir * h0;
        auto k1 = rhs(x, y);
        std::array<cplx, 3> y2, y3, y4;
        for (int q = 0; q < 3; ++q) y2[q] = y[q] + 0.5 * hh * k1[q];
        auto k2 = rhs(x + 0.5 * hh, y2);
        for (int q = 0; q < 3; ++q) y3[q] = y[q] + 0.5 * hh * k2[q];
        auto k3 = rhs(x + 0.5 * hh, y3);
        for (int q = 0; q < 3; ++q) y4[q] = y[q] + hh * k3[q];
        auto k4 = rhs(x + hh, y4);
        for (int q = 0; q < 3; ++q)
            y[q] += hh / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        x += hh;
        i = fwd ? i + 1 : i - 1;
        cplx em = std::exp(-mu * x);
        s.m.values[i] = em * y[0];
        s.mp.values[i] = em * y[1] - mu * s.m.values[i];
        s.mpp.values[i] = em * y[2] - 2.0 * mu * s.mp.values[i] -
                          mu * mu * s.m.values[i];
    }
}

// Fixed-point solve of m = 1 + T m on [lo, hi] with cap selection done by
// the caller; returns the converged iterate plus derivative data.
void fixed_point(Solution& s, const std::vector<TermSpec>& terms, const Pot& pot,
                 std::size_t lo, std::size_t hi, const Config& cfg) {
    const std::size_t n = s.m.size();
    std::vector<cplx> cur(n, 0.0), next(n, 0.0);
    for (std::size_t i = lo; i <= hi; ++i) cur[i] = 1.0;
    double diff = 1.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        apply_terms(terms, pot, cur, lo, hi, s.m.h, next);
        diff = 0.0;
        for (std::size_t i = lo; i <= hi; ++i)
            diff = std::max(diff, std::abs(next[i] - cur[i]));
        std::swap(cur, next);
        if (diff < cfg.fixed_point_tol) break;
    }
    if (diff >= cfg.fixed_point_tol)
        throw NonConvergence("jost: fixed point stalled at diff " +
                             std::to_string(diff));
    std::vector<std::vector<cplx>> T;
    apply_terms(terms, pot, cur, lo, hi, s.m.h, next, &T);
    for (std::size_t i = lo; i <= hi; ++i) s.m.values[i] = next[i];
    assemble_derivatives(terms, pot, T, s.m.values, lo, hi, s.mp.values,
                         s.mpp.values);
    s.lo = lo;
    s.hi = hi;
}

// Largest (want_max_cap) or smallest cap index fulfilling the contraction
// target; capped candidates stepped by 0.5 in x.
std::size_t select_cap(const std::vector<TermSpec>& terms, const Pot& pot,
                       const RealField& grid, const Config& cfg,
                       bool cap_is_upper) {
    const std::size_t n = grid.size();
    const std::size_t stride = std::max<std::size_t>(1,
        static_cast<std::size_t>(std::llround(0.5 / grid.h)));
    auto idx_of = [&](double x) {
        double xi = std::clamp(x, grid.xmin + grid.h, grid.xmax() - grid.h);
        return static_cast<std::size_t>(std::llround((xi - grid.xmin) / grid.h));
    };
    double best_norm = -1.0;
    if (cap_is_upper) {
        // domain [0, cap]; norm decreases as cap moves left
        for (std::size_t cap = std::min(n - 1 - stride, idx_of(8.0));; cap -= stride) {
            double norm = operator_norm_estimate(terms, pot, 0, cap, grid.h);
            best_norm = norm;
            if (norm <= cfg.contraction_target) return cap;
            if (cap < 2 * stride) break;
        }
    } else {
        for (std::size_t cap = std::max(stride, idx_of(-8.0));; cap += stride) {
            double norm = operator_norm_estimate(terms, pot, cap, n - 1, grid.h);
            best_norm = norm;
            if (norm <= cfg.contraction_target) return cap;
            if (cap + 2 * stride > n - 1) break;
        }
    }
    if (best_norm > cfg.contraction_abort)
        throw ContractionFailure("jost: operator norm " + std::to_string(best_norm));
    return cap_is_upper ? stride : n - 1 - stride;
}

} // namespace

RealField jost_grid(const Config& cfg) { return line_grid(cfg.L, cfg.h); }

Solution solve_m1(cplx lambda, double p, const Config& cfg) {
    return solve_volterra(lambda, p, cfg, true);
}

Solution solve_m3(cplx lambda, double p, const Config& cfg) {
    return solve_volterra(lambda, p, cfg, false);
}

Solution solve_m2tilde(cplx lambda, double p, const Config& cfg) {
    RealField grid = jost_grid(cfg);
    Pot pot(p, grid);
    SpectralPoint sp = cubic_spectrum::solve(lambda);
    Solution s = make_solution(lambda, sp.mu[1], grid);

    std::vector<TermSpec> terms = {
        {-sp.a[0] * sp.mu[0], sp.mu[0] - sp.mu[1], +1},
        {-sp.a[1] * sp.mu[1], cplx(0.0), +1},
        {+sp.a[2] * sp.mu[2], sp.mu[2] - sp.mu[1], -1},
    };
    std::size_t cap = select_cap(terms, pot, grid, cfg, true);
    fixed_point(s, terms, pot, 0, cap, cfg);
    s.xcap = grid.x(cap);
    continue_ode(s, p, cap, grid.size() - 1);
    s.hi = grid.size() - 1;
    return s;
}

Solution solve_F(int j, cplx lambda, double p, const Config& cfg) {
    if (j < 1 || j > 3) throw Error("solve_F: j must be 1, 2 or 3");
    RealField grid = jost_grid(cfg);
    Pot pot(p, grid);
    SpectralPoint sp = cubic_spectrum::solve(lambda);
    Solution s = make_solution(lambda, sp.mu[j - 1], grid);

    std::vector<TermSpec> terms;
    for (int q = 0; q < 3; ++q) {
        cplx c = sp.a[q] * sp.mu[q];
        cplx kap = sp.mu[q] - sp.mu[j - 1];
        if (j == 1) {
            // M1 on (-inf, x1]: own mode from -inf, others capped at x1
            if (q == 0)
                terms.push_back({-c, kap, +1});
            else
                terms.push_back({+c, kap, -1});
        } else {
            // M2 / M3 on [xc, +inf): modes with Re kappa >= 0 from +inf,
            // the decaying ones from the cap
            if (q >= j - 1)
                terms.push_back({+c, kap, -1});
            else
                terms.push_back({-c, kap, +1});
        }
    }

    const std::size_t n = grid.size();
    if (j == 1) {
        std::size_t cap = select_cap(terms, pot, grid, cfg, true);
        fixed_point(s, terms, pot, 0, cap, cfg);
        s.xcap = grid.x(cap);
        double xstop = std::min(grid.x(cap) + cfg.extension_span, grid.xmax());
        auto to = static_cast<std::size_t>(
            std::llround((xstop - grid.xmin) / grid.h));
        continue_ode(s, p, cap, to);
        s.hi = to;
    } else {
        std::size_t cap = select_cap(terms, pot, grid, cfg, false);
        fixed_point(s, terms, pot, cap, n - 1, cfg);
        s.xcap = grid.x(cap);
        double xstop = std::max(grid.x(cap) - cfg.extension_span, grid.xmin);
        auto to = static_cast<std::size_t>(
            std::llround((xstop - grid.xmin) / grid.h));
        continue_ode(s, p, cap, to);
        s.lo = to;
    }
    return s;
}

ComplexField neumann_m1(cplx lambda, double p, int nterms, const Config& cfg) {
    RealField grid = jost_grid(cfg);
    Pot pot(p, grid);
    SpectralPoint sp = cubic_spectrum::solve(lambda);
    std::vector<TermSpec> terms;
    for (int q = 0; q < 3; ++q)
        terms.push_back({sp.a[q] * sp.mu[q], sp.mu[q] - sp.mu[0], -1});
    const std::size_t n = grid.size();
    std::vector<cplx> cur(n, 1.0), next(n, 0.0);
    for (int k = 0; k < nterms; ++k) {
        apply_terms(terms, pot, cur, 0, n - 1, grid.h, next);
        std::swap(cur, next);
    }
    ComplexField out = to_complex(grid);
    out.values = cur;
    return out;
}

ComplexField wronskian_b(const Solution& a, const Solution& b) {
    ComplexField out = a.m;
    std::fill(out.values.begin(), out.values.end(), cplx(0.0));
    const std::size_t lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    const cplx dmu = b.mu - a.mu, smu = a.mu + b.mu;
    for (std::size_t i = lo; i <= hi; ++i) {
        cplx core = dmu * a.m.values[i] * b.m.values[i] +
                    a.m.values[i] * b.mp.values[i] -
                    a.mp.values[i] * b.m.values[i];
        out.values[i] = std::exp(smu * out.x(i)) * core;
    }
    return out;
}

namespace {

// Limit read-off with trailing-window settledness check.
cplx read_limit(const Solution& s, bool at_left, const Config& cfg) {
    const std::size_t n = s.m.size();
    const auto win = static_cast<std::size_t>(std::llround(cfg.settle_window / s.m.h));
    cplx val = at_left ? s.m.values[0] : s.m.values[n - 1];
    double dev = 0.0;
    for (std::size_t q = 0; q < std::min(win, n); ++q) {
        std::size_t i = at_left ? q : n - 1 - q;
        dev = std::max(dev, std::abs(s.m.values[i] - val));
    }
    if (dev > cfg.settle_tol * std::max(1.0, std::abs(val)))
        throw LimitNotSettled("jost: limit variation " + std::to_string(dev));
    return val;
}

} // namespace

EvansResult evans(cplx lambda, double p, const Config& cfg) {
    EvansResult r;
    r.lambda = lambda;
    Solution m3 = solve_m3(-lambda, p, cfg);
    r.D = read_limit(m3, false, cfg);
    Solution m1 = solve_m1(lambda, p, cfg);
    r.D_alt = read_limit(m1, true, cfg);
    double settle = 0.0;
    const auto win = static_cast<std::size_t>(std::llround(cfg.settle_window / cfg.h));
    for (std::size_t q = 0; q < win; ++q)
        settle = std::max(settle, std::abs(m1.m.values[q] - r.D_alt));
    r.settle = settle;
    return r;
}

namespace {

// 3x3 complex linear solve with partial pivoting; returns the solution,
// fills a crude condition estimate (Frobenius x Frobenius-of-inverse).
std::array<cplx, 3> solve3(std::array<std::array<cplx, 3>, 3> A,
                           std::array<cplx, 3> b, double* cond) {
    std::array<std::array<cplx, 3>, 3> Ainv{};
    std::array<std::array<cplx, 3>, 3> M = A;
    std::array<std::array<cplx, 3>, 3> I{};
    for (int i = 0; i < 3; ++i) I[i][i] = 1.0;
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        std::swap(M[piv], M[col]);
        std::swap(I[piv], I[col]);
        std::swap(b[piv], b[col]);
        if (std::abs(M[col][col]) < 1e-300)
            throw IllConditionedMatch("jost: singular matching matrix");
        cplx d = M[col][col];
        for (int c = 0; c < 3; ++c) {
            M[col][c] /= d;
            I[col][c] /= d;
        }
        b[col] /= d;
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            cplx f = M[r][col];
            for (int c = 0; c < 3; ++c) {
                M[r][c] -= f * M[col][c];
                I[r][c] -= f * I[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    Ainv = I;
    if (cond) {
        double na = 0, ni = 0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                na += std::norm(A[r][c]);
                ni += std::norm(Ainv[r][c]);
            }
        *cond = std::sqrt(na * ni);
    }
    return b;
}

std::array<cplx, 3> column_at(const Solution& s, std::size_t i) {
    return {s.f(i), s.fp(i), s.fpp(i)};
}

} // namespace

Connection connection_of(const Solution& m1, const Solution& m2t,
                         const Solution& m3, const Solution& F2,
                         const Solution& F3) {
    const auto i0 = static_cast<std::size_t>(
        std::llround((0.0 - m1.m.xmin) / m1.m.h));
    std::array<std::array<cplx, 3>, 3> A{};
    auto c1 = column_at(m1, i0), c2 = column_at(F2, i0), c3 = column_at(F3, i0);
    for (int r = 0; r < 3; ++r) {
        A[r][0] = c1[r];
        A[r][1] = c2[r];
        A[r][2] = c3[r];
    }
    Connection out;
    double cond = 0;
    auto s2 = solve3(A, column_at(m2t, i0), &cond);
    out.cond = cond;
    if (cond > 1e10) throw IllConditionedMatch("jost: matching condition " +
                                               std::to_string(cond));
    auto s3 = solve3(A, column_at(m3, i0), nullptr);
    out.c21 = s2[0];
    out.c22 = s2[1];
    out.c23 = s2[2];
    out.c31 = s3[0];
    out.c32 = s3[1];
    out.c33 = s3[2];
    return out;
}

cplx C0Fit::operator()(cplx lambda) const {
    // lambda * c23 / D(-lambda) with the common lambda^2 divided out
    cplx num1 = 0.0, lk = 1.0;
    for (int k = 1; k <= 4; ++k) {
        num1 += c23_coef[k - 1] * lk;
        lk *= lambda;
    }
    cplx den1 = 0.0;
    lk = 1.0;
    for (int k = 2; k <= 4; ++k) {
        den1 += dm_coef[k - 2] * lk;
        lk *= lambda;
    }
    return num1 / den1;
}

namespace {

// least squares for complex Vandermonde-type systems (normal equations)
template <int NC>
std::array<cplx, NC> lsq_fit(const std::vector<cplx>& xs,
                             const std::vector<cplx>& ys, int lowest_power) {
    std::array<std::array<cplx, NC>, NC> G{};
    std::array<cplx, NC> r{};
    for (std::size_t s = 0; s < xs.size(); ++s) {
        std::array<cplx, NC> row;
        cplx v = 1.0;
        for (int k = 0; k < lowest_power; ++k) v *= xs[s];
        for (int k = 0; k < NC; ++k) {
            row[k] = v;
            v *= xs[s];
        }
        for (int a = 0; a < NC; ++a) {
            for (int b = 0; b < NC; ++b) G[a][b] += std::conj(row[a]) * row[b];
            r[a] += std::conj(row[a]) * ys[s];
        }
    }
    // Gaussian elimination, no pivot drama expected at this size
    for (int col = 0; col < NC; ++col) {
        int piv = col;
        for (int q = col + 1; q < NC; ++q)
            if (std::abs(G[q][col]) > std::abs(G[piv][col])) piv = q;
        std::swap(G[piv], G[col]);
        std::swap(r[piv], r[col]);
        cplx d = G[col][col];
        for (int c = 0; c < NC; ++c) G[col][c] /= d;
        r[col] /= d;
        for (int q = 0; q < NC; ++q) {
            if (q == col) continue;
            cplx f = G[q][col];
            for (int c = 0; c < NC; ++c) G[q][c] -= f * G[col][c];
            r[q] -= f * r[col];
        }
    }
    return r;
}

} // namespace

C0Fit make_c0fit(double p, const Config& cfg) {
    std::vector<cplx> lams, c23s, dms;
    for (double tau : {-0.08, -0.06, -0.04, -0.02, 0.02, 0.04, 0.06, 0.08}) {
        cplx lam(0.0, tau);
        Solution m1 = solve_m1(lam, p, cfg);
        Solution m3 = solve_m3(lam, p, cfg);
        Solution m2t = solve_m2tilde(lam, p, cfg);
        Solution F2 = solve_F(2, lam, p, cfg);
        Solution F3 = solve_F(3, lam, p, cfg);
        Connection conn = connection_of(m1, m2t, m3, F2, F3);
        lams.push_back(lam);
        c23s.push_back(conn.c23);
        dms.push_back(m3.m.values[m3.m.size() - 1]); // D(-lambda)
    }
    C0Fit fit;
    fit.c23_coef = lsq_fit<4>(lams, c23s, 1);
    fit.dm_coef = lsq_fit<3>(lams, dms, 2);
    return fit;
}

Bundle build_bundle(cplx lambda, double p, const C0Fit* c0fit, const Config& cfg) {
    Bundle b;
    b.lambda = lambda;
    b.p = p;
    b.cfg = cfg;
    b.m1 = solve_m1(lambda, p, cfg);
    b.m3 = solve_m3(lambda, p, cfg);
    b.m2t = solve_m2tilde(lambda, p, cfg);
    b.F2 = solve_F(2, lambda, p, cfg);
    b.F3 = solve_F(3, lambda, p, cfg);
    b.conn = connection_of(b.m1, b.m2t, b.m3, b.F2, b.F3);
    b.D = b.m1.m.values[0];
    b.Dminus = b.m3.m.values[b.m3.m.size() - 1];
    b.W0 = cubic_spectrum::solve(lambda).w0;
    if (std::abs(lambda) >= 0.1)
        b.c0 = lambda * b.conn.c23 / b.Dminus;
    else if (c0fit)
        b.c0 = (*c0fit)(lambda);
    else if (std::abs(lambda) < 1e-14)
        b.c0 = 0.0; // f2(.,0) = -c0 f3: the limit value is irrelevant at 0
    else
        b.c0 = make_c0fit(p, cfg)(lambda);

    // assembled f2 = lambda ftilde2 - c0 f3 and pointwise derivatives
    const std::size_t n = b.m1.m.size();
    b.f2 = b.m2t.m;
    b.f2p = b.m2t.m;
    b.f2pp = b.m2t.m;
    for (std::size_t i = 0; i < n; ++i) {
        b.f2.values[i] = lambda * b.m2t.f(i) - b.c0 * b.m3.f(i);
        b.f2p.values[i] = lambda * b.m2t.fp(i) - b.c0 * b.m3.fp(i);
        b.f2pp.values[i] = lambda * b.m2t.fpp(i) - b.c0 * b.m3.fpp(i);
    }

    b.b13 = wronskian_b(b.m1, b.m3);
    b.bt12 = wronskian_b(b.m1, b.m2t);
    b.bt32 = wronskian_b(b.m3, b.m2t);
    // b12 = lambda bt12 - c0 b13 ; b23 = -lambda bt32
    b.b12 = b.bt12;
    b.b23 = b.bt32;
    for (std::size_t i = 0; i < n; ++i) {
        b.b12.values[i] = lambda * b.bt12.values[i] - b.c0 * b.b13.values[i];
        b.b23.values[i] = -lambda * b.bt32.values[i];
    }

    // Wronskian determinant of (f1, f2, f3) at a few stations
    auto det_at = [&](std::size_t i) {
        std::array<cplx, 3> c1 = {b.m1.f(i), b.m1.fp(i), b.m1.fpp(i)};
        std::array<cplx, 3> c2 = {b.f2.values[i], b.f2p.values[i], b.f2pp.values[i]};
        std::array<cplx, 3> c3 = {b.m3.f(i), b.m3.fp(i), b.m3.fpp(i)};
        return c1[0] * (c2[1] * c3[2] - c2[2] * c3[1]) -
               c2[0] * (c1[1] * c3[2] - c1[2] * c3[1]) +
               c3[0] * (c1[1] * c2[2] - c1[2] * c2[1]);
    };
    auto idx_of = [&](double x) {
        return static_cast<std::size_t>(std::llround((x - b.m1.m.xmin) / b.m1.m.h));
    };
    cplx w_mid = det_at(idx_of(0.0));
    b.W = w_mid;
    double var = 0.0;
    for (double x : {-5.0, -2.0, 2.0, 5.0})
        var = std::max(var, std::abs(det_at(idx_of(x)) - w_mid));
    b.w_constancy = var / (std::abs(w_mid) + 1e-30);
    return b;
}

WronskianCheck wronskian_identity_check(const Bundle& b) {
    WronskianCheck c;
    c.W = b.W;
    c.lambdaDW0 = b.lambda * b.D * b.W0;
    c.residual = std::abs(c.W - c.lambdaDW0) / (std::abs(c.lambdaDW0) + 1e-30);
    c.constancy = b.w_constancy;
    return c;
}

} // namespace jost
} // namespace gkdv
