#include "gkdv/diagnostics.hpp"

#include <cmath>

#include "gkdv/fourier.hpp"

namespace gkdv {
namespace diagnostics {

namespace {

double psi(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

// smooth 0 -> 1 transition on [0, 1]
double rise(double t) {
    const double a = psi(t), b = psi(1.0 - t);
    return a / (a + b);
}

RealField deriv(const RealField& g) {
    return g.periodic ? fourier::derivative(g, 1) : fd_derivative4(g);
}

} // namespace

void WeightConfig::validate(double p) const {
    if (!(A > B * B && B * B > B && B > 1.0))
        throw Error("weights: need A > B^2 > B > 1");
    if (std::abs(A1 - std::cbrt(B)) > 1e-9 * std::cbrt(B))
        throw Error("weights: A1 must equal B^{1/3}");
    if (!(kappa > 0 && kappa < p - 1.0))
        throw Error("weights: kappa must lie in (0, p-1)");
    if (!(a > 0 && a <= 0.5 * kappa))
        throw Error("weights: need 0 < a <= kappa / 2");
}

double chi(double x) {
    const double r = std::abs(x);
    const double a = psi(2.0 - r), b = psi(r - 1.0);
    return a / (a + b);
}

double theta1(double x) {
    const double a = psi(2.0 - x), b = psi(x - 1.0);
    return a / (a + b);
}

double chi_tilde(double x) {
    if (x <= 0.5 || x >= 4.0) return 0.0;
    if (x < 1.0) return rise((x - 0.5) * 2.0);
    if (x <= 2.0) return 1.0;
    return rise((4.0 - x) * 0.5);
}

double zeta(double x, double C) {
    return std::exp(-(std::abs(x) / C) * (1.0 - chi(x)));
}

RealField zeta_field(const RealField& grid, double C) {
    return sampled_like(grid, [C](double x) { return zeta(x, C); });
}

namespace {

// odd primitive int_0^x q(y) dy on a grid: cumulative quadrature shifted
// so the value at x = 0 vanishes (grids here straddle 0)
RealField primitive_from_zero(const RealField& q) {
    RealField out = cumulative_integral(q);
    // linear interpolation of the cumulative at x = 0
    const double pos = -q.xmin / q.h;
    const auto i0 = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i0);
    const double at0 = (i0 + 1 < out.size())
                           ? (1.0 - w) * out.values[i0] + w * out.values[i0 + 1]
                           : out.values[i0];
    for (auto& v : out.values) v -= at0;
    return out;
}

} // namespace

RealField phi_weight(const RealField& grid, double C) {
    RealField q = sampled_like(grid, [C](double x) {
        const double z = zeta(x, C);
        return z * z;
    });
    return primitive_from_zero(q);
}

RealField theta_field(const RealField& grid, int i, double A1) {
    return sampled_like(grid, [i, A1](double x) {
        const double t1 = theta1(x / A1);
        return i == 1 ? t1 : 1.0 - t1;
    });
}

RealField phi_iAA1(const RealField& grid, int i, const WeightConfig& cfg) {
    RealField q = sampled_like(grid, [&](double x) {
        const double z = zeta(x, cfg.A);
        const double t1 = theta1(x / cfg.A1);
        const double t = i == 1 ? t1 : 1.0 - t1;
        return z * z * t * t;
    });
    return primitive_from_zero(q);
}

RealField phi_tilde_n(const RealField& grid, int n, double A1) {
    const double scale = std::ldexp(A1, n - 1); // 2^{n-1} A1
    RealField q = sampled_like(grid, [scale](double x) {
        return chi_tilde(x / scale);
    });
    return primitive_from_zero(q);
}

std::pair<double, double> sigma_norms(const RealField& v, const WeightConfig& cfg) {
    double out[2];
    for (int i = 1; i <= 2; ++i) {
        RealField w = sampled_like(v, [](double) { return 0.0; });
        for (std::size_t j = 0; j < v.size(); ++j) {
            const double x = v.x(j);
            const double t1 = theta1(x / cfg.A1);
            const double t = i == 1 ? t1 : 1.0 - t1;
            w.values[j] = t * zeta(x, cfg.A) * v.values[j];
        }
        out[i - 1] = norm_l2(deriv(w)) + norm_l2(w);
    }
    return {out[0], out[1]};
}

double sech_norm(const RealField& v, double kappa) {
    RealField w = v;
    for (std::size_t i = 0; i < v.size(); ++i)
        w.values[i] = v.values[i] / std::cosh(kappa * v.x(i));
    return norm_l2(w);
}

VirialValues virial_functionals(const RealField& v, const WeightConfig& cfg) {
    VirialValues out;
    auto quad = [&](const RealField& weight) {
        RealField dens = v;
        for (std::size_t i = 0; i < v.size(); ++i)
            dens.values[i] = v.values[i] * weight.values[i] * v.values[i];
        return 0.5 * integrate(dens);
    };
    out.I1 = quad(phi_iAA1(v, 1, cfg));
    out.I2 = quad(phi_iAA1(v, 2, cfg));
    out.tildeI.resize(19);
    double fac = 1.0;
    const double a1sq = cfg.A1 * cfg.A1;
    for (int l = 1; l <= 19; ++l) {
        out.tildeI[l - 1] = quad(phi_tilde_n(v, l, cfg.A1));
        fac /= a1sq;
        out.boldI20 += fac * out.tildeI[l - 1];
    }
    return out;
}

SmoothingResult smoothing_integral(const std::vector<double>& times,
                                   const std::vector<RealField>& vs, double a) {
    SmoothingResult res;
    std::vector<double> h1sq(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        RealField w = vs[k];
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double x = w.x(i);
            w.values[i] = std::exp(-a * std::sqrt(1.0 + x * x)) * vs[k].values[i];
        }
        const double l2 = norm_l2(w);
        const double d2 = norm_l2(deriv(w));
        h1sq[k] = l2 * l2 + d2 * d2;
        res.pointwise.emplace_back(times[k], l2);
    }
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        res.integral += 0.5 * (h1sq[k] + h1sq[k + 1]) * (times[k + 1] - times[k]);
    return res;
}

} // namespace diagnostics
} // namespace gkdv
