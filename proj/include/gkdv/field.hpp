#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

using cplx = std::complex<double>;

// Uniform 1-d grid carrying sampled values.  Two flavours are used:
//  - line grids: closed interval [-L, L], endpoint included, trapezoid
//    quadrature; used by the scattering-side computations.
//  - periodic grids: [-L, L) with the right endpoint identified with the
//    left one; used wherever Fourier differentiation is involved.
template <class T>
struct FieldGrid {
    double xmin = 0.0;
    double h = 0.0;
    bool periodic = false;
    std::vector<T> values;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return xmin + h * static_cast<double>(i); }
    double xmax() const {
        return xmin + h * static_cast<double>(periodic ? size() : size() - 1);
    }
    double length() const { return xmax() - xmin; }

    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }
};

using RealField = FieldGrid<double>;
using ComplexField = FieldGrid<cplx>;

inline RealField line_grid(double L, double h) {
    if (L <= 0 || h <= 0) throw GridTooSmall("line_grid: need L > 0 and h > 0");
    auto n = static_cast<std::size_t>(std::llround(2.0 * L / h)) + 1;
    if (n < 16) throw GridTooSmall("line_grid: fewer than 16 points");
    RealField g;
    g.xmin = -L;
    g.h = 2.0 * L / static_cast<double>(n - 1);
    g.periodic = false;
    g.values.assign(n, 0.0);
    return g;
}

inline RealField periodic_grid(double L, std::size_t n) {
    if (L <= 0 || n < 16) throw GridTooSmall("periodic_grid: need L > 0, n >= 16");
    RealField g;
    g.xmin = -L;
    g.h = 2.0 * L / static_cast<double>(n);
    g.periodic = true;
    g.values.assign(n, 0.0);
    return g;
}

template <class T, class F>
FieldGrid<T> sampled_like(const FieldGrid<T>& proto, F&& f) {
    FieldGrid<T> g = proto;
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = f(g.x(i));
    return g;
}

template <class T>
FieldGrid<cplx> to_complex(const FieldGrid<T>& g) {
    ComplexField out;
    out.xmin = g.xmin;
    out.h = g.h;
    out.periodic = g.periodic;
    out.values.assign(g.values.begin(), g.values.end());
    return out;
}

inline RealField real_part(const ComplexField& g) {
    RealField out;
    out.xmin = g.xmin;
    out.h = g.h;
    out.periodic = g.periodic;
    out.values.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = g.values[i].real();
    return out;
}

// Trapezoid quadrature (plain h-weighted sum on periodic grids).
template <class T>
T integrate(const FieldGrid<T>& g) {
    T s{};
    for (const auto& v : g.values) s += v;
    if (!g.periodic && g.size() >= 2)
        s -= (g.values.front() + g.values.back()) * 0.5;
    return s * g.h;
}

template <class A, class B>
auto inner(const FieldGrid<A>& a, const FieldGrid<B>& b) {
    using R = decltype(a.values[0] * b.values[0]);
    R s{};
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<A, cplx>)
            s += std::conj(a.values[i]) * b.values[i];
        else
            s += a.values[i] * b.values[i];
    }
    if (!a.periodic && n >= 2) {
        if constexpr (std::is_same_v<A, cplx>)
            s -= 0.5 * (std::conj(a.values.front()) * b.values.front() +
                        std::conj(a.values.back()) * b.values.back());
        else
            s -= 0.5 * (a.values.front() * b.values.front() +
                        a.values.back() * b.values.back());
    }
    return s * a.h;
}

template <class T>
double norm_l2(const FieldGrid<T>& g) {
    double s = 0;
    for (const auto& v : g.values) s += std::norm(cplx(v));
    if (!g.periodic && g.size() >= 2)
        s -= 0.5 * (std::norm(cplx(g.values.front())) + std::norm(cplx(g.values.back())));
    return std::sqrt(s * g.h);
}

template <class T>
double norm_sup(const FieldGrid<T>& g) {
    double m = 0;
    for (const auto& v : g.values) m = std::max(m, std::abs(cplx(v)));
    return m;
}

template <class T>
double norm_l1(const FieldGrid<T>& g) {
    double s = 0;
    for (const auto& v : g.values) s += std::abs(cplx(v));
    if (!g.periodic && g.size() >= 2)
        s -= 0.5 * (std::abs(cplx(g.values.front())) + std::abs(cplx(g.values.back())));
    return s * g.h;
}

// Running integral from the left edge, trapezoid cell by cell.  On line
// grids this realises x |-> int_{xmin}^{x}.
template <class T>
FieldGrid<T> cumulative_integral(const FieldGrid<T>& g) {
    FieldGrid<T> out = g;
    T acc{};
    out.values[0] = acc;
    for (std::size_t i = 1; i < g.size(); ++i) {
        acc += (g.values[i - 1] + g.values[i]) * (0.5 * g.h);
        out.values[i] = acc;
    }
    return out;
}

// Running integral with the Euler-Maclaurin h^2 endpoint correction
// (4th-order accurate for smooth integrands); derivative by FD4.
template <class T>
FieldGrid<T> cumulative_integral4(const FieldGrid<T>& g) {
    FieldGrid<T> out = cumulative_integral(g);
    FieldGrid<T> d = fd_derivative4(g);
    const double c = g.h * g.h / 12.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values[i] -= c * (d.values[i] - d.values[0]);
    return out;
}

// Centered finite differences (one-sided at line-grid edges).
template <class T>
FieldGrid<T> fd_derivative(const FieldGrid<T>& g) {
    FieldGrid<T> out = g;
    const std::size_t n = g.size();
    const double inv2h = 1.0 / (2.0 * g.h);
    auto at = [&](std::ptrdiff_t i) -> const T& {
        std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
        if (g.periodic) return g.values[static_cast<std::size_t>(((i % nn) + nn) % nn)];
        return g.values[static_cast<std::size_t>(i)];
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.periodic && i == 0)
            out.values[i] = (-3.0 * g.values[0] + 4.0 * g.values[1] - g.values[2]) * inv2h;
        else if (!g.periodic && i == n - 1)
            out.values[i] = (3.0 * g.values[n - 1] - 4.0 * g.values[n - 2] + g.values[n - 3]) * inv2h;
        else
            out.values[i] = (at(static_cast<std::ptrdiff_t>(i) + 1) -
                             at(static_cast<std::ptrdiff_t>(i) - 1)) * inv2h;
    }
    return out;
}

// 4th-order centered first derivative; falls back to 2nd order near
// line-grid edges.
template <class T>
FieldGrid<T> fd_derivative4(const FieldGrid<T>& g) {
    FieldGrid<T> out = g;
    const std::size_t n = g.size();
    const double invh = 1.0 / g.h;
    auto at = [&](std::ptrdiff_t i) -> const T& {
        std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
        if (g.periodic) return g.values[static_cast<std::size_t>(((i % nn) + nn) % nn)];
        return g.values[static_cast<std::size_t>(i)];
    };
    FieldGrid<T> low = fd_derivative(g);
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.periodic && (i < 2 || i + 2 >= n)) {
            out.values[i] = low.values[i];
            continue;
        }
        std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
        out.values[i] = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) *
                        (invh / 12.0);
    }
    return out;
}

// 4th-order centered second derivative (2nd order near line-grid edges).
template <class T>
FieldGrid<T> fd_second_derivative4(const FieldGrid<T>& g) {
    FieldGrid<T> out = g;
    const std::size_t n = g.size();
    const double invh2 = 1.0 / (g.h * g.h);
    auto at = [&](std::ptrdiff_t i) -> const T& {
        std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
        if (g.periodic) return g.values[static_cast<std::size_t>(((i % nn) + nn) % nn)];
        return g.values[static_cast<std::size_t>(i)];
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
        if (!g.periodic && (i < 2 || i + 2 >= n)) {
            std::ptrdiff_t c = k;
            if (i < 2) c = 1;
            if (i + 2 >= n) c = static_cast<std::ptrdiff_t>(n) - 2;
            out.values[i] = (at(c - 1) - 2.0 * at(c) + at(c + 1)) * invh2;
            continue;
        }
        out.values[i] = (-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) +
                         16.0 * at(k + 1) - at(k + 2)) * (invh2 / 12.0);
    }
    return out;
}

template <class T>
bool same_grid(const FieldGrid<T>& a, const FieldGrid<T>& b, double tol = 1e-12) {
    return a.size() == b.size() && a.periodic == b.periodic &&
           std::abs(a.xmin - b.xmin) < tol && std::abs(a.h - b.h) < tol;
}

} // namespace gkdv
