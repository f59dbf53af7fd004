#include "gkdv/linop.hpp"

#include <cmath>

#include "gkdv/fourier.hpp"

namespace gkdv {
namespace linop {

namespace {

template <class T>
FieldGrid<T> diff(const FieldGrid<T>& v, int order) {
    if (v.periodic) return fourier::derivative(v, order);
    if (order == 1) return fd_derivative4(v);
    if (order == 2) return fd_second_derivative4(v);
    return fd_derivative4(fd_second_derivative4(v));
}

template <class T>
FieldGrid<T> lplus(const FieldGrid<T>& v, const SolitonParams& sp) {
    sp.validate();
    FieldGrid<T> d2 = diff(v, 2);
    FieldGrid<T> out = v;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double w = profiles::phi_c(v.x(i), sp);
        out.values[i] = -d2.values[i] +
                        (sp.c - sp.p * std::pow(w, sp.p - 1.0)) * v.values[i];
    }
    return out;
}

} // namespace

RealField apply_Lplus(const RealField& v, const SolitonParams& sp) { return lplus(v, sp); }
ComplexField apply_Lplus(const ComplexField& v, const SolitonParams& sp) { return lplus(v, sp); }

RealField apply_L(const RealField& v, const SolitonParams& sp) {
    return diff(lplus(v, sp), 1);
}
ComplexField apply_L(const ComplexField& v, const SolitonParams& sp) {
    return diff(lplus(v, sp), 1);
}

RealField apply_L_adjoint(const RealField& v, const SolitonParams& sp) {
    RealField out = lplus(diff(v, 1), sp);
    for (auto& x : out.values) x = -x;
    return out;
}
ComplexField apply_L_adjoint(const ComplexField& v, const SolitonParams& sp) {
    ComplexField out = lplus(diff(v, 1), sp);
    for (auto& x : out.values) x = -x;
    return out;
}

double virial_mm08_functional(const ComplexField& psi, double p, double floor) {
    // w = psi/phi where phi is above the floor; integrand |w'|^2 phi^{p+1}
    ComplexField w = psi;
    std::vector<bool> ok(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        double f = profiles::phi(psi.x(i), p);
        ok[i] = f > floor;
        w.values[i] = ok[i] ? psi.values[i] / f : cplx(0.0);
    }
    ComplexField dw = fd_derivative4(w);
    RealField integrand = real_part(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        bool interior = ok[i];
        for (std::size_t j = (i >= 3 ? i - 3 : 0);
             interior && j < std::min(psi.size(), i + 4); ++j)
            interior = ok[j];
        double f = profiles::phi(psi.x(i), p);
        integrand.values[i] =
            interior ? std::norm(dw.values[i]) * std::pow(f, p + 1.0) : 0.0;
    }
    return 1.5 * (p - 1.0) / (p + 1.0) * integrate(integrand);
}

double virial_mm08_crosscheck(const ComplexField& psi, double p) {
    SolitonParams sp{p, 1.0};
    ComplexField dpsi = fd_derivative4(psi);
    ComplexField ldp = apply_Lplus(dpsi, sp);
    RealField integrand = real_part(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        double mu = std::tanh(0.5 * (p - 1.0) * psi.x(i)); // -phi'/phi
        integrand.values[i] =
            (std::conj(psi.values[i]) * ldp.values[i]).real() * mu;
    }
    return -integrate(integrand);
}

} // namespace linop
} // namespace gkdv
