#include "gkdv/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace gkdv {
namespace fourier {

namespace {

struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t n = 0;

    explicit Plans(std::size_t n_) : n(n_) {
        buf = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

std::mutex cache_mutex;

Plans& plans_for(std::size_t n) {
    static std::map<std::size_t, Plans*> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, new Plans(n)).first;
    return *it->second;
}

std::vector<cplx> run(const std::vector<cplx>& in, bool forward) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    Plans& p = plans_for(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        p.buf[i][0] = in[i].real();
        p.buf[i][1] = in[i].imag();
    }
    fftw_execute(forward ? p.fwd : p.bwd);
    std::vector<cplx> out(in.size());
    const double scale = forward ? 1.0 : 1.0 / static_cast<double>(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = cplx(p.buf[i][0], p.buf[i][1]) * scale;
    return out;
}

template <class T>
FieldGrid<T> apply_symbol(const FieldGrid<T>& g,
                          const std::vector<cplx>& symbol) {
    if (!g.periodic) throw GridTooSmall("fourier: periodic grid required");
    std::vector<cplx> hat = fft(std::vector<cplx>(g.values.begin(), g.values.end()));
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= symbol[i];
    std::vector<cplx> back = ifft(hat);
    FieldGrid<T> out = g;
    for (std::size_t i = 0; i < back.size(); ++i) {
        if constexpr (std::is_same_v<T, double>)
            out.values[i] = back[i].real();
        else
            out.values[i] = back[i];
    }
    return out;
}

} // namespace

std::vector<cplx> fft(const std::vector<cplx>& in) { return run(in, true); }
std::vector<cplx> ifft(const std::vector<cplx>& in) { return run(in, false); }

std::vector<double> wavenumbers(std::size_t n, double len) {
    std::vector<double> k(n);
    const double dk = 2.0 * M_PI / len;
    for (std::size_t i = 0; i < n; ++i) {
        auto j = static_cast<std::ptrdiff_t>(i);
        if (i > n / 2) j -= static_cast<std::ptrdiff_t>(n);
        k[i] = dk * static_cast<double>(j);
    }
    return k;
}

namespace {

std::vector<cplx> derivative_symbol(std::size_t n, double len, int order) {
    auto k = wavenumbers(n, len);
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx ik(0.0, k[i]);
        cplx v = 1.0;
        for (int m = 0; m < order; ++m) v *= ik;
        s[i] = v;
    }
    // kill the unmatched Nyquist mode for odd derivative orders
    if (order % 2 == 1 && n % 2 == 0) s[n / 2] = 0.0;
    return s;
}

std::vector<cplx> shift_symbol(std::size_t n, double len, double shift) {
    auto k = wavenumbers(n, len);
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = std::exp(cplx(0.0, -k[i] * shift));
    if (n % 2 == 0) s[n / 2] = std::cos(k[n / 2] * shift);
    return s;
}

} // namespace

RealField derivative(const RealField& g, int order) {
    return apply_symbol(g, derivative_symbol(g.size(), g.length(), order));
}
ComplexField derivative(const ComplexField& g, int order) {
    return apply_symbol(g, derivative_symbol(g.size(), g.length(), order));
}

RealField translate(const RealField& g, double shift) {
    return apply_symbol(g, shift_symbol(g.size(), g.length(), shift));
}
ComplexField translate(const ComplexField& g, double shift) {
    return apply_symbol(g, shift_symbol(g.size(), g.length(), shift));
}

RealField free_propagator(const RealField& g, double t) {
    auto k = wavenumbers(g.size(), g.length());
    std::vector<cplx> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        s[i] = std::exp(cplx(0.0, k[i] * k[i] * k[i] * t));
    if (g.size() % 2 == 0) {
        double kn = k[g.size() / 2];
        s[g.size() / 2] = std::cos(kn * kn * kn * t);
    }
    return apply_symbol(g, s);
}

} // namespace fourier
} // namespace gkdv
