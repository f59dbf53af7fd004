#pragma once

#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// Fourier-side utilities on periodic grids.  Plans are cached per size
// internally, so repeated calls at a fixed resolution are cheap.
namespace fourier {

// Complex transforms of the sample vector (forward: no normalisation,
// backward: divides by n).
std::vector<cplx> fft(const std::vector<cplx>& in);
std::vector<cplx> ifft(const std::vector<cplx>& in);

// Wavenumbers k_j for a periodic grid of n points on an interval of
// length `len` (fundamental mode 2*pi/len), in FFT storage order.
std::vector<double> wavenumbers(std::size_t n, double len);

// d^m/dx^m by spectral multiplication; grid must be periodic.
RealField derivative(const RealField& g, int order = 1);
ComplexField derivative(const ComplexField& g, int order = 1);

// u(. - shift) via Fourier phase rotation (exact for band-limited data).
RealField translate(const RealField& g, double shift);
ComplexField translate(const ComplexField& g, double shift);

// Multiply mode k by exp(i k^3 t): the free Airy group of u_t = -u_xxx.
RealField free_propagator(const RealField& g, double t);

} // namespace fourier

} // namespace gkdv
