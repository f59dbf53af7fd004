#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// Time integration of  u_t = -d/dx (u_xx + f(u))  on a periodic grid in
// the interaction picture: with w(t) = e^{t d^3/dx^3} u(t) the stiff part
// is removed and a classical fourth-order Runge-Kutta step applies, with
// the free Airy group (an exact Fourier multiplier) moving data between
// stage times.
namespace evolver {

struct Config {
    double L = 40.0;            // periodic domain [-L, L)
    std::size_t n = 1024;       // modes (power of two)
    double dt = 1e-3;
    double p = 2.0;
    bool signed_power = true;   // f(u) = |u|^{p-1} u; else |u|^p
    double t_end = 10.0;
    double frame_interval = 0.1;
    double blowup_factor = 1e3; // sup-norm growth triggering BlowupDetected
    double tail_fraction = 1e-6; // spectral tail / peak triggering ResolutionLoss
    double tail_fraction_initial = 1e-10; // resolvedness required of u0

    // Optional comoving absorbing layer emulating the whole line: all
    // radiation is left-moving (group velocity -3k^2), so on a periodic
    // domain it wraps around and re-enters the soliton window. A cos^2
    // damping bump of half-width sponge_width, moving at sponge_speed
    // and centered at the antipode of the initial soliton position,
    // absorbs it. Off by default (sponge_strength = 0).
    double sponge_strength = 0.0;
    double sponge_width = 50.0;
    double sponge_speed = 1.0;
    double sponge_center0 = 0.0; // center at t = 0 is this + L (antipode)
};

struct Conserved {
    double t = 0, Q = 0, E = 0;
};

struct Frame {
    double t = 0;
    RealField u;
};

struct Trajectory {
    std::vector<Frame> frames;       // at multiples of frame_interval
    std::vector<Conserved> conserved; // every step
};

// f(u) with the non-integer powers continuous at u = 0.
double power_f(double u, double p, bool signed_power);
// F(u) = int_0^u f
double power_F(double u, double p, bool signed_power);

RealField apply_f(const RealField& u, double p, bool signed_power);

double mass_Q(const RealField& u);
double energy_E(const RealField& u, double p, bool signed_power);

// Largest |spectral coefficient| in the top sixth of wavenumbers divided
// by the overall peak.
double spectral_tail_fraction(const RealField& u);

Trajectory evolve(const RealField& u0, const Config& cfg);

// Flat binary snapshot: 32-byte header (8-byte magic "GKDVFLD1",
// little-endian uint64 n, float64 L, float64 t), then n little-endian
// float64 samples.
void write_snapshot(std::ostream& os, const RealField& u, double t);
void write_snapshot(const std::string& path, const RealField& u, double t);
Frame read_snapshot(std::istream& is);
Frame read_snapshot(const std::string& path);

} // namespace evolver
} // namespace gkdv
