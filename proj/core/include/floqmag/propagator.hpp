#pragma once

#include <optional>

#include "floqmag/hill.hpp"
#include "floqmag/potential.hpp"
#include "floqmag/wavefunction.hpp"

namespace floqmag {

// Fundamental matrix of the interval [s, tau]: Phi(tau) Phi(s)^{-1}. Its
// entries drive the quadratic-Hamiltonian kernel: u = a, v = b (the dispersive
// weight carrier), u' = c, v' = d.
struct IntervalCoefs {
    double u = 1.0, v = 0.0, up = 0.0, vp = 1.0;
};

IntervalCoefs interval_matrix(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s);

// Gamma(tau, s) = |zeta1(s) zeta2(tau) - zeta1(tau) zeta2(s)| = |v|
double gamma(const FundamentalPair& pair, const Monodromy& mono, double tau,
             double s);

enum class GuardPolicy {
    Strict,    // all aliasing guards, including the output chirp bound
    NormOnly,  // output used only through |psi|; skips the output-chirp guard
};

struct PropagateOptions {
    std::optional<GridSpec> out_grid;       // default: same as input
    GuardPolicy policy = GuardPolicy::Strict;
    double gamma_min = 1e-3;                // caustic threshold on |v|/m
    // position/wavenumber radius of the input state; estimated from grid
    // moments when absent
    std::optional<double> radius_x;
    std::optional<double> radius_k;
};

// Rotating-frame propagator U0~(tau, s) psi via chirp multiplication, a scaled
// Fourier transform (Bluestein), and the closing chirp. Exact for states that
// respect the aliasing guards; supports resampled output windows.
WaveFunction mehler_propagate(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s, const WaveFunction& psi,
                              const PropagateOptions& opts = {});

// Same transform without the closing chirp factor; the full value is
// chirpless * exp(i m v' |x|^2 / (2 v)). Used where the chirp cancels
// analytically against a following inverse transform.
WaveFunction mehler_chirpless(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s, const WaveFunction& psi,
                              const PropagateOptions& opts, IntervalCoefs& coefs);

// Inverse of the above: applies U0~(tau, s)^{-1} to chirp * inc where the
// opening chirp is cancelled analytically (inc is the chirpless field).
WaveFunction mehler_chirpless_inverse(const WaveFunction& inc,
                                      const IntervalCoefs& coefs, double mass,
                                      const GridSpec& out_grid);

// Second-order splitting for H0~(t) + V: half kinetic step in the momentum
// representation, full multiplicative step of the field + potential factor at
// the segment-aligned midpoint, half kinetic step. The steps never straddle a
// field breakpoint. Works backward when t1 < t0. This is the only propagator
// used when V is present and the accuracy oracle for mehler_propagate.
WaveFunction strang_oracle(const FieldSpec& field, const PotentialSpec* pot,
                           double t0, double t1, std::size_t steps,
                           const WaveFunction& psi);

// || U0~(tau,s) psi ||_inf * Gamma(tau,s) / || psi ||_1
double dispersive_ratio(const FundamentalPair& pair, const Monodromy& mono,
                        double tau, double s, const WaveFunction& psi,
                        const PropagateOptions& opts = {});

// || rho1 U0~(tau,s) (rho2 psi) ||_2 * Gamma^(2/p) / (||rho1||_p ||rho2||_p ||psi||_2)
double weighted_norm_ratio(const FundamentalPair& pair, const Monodromy& mono,
                           double tau, double s, const WaveFunction& psi,
                           const PotentialSpec& pot, double p_tilde,
                           PropagateOptions opts = {});

// 3-sigma spread radii of a state (position and wavenumber).
struct SpreadEstimate {
    double radius_x = 0.0;
    double radius_k = 0.0;
};

SpreadEstimate estimate_spread(const WaveFunction& psi);

// Output window that contains the classically spread state, capped by the
// alias-free output band of the transform.
GridSpec auto_output_grid(const GridSpec& in, const IntervalCoefs& coefs,
                          double mass, const SpreadEstimate& spread);

}  // namespace floqmag
