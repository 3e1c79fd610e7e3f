#pragma once

#include <cstddef>
#include <vector>

#include "floqmag/hill.hpp"
#include "floqmag/potential.hpp"
#include "floqmag/propagator.hpp"
#include "floqmag/wavefunction.hpp"

namespace floqmag {

// Element of K = L^2([0,T]; L^2(R^2)) as midpoint time slices
// t_i = (i + 1/2) T / M.
struct FloquetVector {
    std::vector<WaveFunction> slices;
    double period = 0.0;

    static FloquetVector uniform(const WaveFunction& slice, std::size_t M,
                                 double T);
    double slice_time(std::size_t i) const {
        return (static_cast<double>(i) + 0.5) * period /
               static_cast<double>(slices.size());
    }
    double k_norm() const;  // ((T/M) sum ||slice||_2^2)^(1/2)
};

// integral_0^T |zeta2(t + N T)|^(-4/p) dt with an analytic model on a window
// of half-width `window` around each zero of the integrand: the Hill equation
// kills the quadratic term of zeta2 at its zeros, so the linear model
// 2 w^(1-4/p) / ((1-4/p) |g'(t0)|^(4/p)) is accurate to O(a^2 w^2).
// Hyperbolicity is required only for N >= 1 (where the period extension
// enters); N = 0 integrates the in-period solution directly.
double zeta2_singular_integral(const FundamentalPair& pair, const Monodromy& mono,
                               long N, double p, double window = 1e-3);

struct DecayReport {
    std::vector<long> N_values;
    std::vector<double> I_values;
    double fitted_rate = 0.0;     // from least squares on log I_N
    double predicted_rate = 0.0;  // 4 lambda / p
    double rel_deviation = 0.0;
};

DecayReport decay_fit(const FundamentalPair& pair, const Monodromy& mono,
                      double p, long N_lo, long N_hi);

struct ResolventSums {
    std::vector<double> I_values;      // I_0 .. I_Nmax
    std::vector<double> partial_sums;  // S_K = sum_{N<=K} sqrt(I_N)
};

ResolventSums resolvent_series_partial_sums(const FundamentalPair& pair,
                                            const Monodromy& mono, double p,
                                            long N_max);

struct ExcludedPair {
    double tau = 0.0, s = 0.0, gamma = 0.0;
};

struct FloquetNormRow {
    double t = 0.0;       // slice time
    long N = 0;
    double value = 0.0;   // (T/M) sum_s || rho1 U0~(t+NT, s) rho2 phi(s) ||_2
    double bound = 0.0;   // same quadrature of Gamma^(-2/p) ||rho1|| ||rho2|| ||phi||
};

struct FloquetNormTable {
    std::vector<FloquetNormRow> rows;
    std::vector<ExcludedPair> excluded;
};

FloquetNormTable floquet_free_norm(const FundamentalPair& pair,
                                   const Monodromy& mono, long N,
                                   const PotentialSpec& pot,
                                   const FloquetVector& phi, double p,
                                   double gamma_min = 1e-3);

struct SigmaRResult {
    std::vector<double> R_values;  // right edges of the midpoint panels
    std::vector<double> running;   // Sigma_R at those edges
    std::vector<ExcludedPair> excluded;
};

// Sigma_R = integral_0^R sigma e^(tau_im sigma) || rho1 U0~(sigma,0) rho2 phi ||_2
// dsigma by composite midpoint; the unimodular spectral phase is dropped.
// Requires |tau_im| T < 2 lambda / p (EpsilonTooLarge otherwise).
SigmaRResult sigma_R_quadrature(const FundamentalPair& pair, const Monodromy& mono,
                                const PotentialSpec& pot, const WaveFunction& phi,
                                double lambda_spec, double tau_im, double R,
                                double dsigma, double p,
                                double gamma_min = 1e-3);

struct CookSums {
    std::vector<double> terms;         // term_N, N = 1..N_max
    std::vector<double> partial_sums;  // C_K
    std::vector<ExcludedPair> excluded;
};

// C_K = sum_{N=1..K} (T/M) sum_slices || rho1 U0~(t+NT, 0) psi0 ||_2
CookSums cook_integrand_partial_sums(const FundamentalPair& pair,
                                     const Monodromy& mono,
                                     const PotentialSpec& pot,
                                     const WaveFunction& psi0, long N_max,
                                     double p, std::size_t slices = 8,
                                     double gamma_min = 1e-3);

enum class WaveopScheme {
    // W_N = U~(NT,0)^* (U0~(NT,0) psi0) with the interacting propagator by
    // backward Strang steps. Faithful but limited by grid escape of the
    // intermediate free state (GridEscape).
    Direct,
    // Same defect through the interaction picture: the shared unitary prefix
    // cancels in || W_N2 psi0 - W_N1 psi0 ||, leaving a reversed product of
    // conjugated potential kicks applied to psi0. The conjugations ride on
    // resampled chirp-cancelled transforms, so the state never spreads on the
    // grid; near-caustic kicks fall back to the multiplication limit V(u x).
    Interaction,
};

struct WaveopOptions {
    WaveopScheme scheme = WaveopScheme::Direct;
    std::size_t strang_steps_per_period = 2048;  // Direct
    std::size_t kicks_per_period = 64;           // Interaction
    double escape_threshold = 1e-3;              // outer-frame mass gate
    double gamma_min = 1e-3;
};

struct WaveopDefect {
    long N1 = 0, N2 = 0;
    double defect = 0.0;
};

WaveopDefect wave_operator_defect(const FundamentalPair& pair,
                                  const Monodromy& mono, const PotentialSpec* pot,
                                  const WaveFunction& psi0, long N1, long N2,
                                  const WaveopOptions& opts = {});

}  // namespace floqmag
