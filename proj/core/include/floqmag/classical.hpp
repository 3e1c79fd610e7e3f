#pragma once

#include <array>
#include <vector>

#include "floqmag/hill.hpp"

namespace floqmag {

struct Vec2 {
    double x = 0.0, y = 0.0;
    double norm() const;
};

struct PhaseState {
    Vec2 x;  // position
    Vec2 p;  // momentum
};

// R(theta) = [[cos, sin], [-sin, cos]]
std::array<double, 4> rotation(double theta);

Vec2 apply_rotation(double theta, const Vec2& v);

// Stroboscopic map: (x, p)(NT) from the one-period matrix acting on the
// rotated initial pair, Omega_T = Omega(T).
PhaseState propagate_stroboscopic(const Monodromy& mono, double omega_T,
                                  const PhaseState& state, long N);

enum class GrowthModel { Exponential, Linear, Bounded };

struct GrowthFit {
    GrowthModel model = GrowthModel::Bounded;
    double rate = 0.0;        // exponential rate or linear slope
    double fit_quality = 0.0; // relative RMS residual of the selected model
    double quadratic_coefficient = 0.0;  // from a quadratic fit, diagnostics
};

// Fits ||x(NT)|| for N = n0..n0+len-1 against exponential, linear and bounded
// growth; selects by normalized residual. Requires len >= 9 samples.
GrowthFit growth_fit(const std::vector<double>& norms, long n0);

}  // namespace floqmag
