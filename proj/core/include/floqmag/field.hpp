#pragma once

#include <string>
#include <variant>
#include <vector>

namespace floqmag {

// Periodic magnetic field profiles B(t), extended exactly by B(t + T) = B(t).

struct ConstantProfile {
    double B0 = 0.0;
};

// B0 on [0, T0), 0 on [T0, T)
struct PulsedProfile {
    double B0 = 0.0;
    double T0 = 0.0;
};

// Bdc + Bac * cos(2 pi t / T)
struct SinusoidalProfile {
    double Bdc = 0.0;
    double Bac = 0.0;
};

enum class Interpolation { Linear, Cubic };

// Tabulated one-period profile. `times` must be strictly increasing, span
// [0, T], and the endpoint values must match so the periodic extension is
// continuous. Cubic interpolation uses a periodic C2 spline.
struct SampledProfile {
    std::vector<double> times;
    std::vector<double> values;
    Interpolation interpolation = Interpolation::Cubic;
};

using Profile = std::variant<ConstantProfile, PulsedProfile, SinusoidalProfile,
                             SampledProfile>;

class FieldSpec {
public:
    FieldSpec(double period, double mass, double charge, Profile profile);

    double period() const { return T_; }
    double mass() const { return m_; }
    double charge() const { return q_; }
    const Profile& profile() const { return profile_; }

    // B(t mod T)
    double evaluate(double t) const;

    // omega(t) = q B(t) / m
    double omega(double t) const { return q_ / m_ * evaluate(t); }

    // Omega(t) = integral_0^t omega ds, exact piecewise for the closed-form
    // profiles, adaptive quadrature for sampled ones. Additive over periods.
    double omega_integral(double t) const;

    // Hill coefficient a(t) = q B(t) / (2 m); the equation reads
    // zeta'' + a(t)^2 zeta = 0.
    double hill_coefficient(double t) const { return 0.5 * q_ / m_ * evaluate(t); }

    // In-period times where B is not smooth (segment ends for the pulsed
    // profile, knots for linearly interpolated samples). Integrators align
    // their steps to these.
    std::vector<double> breakpoints() const;

    bool is_closed_form() const;  // Constant or Pulsed: exact matrices exist

    std::string kind() const;

private:
    double T_, m_, q_;
    Profile profile_;
    double omega_T_ = 0.0;             // Omega over one full period
    std::vector<double> spline_m_;     // periodic spline second derivatives

    double reduce(double t) const;     // t mod T in [0, T)
    double eval_sampled(double s) const;
    double omega_frac(double s) const;  // Omega over [0, s], s in [0, T]
    void build_spline();
};

}  // namespace floqmag
