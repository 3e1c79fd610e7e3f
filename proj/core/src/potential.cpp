#include "floqmag/potential.hpp"

#include <cmath>
#include <numbers>

#include "floqmag/errors.hpp"
#include "floqmag/quadrature.hpp"

namespace floqmag {

PotentialSpec::PotentialSpec(double v0, double rho) : v0_(v0), rho_(rho) {
    require(rho_ > 0.0, "ConfigError", "potential decay rho must be > 0");
}

double PotentialSpec::value(double r2) const {
    return v0_ * std::pow(1.0 + r2, -0.5 * rho_);
}

double PotentialSpec::rho1(double r2) const {
    return std::sqrt(std::fabs(v0_)) * std::pow(1.0 + r2, -0.25 * rho_);
}

double PotentialSpec::rho2(double r2) const {
    const double s = (v0_ > 0.0) ? 1.0 : (v0_ < 0.0 ? -1.0 : 0.0);
    return s * rho1(r2);
}

LpNorm PotentialSpec::lp_norm(double p) const {
    require(p >= 1.0, "ConfigError", "Lp norm requires p >= 1");
    if (v0_ == 0.0) return {true, 0.0};
    const double beta = p * rho_ / 4.0;  // integrand r (1+r^2)^(-beta)
    if (beta <= 1.0) return {false, 0.0};
    // substitute r = s/(1-s) to map [0, inf) to [0, 1)
    auto f = [&](double s) {
        const double r = s / (1.0 - s);
        const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
        return r * std::pow(1.0 + r * r, -beta) * jac;
    };
    const double radial = integrate_adaptive(f, 0.0, 1.0, 1e-12, 1e-300);
    const double full =
        2.0 * std::numbers::pi * std::pow(std::fabs(v0_), 0.5 * p) * radial;
    return {true, std::pow(full, 1.0 / p)};
}

double PotentialSpec::disc_integral(double rc) const {
    const double av0 = std::fabs(v0_);
    if (rho_ == 2.0)
        return std::numbers::pi * av0 * std::log1p(rc * rc);
    return 2.0 * std::numbers::pi * av0 *
           (std::pow(1.0 + rc * rc, 1.0 - 0.5 * rho_) - 1.0) / (2.0 - rho_);
}

}  // namespace floqmag
