#include "floqmag/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floqmag/errors.hpp"
#include "floqmag/quadrature.hpp"

namespace floqmag {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FieldSpec::FieldSpec(double period, double mass, double charge, Profile profile)
    : T_(period), m_(mass), q_(charge), profile_(std::move(profile)) {
    require(T_ > 0.0, "ConfigError", "period must be > 0");
    require(m_ > 0.0, "ConfigError", "mass must be > 0");
    require(q_ != 0.0, "ConfigError", "charge must be nonzero");
    if (const auto* p = std::get_if<PulsedProfile>(&profile_)) {
        require(p->T0 > 0.0 && p->T0 < T_, "ConfigError",
                "pulsed profile requires 0 < T0 < period");
    }
    if (const auto* s = std::get_if<SampledProfile>(&profile_)) {
        require(s->times.size() >= 3 && s->times.size() == s->values.size(),
                "ConfigError", "sampled profile needs >= 3 matching samples");
        require(s->times.front() == 0.0 && s->times.back() == T_, "ConfigError",
                "sampled times must span [0, period]");
        for (std::size_t i = 1; i < s->times.size(); ++i)
            require(s->times[i] > s->times[i - 1], "ConfigError",
                    "sampled times must be strictly increasing");
        require(std::fabs(s->values.front() - s->values.back()) == 0.0,
                "ConfigError", "sampled endpoint values must match (periodicity)");
        build_spline();
    }
    omega_T_ = omega_frac(T_);
}

double FieldSpec::reduce(double t) const {
    double s = t - T_ * std::floor(t / T_);
    if (s >= T_) s -= T_;  // guard against rounding at the seam
    if (s < 0.0) s += T_;
    return s;
}

double FieldSpec::evaluate(double t) const {
    const double s = reduce(t);
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantProfile>) {
                return p.B0;
            } else if constexpr (std::is_same_v<P, PulsedProfile>) {
                return s < p.T0 ? p.B0 : 0.0;
            } else if constexpr (std::is_same_v<P, SinusoidalProfile>) {
                return p.Bdc + p.Bac * std::cos(kTwoPi * s / T_);
            } else {
                return eval_sampled(s);
            }
        },
        profile_);
}

void FieldSpec::build_spline() {
    // Periodic cubic spline: cyclic tridiagonal system for the second
    // derivatives at the knots (last knot identified with the first).
    const auto& sp = std::get<SampledProfile>(profile_);
    const std::size_t n = sp.times.size() - 1;  // independent knots
    spline_m_.assign(n + 1, 0.0);
    if (sp.interpolation == Interpolation::Linear || n < 3) return;

    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = sp.times[i + 1] - sp.times[i];
    auto y = [&](std::size_t i) { return sp.values[i % n]; };
    auto hh = [&](std::size_t i) { return h[i % n]; };

    // rows i = 0..n-1: h[i-1] m[i-1] + 2(h[i-1]+h[i]) m[i] + h[i] m[i+1] = rhs
    std::vector<double> a(n), b(n), c(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double hm = hh(i + n - 1), hp = hh(i);
        a[i] = hm;
        b[i] = 2.0 * (hm + hp);
        c[i] = hp;
        r[i] = 6.0 * ((y(i + 1) - y(i)) / hp - (y(i) - y(i + n - 1)) / hm);
    }
    // cyclic solve via Sherman-Morrison
    std::vector<double> u(n, 0.0);
    const double alpha = a[0], beta = c[n - 1];
    const double gamma = -b[0];
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    u[0] = gamma;
    u[n - 1] = alpha;
    auto thomas = [&](std::vector<double> rhs) {
        std::vector<double> cp(n), dp(n);
        cp[0] = c[0] / b[0];
        dp[0] = rhs[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double mdenom = b[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / mdenom;
            dp[i] = (rhs[i] - a[i] * dp[i - 1]) / mdenom;
        }
        std::vector<double> x(n);
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        return x;
    };
    auto xv = thomas(r);
    auto zv = thomas(u);
    const double vx = xv[0] + beta * xv[n - 1] / gamma;
    const double vz = zv[0] + beta * zv[n - 1] / gamma;
    const double factor = vx / (1.0 + vz);
    for (std::size_t i = 0; i < n; ++i) spline_m_[i] = xv[i] - factor * zv[i];
    spline_m_[n] = spline_m_[0];
}

double FieldSpec::eval_sampled(double s) const {
    const auto& sp = std::get<SampledProfile>(profile_);
    auto it = std::upper_bound(sp.times.begin(), sp.times.end(), s);
    std::size_t i = (it == sp.times.begin())
                        ? 0
                        : static_cast<std::size_t>(it - sp.times.begin()) - 1;
    if (i >= sp.times.size() - 1) i = sp.times.size() - 2;
    const double h = sp.times[i + 1] - sp.times[i];
    const double u = (s - sp.times[i]) / h;
    if (sp.interpolation == Interpolation::Linear || spline_m_.empty())
        return sp.values[i] * (1.0 - u) + sp.values[i + 1] * u;
    const double mi = spline_m_[i], mi1 = spline_m_[i + 1];
    const double a = sp.values[i], b = sp.values[i + 1];
    return (1.0 - u) * a + u * b +
           h * h / 6.0 *
               ((std::pow(1.0 - u, 3) - (1.0 - u)) * mi + (u * u * u - u) * mi1);
}

double FieldSpec::omega_frac(double s) const {
    const double qm = q_ / m_;
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantProfile>) {
                return qm * p.B0 * s;
            } else if constexpr (std::is_same_v<P, PulsedProfile>) {
                return qm * p.B0 * std::min(s, p.T0);
            } else if constexpr (std::is_same_v<P, SinusoidalProfile>) {
                return qm * (p.Bdc * s +
                             p.Bac * T_ / kTwoPi * std::sin(kTwoPi * s / T_));
            } else {
                if (s == 0.0) return 0.0;
                return qm * integrate_adaptive(
                                [&](double t) { return eval_sampled(t); }, 0.0, s,
                                1e-12, 1e-14);
            }
        },
        profile_);
}

double FieldSpec::omega_integral(double t) const {
    require(t >= 0.0, "ConfigError", "omega_integral requires t >= 0");
    const double nper = std::floor(t / T_);
    double s = t - nper * T_;
    if (s >= T_) s = 0.0;
    return nper * omega_T_ + omega_frac(s);
}

std::vector<double> FieldSpec::breakpoints() const {
    return std::visit(
        [&](const auto& p) -> std::vector<double> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, PulsedProfile>) {
                return {p.T0};
            } else if constexpr (std::is_same_v<P, SampledProfile>) {
                if (p.interpolation == Interpolation::Linear)
                    return std::vector<double>(p.times.begin() + 1,
                                               p.times.end() - 1);
                return {};
            } else {
                return {};
            }
        },
        profile_);
}

bool FieldSpec::is_closed_form() const {
    return std::holds_alternative<ConstantProfile>(profile_) ||
           std::holds_alternative<PulsedProfile>(profile_);
}

std::string FieldSpec::kind() const {
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantProfile>) return "constant";
            else if constexpr (std::is_same_v<P, PulsedProfile>) return "pulsed";
            else if constexpr (std::is_same_v<P, SinusoidalProfile>) return "sinusoidal";
            else return "sampled";
        },
        profile_);
}

}  // namespace floqmag
