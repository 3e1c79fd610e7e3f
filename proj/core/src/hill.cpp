#include "floqmag/hill.hpp"

#include <algorithm>
#include <cmath>

#include "floqmag/errors.hpp"

namespace floqmag {

namespace {

// constant-coefficient fundamental matrix over an interval of length tau
Mat2 segment_matrix(double a, double tau) {
    if (a == 0.0) return {1.0, tau, 0.0, 1.0};
    const double c = std::cos(a * tau), s = std::sin(a * tau);
    return {c, s / a, -a * s, c};
}

}  // namespace

FundamentalPair FundamentalPair::integrate(const FieldSpec& field, double h,
                                           double wronskian_tol) {
    const double T = field.period();
    require(h > 0.0 && h <= T / 256.0, "StepTooCoarse",
            "step must satisfy h <= T/256");
    const std::size_t n = static_cast<std::size_t>(std::ceil(T / h - 1e-12));
    FundamentalPair pair(field);
    pair.h_ = T / static_cast<double>(n);
    pair.z1_.resize(n + 1);
    pair.dz1_.resize(n + 1);
    pair.z2_.resize(n + 1);
    pair.dz2_.resize(n + 1);

    if (field.is_closed_form()) {
        // exact piecewise rotation/shear matrices
        double a0 = field.hill_coefficient(0.0);
        double T0 = T;
        if (const auto* p = std::get_if<PulsedProfile>(&field.profile())) T0 = p->T0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = pair.h_ * static_cast<double>(k);
            Mat2 phi = (t <= T0)
                           ? segment_matrix(a0, t)
                           : segment_matrix(0.0, t - T0) * segment_matrix(a0, T0);
            pair.z1_[k] = phi.a;
            pair.z2_[k] = phi.b;
            pair.dz1_[k] = phi.c;
            pair.dz2_[k] = phi.d;
        }
    } else {
        // classical RK4 on the first-order system for both columns at once
        double y[4] = {1.0, 0.0, 0.0, 1.0};  // z1, dz1, z2, dz2
        pair.z1_[0] = 1.0;
        pair.dz1_[0] = 0.0;
        pair.z2_[0] = 0.0;
        pair.dz2_[0] = 1.0;
        auto deriv = [&](double t, const double* y_in, double* dy) {
            const double a = field.hill_coefficient(t);
            const double w = a * a;
            dy[0] = y_in[1];
            dy[1] = -w * y_in[0];
            dy[2] = y_in[3];
            dy[3] = -w * y_in[2];
        };
        const double hh = pair.h_;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = hh * static_cast<double>(k);
            double k1[4], k2[4], k3[4], k4[4], tmp[4];
            deriv(t, y, k1);
            for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * hh * k1[i];
            deriv(t + 0.5 * hh, tmp, k2);
            for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * hh * k2[i];
            deriv(t + 0.5 * hh, tmp, k3);
            for (int i = 0; i < 4; ++i) tmp[i] = y[i] + hh * k3[i];
            deriv(t + hh, tmp, k4);
            for (int i = 0; i < 4; ++i)
                y[i] += hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            pair.z1_[k + 1] = y[0];
            pair.dz1_[k + 1] = y[1];
            pair.z2_[k + 1] = y[2];
            pair.dz2_[k + 1] = y[3];
        }
    }

    if (pair.wronskian_drift() > wronskian_tol)
        fail("StepTooCoarse", "Wronskian drift exceeds tolerance");
    return pair;
}

double FundamentalPair::wronskian_drift() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < z1_.size(); ++k) {
        const double w = z1_[k] * dz2_[k] - dz1_[k] * z2_[k];
        worst = std::max(worst, std::fabs(w - 1.0));
    }
    return worst;
}

void FundamentalPair::eval_in_period(double s, double& z1, double& dz1,
                                     double& z2, double& dz2) const {
    const double T = field_.period();
    s = std::clamp(s, 0.0, T);
    std::size_t k = static_cast<std::size_t>(s / h_);
    if (k >= z1_.size() - 1) k = z1_.size() - 2;
    const double u = (s - h_ * static_cast<double>(k)) / h_;
    const double h00 = (2.0 * u - 3.0) * u * u + 1.0;
    const double h10 = ((u - 2.0) * u + 1.0) * u;
    const double h01 = (3.0 - 2.0 * u) * u * u;
    const double h11 = (u - 1.0) * u * u;
    // second derivatives from the ODE close the Hermite data for z'
    auto w_at = [&](std::size_t i) {
        const double a = field_.hill_coefficient(h_ * static_cast<double>(i));
        return a * a;
    };
    const double w0 = w_at(k), w1 = w_at(k + 1);
    z1 = h00 * z1_[k] + h10 * h_ * dz1_[k] + h01 * z1_[k + 1] + h11 * h_ * dz1_[k + 1];
    z2 = h00 * z2_[k] + h10 * h_ * dz2_[k] + h01 * z2_[k + 1] + h11 * h_ * dz2_[k + 1];
    dz1 = h00 * dz1_[k] + h10 * h_ * (-w0 * z1_[k]) + h01 * dz1_[k + 1] +
          h11 * h_ * (-w1 * z1_[k + 1]);
    dz2 = h00 * dz2_[k] + h10 * h_ * (-w0 * z2_[k]) + h01 * dz2_[k + 1] +
          h11 * h_ * (-w1 * z2_[k + 1]);
}

Monodromy monodromy(const FundamentalPair& pair) {
    Monodromy m;
    m.phi_T = pair.matrix_at(pair.samples() - 1);
    m.mass = pair.field().mass();
    m.period = pair.field().period();
    m.l_mat = {m.phi_T.a, m.phi_T.b / m.mass, m.mass * m.phi_T.c, m.phi_T.d};
    require(std::fabs(m.phi_T.det() - 1.0) <= 1e-9, "StepTooCoarse",
            "monodromy determinant deviates from 1");
    return m;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Hyperbolic: return "Hyperbolic";
        case Regime::Parabolic: return "Parabolic";
        default: return "Elliptic";
    }
}

StabilityClass classify(const Monodromy& mono, double tau_D) {
    StabilityClass sc;
    const double D = mono.phi_T.trace();
    sc.discriminant = D;
    const double disc = D * D - 4.0;
    if (std::fabs(disc) <= tau_D) {
        sc.regime = Regime::Parabolic;
    } else if (disc > 0.0) {
        sc.regime = Regime::Hyperbolic;
        const double r = 0.5 * (std::fabs(D) + std::sqrt(disc));
        sc.floquet_exponent = std::log(r);
        sc.lambda_tilde = -sc.floquet_exponent;  // other eigenvalue, det = 1
    } else {
        sc.regime = Regime::Elliptic;
    }
    sc.zeta2_T_nonzero = std::fabs(mono.phi_T.b) > tau_D;
    return sc;
}

ExtensionCoefficients extension_coefficients(const Monodromy& mono, long N) {
    require(std::labs(N) <= 64, "OverflowRisk", "|N| must be <= 64");
    const double D = mono.phi_T.trace();
    const double disc = D * D - 4.0;
    const double radius =
        disc > 0.0 ? 0.5 * (std::fabs(D) + std::sqrt(disc)) : 1.0;
    if (static_cast<double>(std::labs(N)) * std::log(std::max(radius, 1.0)) >
        std::log(1e12))
        fail("OverflowRisk", "predicted coefficient magnitude exceeds 1e12");
    ExtensionCoefficients ec;
    ec.N = N;
    ec.A = mono.phi_T.transpose().pow(N);
    if (ec.A.max_abs() > 1e12) fail("OverflowRisk", "coefficients exceed 1e12");
    return ec;
}

std::pair<double, double> evaluate_zeta(const FundamentalPair& pair,
                                        const Monodromy& mono, int j, double t) {
    require(j == 1 || j == 2, "ConfigError", "j must be 1 or 2");
    require(t >= 0.0, "ConfigError", "evaluate_zeta requires t >= 0");
    const double T = pair.field().period();
    double nper = std::floor(t / T);
    double s = t - nper * T;
    if (s >= T) {
        s -= T;
        nper += 1.0;
    }
    double z1, dz1, z2, dz2;
    pair.eval_in_period(s, z1, dz1, z2, dz2);
    if (nper == 0.0)
        return (j == 1) ? std::make_pair(z1, dz1) : std::make_pair(z2, dz2);
    const auto ec = extension_coefficients(mono, static_cast<long>(nper));
    if (j == 1)
        return {ec.a1() * z1 + ec.a2() * z2, ec.a1() * dz1 + ec.a2() * dz2};
    return {ec.a3() * z1 + ec.a4() * z2, ec.a3() * dz1 + ec.a4() * dz2};
}

namespace {

double bisect_zero(const FundamentalPair& pair, int j, double lo, double hi) {
    auto value = [&](double t) {
        double z1, dz1, z2, dz2;
        pair.eval_in_period(t, z1, dz1, z2, dz2);
        return j == 1 ? z1 : z2;
    };
    double flo = value(lo);
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = value(mid);
        if ((flo <= 0.0 && fm <= 0.0) || (flo >= 0.0 && fm >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ZeroSet find_zeros(const FundamentalPair& pair, int j) {
    require(j == 1 || j == 2, "ConfigError", "j must be 1 or 2");
    const double T = pair.field().period();
    ZeroSet zs;
    zs.which = j;
    auto push = [&](double t) {
        double z1, dz1, z2, dz2;
        pair.eval_in_period(t, z1, dz1, z2, dz2);
        const double d = (j == 1) ? dz1 : dz2;
        if (std::fabs(d) < 1e-8)
            fail("DegenerateZero",
                 "zero with vanishing derivative contradicts the Wronskian");
        zs.zeros.push_back(t);
        zs.derivative_at_zero.push_back(d);
    };
    if (j == 2) push(0.0);  // zeta2(0) = 0 exactly
    const std::size_t n = pair.samples() - 1;
    auto val = [&](std::size_t k) { return j == 1 ? pair.zeta1(k) : pair.zeta2(k); };
    for (std::size_t k = 0; k < n; ++k) {
        double a = val(k), b = val(k + 1);
        if (k == 0 && j == 2) continue;  // the t = 0 zero is already recorded
        if (a == 0.0) {
            const double t = pair.step() * static_cast<double>(k);
            if (t > 0.0 && t < T) push(t);
            continue;
        }
        if (a * b < 0.0) {
            const double lo = pair.step() * static_cast<double>(k);
            const double hi = lo + pair.step();
            const double t = bisect_zero(pair, j, lo, hi);
            if (t < T * (1.0 - 1e-14)) push(t);
        }
    }
    return zs;
}

RatioReport ratio_monotonicity_check(const FundamentalPair& pair, int denominator,
                                     double t_lo, double t_hi,
                                     std::size_t points) {
    require(denominator == 1 || denominator == 2, "ConfigError",
            "denominator index must be 1 or 2");
    const double T = pair.field().period();
    require(t_lo >= 0.0 && t_hi <= T && t_lo < t_hi, "ConfigError",
            "interval must lie inside [0, T]");
    auto fetch = [&](double t, double& num, double& den, double& dnum,
                     double& dden) {
        double z1, dz1, z2, dz2;
        pair.eval_in_period(t, z1, dz1, z2, dz2);
        if (denominator == 2) {
            num = z1; dnum = dz1; den = z2; dden = dz2;
        } else {
            num = z2; dnum = dz2; den = z1; dden = dz1;
        }
    };
    const double expected = (denominator == 2) ? -1.0 : 1.0;

    RatioReport rep;
    rep.denominator = denominator;
    rep.min_abs_slope = 0.0;
    const double dt = (t_hi - t_lo) / static_cast<double>(points + 1);
    auto ratio = [&](double t) {
        double num, den, dnum, dden;
        fetch(t, num, den, dnum, dden);
        if (den == 0.0) fail("IntervalContainsZero", "denominator vanishes");
        return num / den;
    };
    bool first = true;
    for (std::size_t i = 1; i <= points; ++i) {
        const double t = t_lo + dt * static_cast<double>(i);
        double num, den, dnum, dden;
        fetch(t, num, den, dnum, dden);
        if (std::fabs(den) < 1e-12)
            fail("IntervalContainsZero", "denominator vanishes inside interval");
        // five-point stencil keeps the finite-difference error ~ O(dt^4)
        const double fd = std::min(dt, std::min(t - t_lo, t_hi - t) / 2.5);
        const double slope = (-ratio(t + 2.0 * fd) + 8.0 * ratio(t + fd) -
                              8.0 * ratio(t - fd) + ratio(t - 2.0 * fd)) /
                             (12.0 * fd);
        // quotient-rule slope from interpolated values; the identity residual
        // reduces to the Wronskian deviation
        const double qslope = (dnum * den - num * dden) / (den * den);
        const double resid = std::fabs(qslope * den * den - expected);
        rep.max_identity_residual = std::max(rep.max_identity_residual, resid);
        const int sgn = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
        if (first) {
            rep.slope_sign = sgn;
            rep.min_abs_slope = std::fabs(slope);
            rep.strictly_monotone = sgn != 0;
            first = false;
        } else {
            rep.min_abs_slope = std::min(rep.min_abs_slope, std::fabs(slope));
            if (sgn != rep.slope_sign || sgn == 0) rep.strictly_monotone = false;
        }
    }
    return rep;
}

}  // namespace floqmag
