#include "floqmag/classical.hpp"

#include <cmath>

#include "floqmag/errors.hpp"

namespace floqmag {

double Vec2::norm() const { return std::hypot(x, y); }

std::array<double, 4> rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

Vec2 apply_rotation(double theta, const Vec2& v) {
    const auto r = rotation(theta);
    return {r[0] * v.x + r[1] * v.y, r[2] * v.x + r[3] * v.y};
}

PhaseState propagate_stroboscopic(const Monodromy& mono, double omega_T,
                                  const PhaseState& state, long N) {
    require(N >= 0, "ConfigError", "N must be >= 0");
    require(N <= 64, "OverflowRisk", "N must be <= 64");
    if (N == 0) return state;
    const Mat2 LN = mono.l_mat.pow(N);
    if (LN.max_abs() > 1e12) fail("OverflowRisk", "L^N entries exceed 1e12");
    const double th = static_cast<double>(N) * omega_T / 2.0;
    const Vec2 xr = apply_rotation(th, state.x);
    const Vec2 pr = apply_rotation(th, state.p);
    PhaseState out;
    out.x = {LN.a * xr.x + LN.b * pr.x, LN.a * xr.y + LN.b * pr.y};
    out.p = {LN.c * xr.x + LN.d * pr.x, LN.c * xr.y + LN.d * pr.y};
    return out;
}

namespace {

// least squares y ~ a + b t; returns (a, b)
std::pair<double, double> linfit(const std::vector<double>& t,
                                 const std::vector<double>& y) {
    const std::size_t n = t.size();
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    const double d = n * stt - st * st;
    const double b = (n * sty - st * sy) / d;
    const double a = (sy - b * st) / n;
    return {a, b};
}

double rel_rms(const std::vector<double>& data, const std::vector<double>& fit) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        num += (data[i] - fit[i]) * (data[i] - fit[i]);
        den += data[i] * data[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

GrowthFit growth_fit(const std::vector<double>& norms, long n0) {
    require(norms.size() >= 9, "InsufficientData",
            "growth fit needs at least 9 samples (N1 - N0 >= 8)");
    const std::size_t n = norms.size();
    std::vector<double> t(n), logy(n);
    double vmin = norms[0], vmax = norms[0];
    for (std::size_t i = 0; i < n; ++i) {
        require(norms[i] > 0.0, "InsufficientData", "norms must be positive");
        t[i] = static_cast<double>(n0) + static_cast<double>(i);
        logy[i] = std::log(norms[i]);
        vmin = std::min(vmin, norms[i]);
        vmax = std::max(vmax, norms[i]);
    }

    auto [la, lb] = linfit(t, logy);
    std::vector<double> efit(n);
    for (std::size_t i = 0; i < n; ++i) efit[i] = std::exp(la + lb * t[i]);
    const double r_exp = rel_rms(norms, efit);

    auto [a, b] = linfit(t, norms);
    std::vector<double> lfit(n);
    for (std::size_t i = 0; i < n; ++i) lfit[i] = a + b * t[i];
    const double r_lin = rel_rms(norms, lfit);

    // quadratic coefficient via normal equations on (1, t, t^2)
    double s0 = n, s1 = 0, s2 = 0, s3 = 0, s4 = 0, sy = 0, sty = 0, stty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = t[i], yi = norms[i];
        s1 += ti; s2 += ti * ti; s3 += ti * ti * ti; s4 += ti * ti * ti * ti;
        sy += yi; sty += ti * yi; stty += ti * ti * yi;
    }
    // solve 3x3 by Cramer
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) +
                       s2 * (s1 * s3 - s2 * s2);
    const double detc = s0 * (s2 * stty - s3 * sty) - s1 * (s1 * stty - s3 * sy) +
                        s2 * (s1 * sty - s2 * sy);
    const double qc = detc / det;

    GrowthFit gf;
    gf.quadratic_coefficient = qc;
    const bool bounded_gate = (vmax / vmin) < 10.0;
    if (bounded_gate && std::min(r_exp, r_lin) > 0.05) {
        gf.model = GrowthModel::Bounded;
        gf.rate = 0.0;
        double mean = 0;
        for (double v : norms) mean += v;
        mean /= static_cast<double>(n);
        std::vector<double> mfit(n, mean);
        gf.fit_quality = rel_rms(norms, mfit);
        return gf;
    }
    if (r_exp <= r_lin && lb > 0.0) {
        gf.model = GrowthModel::Exponential;
        gf.rate = lb;
        gf.fit_quality = r_exp;
    } else {
        gf.model = GrowthModel::Linear;
        gf.rate = b;
        gf.fit_quality = r_lin;
    }
    return gf;
}

}  // namespace floqmag
