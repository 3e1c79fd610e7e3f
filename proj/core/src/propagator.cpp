#include "floqmag/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "floqmag/fft.hpp"

namespace floqmag {

namespace {
constexpr cplx kI{0.0, 1.0};
}

IntervalCoefs interval_matrix(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s) {
    auto [z1t, dz1t] = evaluate_zeta(pair, mono, 1, tau);
    auto [z2t, dz2t] = evaluate_zeta(pair, mono, 2, tau);
    auto [z1s, dz1s] = evaluate_zeta(pair, mono, 1, s);
    auto [z2s, dz2s] = evaluate_zeta(pair, mono, 2, s);
    const Mat2 phit{z1t, z2t, dz1t, dz2t};
    const Mat2 phis_inv = Mat2{z1s, z2s, dz1s, dz2s}.unimodular_inverse();
    const Mat2 m = phit * phis_inv;
    return {m.a, m.b, m.c, m.d};
}

double gamma(const FundamentalPair& pair, const Monodromy& mono, double tau,
             double s) {
    require(tau >= 0.0 && s >= 0.0, "ConfigError", "gamma requires tau, s >= 0");
    if (tau == s) return 0.0;
    return std::fabs(interval_matrix(pair, mono, tau, s).v);
}

SpreadEstimate estimate_spread(const WaveFunction& psi) {
    SpreadEstimate e;
    e.radius_x = 3.0 * psi.second_moment() + 2.0 * psi.grid().dx();
    e.radius_k = 3.0 * psi.momentum_second_moment();
    return e;
}

GridSpec auto_output_grid(const GridSpec& in, const IntervalCoefs& coefs,
                          double mass, const SpreadEstimate& spread) {
    // window that contains the classically spread state; the transform guards
    // still decide whether the band is alias-free
    const double w_pred = std::hypot(coefs.u * spread.radius_x,
                                     coefs.v / mass * spread.radius_k);
    const double L = std::max(1.2 * w_pred + 2.0, 16.0 * in.dx());
    return GridSpec(in.n, L);
}

namespace {

// Scaled DFT along the contiguous axis of a row-major n x n array:
// out[r][i] = sum_j in[r][j] exp(-i theta (i - c)(j - c)), c = n/2.
// Bluestein factorization; exact for any theta.
void scaled_dft_axis(std::vector<cplx>& a, std::size_t n, double theta) {
    const std::size_t M = 2 * n;
    const double half = 0.5 * theta;
    std::vector<cplx> chirp(n);
    const double c = static_cast<double>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = static_cast<double>(j) - c;
        chirp[j] = std::exp(-kI * (half * d * d));
    }
    std::vector<cplx> ghat(M, cplx(0.0, 0.0));
    for (std::ptrdiff_t d = -(static_cast<std::ptrdiff_t>(n) - 1);
         d < static_cast<std::ptrdiff_t>(n); ++d) {
        const double dd = static_cast<double>(d);
        ghat[(d + static_cast<std::ptrdiff_t>(M)) % M] =
            std::exp(kI * (half * dd * dd));
    }
    fft_rows(ghat.data(), M, 1, FftDirection::Forward);
    const double invM = 1.0 / static_cast<double>(M);
    for (auto& g : ghat) g *= invM;

    std::vector<cplx> buf(n * M, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < n; ++j) buf[r * M + j] = a[r * n + j] * chirp[j];
    fft_rows(buf.data(), M, n, FftDirection::Forward);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < M; ++i) buf[r * M + i] *= ghat[i];
    fft_rows(buf.data(), M, n, FftDirection::Backward);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < n; ++i) a[r * n + i] = buf[r * M + i] * chirp[i];
}

void transpose(std::vector<cplx>& a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) std::swap(a[i * n + j], a[j * n + i]);
}

// Full 2D scaled transform of the separable kernel exp(-i theta (i-c)(j-c))
// applied along both axes.
void scaled_dft_2d(std::vector<cplx>& a, std::size_t n, double theta) {
    scaled_dft_axis(a, n, theta);
    transpose(a, n);
    scaled_dft_axis(a, n, theta);
    transpose(a, n);
}

void check_guards(const GridSpec& gin, const GridSpec& gout,
                  const IntervalCoefs& cf, double mass,
                  const PropagateOptions& opts, const SpreadEstimate& spread) {
    const double gamma_rel = std::fabs(cf.v) / mass;
    if (gamma_rel < opts.gamma_min)
        fail("CausticProximity", "Gamma/m below gamma_min");
    const double nyq_in = gin.nyquist();
    const double chirp_band =
        std::fabs(mass * cf.u / cf.v) * spread.radius_x + spread.radius_k;
    if (chirp_band > 0.97 * nyq_in)
        fail("AliasingRisk", "input chirp spectrum exceeds the grid bandwidth");
    // output samples are exact until the first alias image of the chirped
    // spectrum reaches the requested band
    const double out_band = mass * gout.half_extent / std::fabs(cf.v);
    if (out_band + chirp_band > 0.97 * 2.0 * nyq_in)
        fail("AliasingRisk", "requested output band exceeds the grid bandwidth");
    if (opts.policy == GuardPolicy::Strict) {
        const double out_chirp =
            std::fabs(mass * cf.vp / cf.v) * gout.half_extent;
        if (out_chirp > gout.nyquist())
            fail("AliasingRisk", "output chirp frequency exceeds Nyquist");
    }
}

WaveFunction transform_core(const WaveFunction& psi, const IntervalCoefs& cf,
                            double mass, const GridSpec& gout) {
    const GridSpec& gin = psi.grid();
    const std::size_t n = gin.n;
    require(gout.n == n, "ConfigError", "output grid must match the input size");

    // chirped input: exp(i m u |y|^2 / (2 v)) psi(y), separable per axis
    std::vector<cplx> work(psi.data());
    std::vector<cplx> cin(n);
    const double cu = 0.5 * mass * cf.u / cf.v;
    for (std::size_t j = 0; j < n; ++j) {
        const double y = gin.coord(j);
        cin[j] = std::exp(kI * (cu * y * y));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) work[i * n + j] *= cin[i] * cin[j];

    const double theta = mass * gin.dx() * gout.dx() / cf.v;
    scaled_dft_2d(work, n, theta);

    const cplx pref = mass / (2.0 * std::numbers::pi * kI * cf.v) *
                      (gin.dx() * gin.dx());
    WaveFunction out(gout);
    for (std::size_t i = 0; i < n * n; ++i) out.data()[i] = pref * work[i];
    return out;
}

void apply_output_chirp(WaveFunction& out, const IntervalCoefs& cf, double mass) {
    const GridSpec& g = out.grid();
    const std::size_t n = g.n;
    std::vector<cplx> cout_(n);
    const double cv = 0.5 * mass * cf.vp / cf.v;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.coord(i);
        cout_[i] = std::exp(kI * (cv * x * x));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) *= cout_[i] * cout_[j];
}

}  // namespace

WaveFunction mehler_propagate(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s, const WaveFunction& psi,
                              const PropagateOptions& opts) {
    require(tau >= 0.0 && s >= 0.0, "ConfigError", "times must be >= 0");
    if (tau == s) return psi;
    const IntervalCoefs cf = interval_matrix(pair, mono, tau, s);
    const double mass = pair.field().mass();
    SpreadEstimate spread;
    if (opts.radius_x && opts.radius_k) {
        spread = {*opts.radius_x, *opts.radius_k};
    } else {
        spread = estimate_spread(psi);
    }
    const GridSpec gout = opts.out_grid.value_or(psi.grid());
    check_guards(psi.grid(), gout, cf, mass, opts, spread);
    WaveFunction out = transform_core(psi, cf, mass, gout);
    apply_output_chirp(out, cf, mass);
    return out;
}

WaveFunction mehler_chirpless(const FundamentalPair& pair, const Monodromy& mono,
                              double tau, double s, const WaveFunction& psi,
                              const PropagateOptions& opts, IntervalCoefs& coefs) {
    coefs = interval_matrix(pair, mono, tau, s);
    const double mass = pair.field().mass();
    SpreadEstimate spread;
    if (opts.radius_x && opts.radius_k) {
        spread = {*opts.radius_x, *opts.radius_k};
    } else {
        spread = estimate_spread(psi);
    }
    const GridSpec gout = opts.out_grid.value_or(psi.grid());
    check_guards(psi.grid(), gout, coefs, mass, opts, spread);
    return transform_core(psi, coefs, mass, gout);
}

WaveFunction mehler_chirpless_inverse(const WaveFunction& inc,
                                      const IntervalCoefs& coefs, double mass,
                                      const GridSpec& out_grid) {
    // inverse interval matrix: [[v', -v], [-u', u]]; the opening chirp of the
    // inverse transform is exp(-i m v' |x|^2/(2v)), exactly the conjugate of
    // the forward closing chirp, so feeding the chirpless field skips both.
    IntervalCoefs inv{coefs.vp, -coefs.v, -coefs.up, coefs.u};
    const GridSpec& gin = inc.grid();
    const std::size_t n = gin.n;
    require(out_grid.n == n, "ConfigError", "output grid must match input size");
    std::vector<cplx> work(inc.data());
    const double theta = mass * gin.dx() * out_grid.dx() / inv.v;
    scaled_dft_2d(work, n, theta);
    const cplx pref = mass / (2.0 * std::numbers::pi * kI * inv.v) *
                      (gin.dx() * gin.dx());
    WaveFunction out(out_grid);
    for (std::size_t i = 0; i < n * n; ++i) out.data()[i] = pref * work[i];
    apply_output_chirp(out, inv, mass);
    return out;
}

WaveFunction strang_oracle(const FieldSpec& field, const PotentialSpec* pot,
                           double t0, double t1, std::size_t steps,
                           const WaveFunction& psi) {
    require(steps >= 256, "StepTooCoarse", "dt must satisfy dt <= (t1-t0)/256");
    if (t0 == t1) return psi;
    const double total = t1 - t0;
    const double direction = total > 0.0 ? 1.0 : -1.0;

    // split [t0, t1] at the periodic images of the field breakpoints so no
    // step straddles a discontinuity of B
    std::vector<double> cuts;
    const double T = field.period();
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    auto bps = field.breakpoints();
    bps.push_back(0.0);
    for (double b : bps) {
        double t = b + T * std::floor((lo - b) / T);
        for (; t < hi; t += T)
            if (t > lo && t < hi) cuts.push_back(t);
    }
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
               cuts.end());
    if (direction < 0.0) std::reverse(cuts.begin(), cuts.end());

    const GridSpec& g = psi.grid();
    const std::size_t n = g.n;
    const double mass = field.mass();
    const double q = field.charge();

    // potential factor is time-independent; build it once per call
    std::vector<cplx> expV;
    WaveFunction cur = psi;
    const double dk = 2.0 * std::numbers::pi / (g.dx() * static_cast<double>(n));
    std::vector<double> k2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = dk * static_cast<double>(i < n / 2
                                                      ? i
                                                      : static_cast<std::ptrdiff_t>(i) -
                                                            static_cast<std::ptrdiff_t>(n));
        k2[i] = k * k;
    }

    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double sa = cuts[seg], sb = cuts[seg + 1];
        const double seg_len = sb - sa;
        const std::size_t ns = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(static_cast<double>(steps) *
                                std::fabs(seg_len / total))));
        const double dt = seg_len / static_cast<double>(ns);

        std::vector<cplx> kin(n);
        for (std::size_t i = 0; i < n; ++i)
            kin[i] = std::exp(-kI * (0.25 * dt * k2[i] / mass));
        if (pot) {
            expV.assign(n * n, cplx(1.0, 0.0));
            for (std::size_t i = 0; i < n; ++i) {
                const double x = g.coord(i);
                for (std::size_t j = 0; j < n; ++j) {
                    const double y = g.coord(j);
                    expV[i * n + j] =
                        std::exp(-kI * (dt * pot->value(x * x + y * y)));
                }
            }
        }
        for (std::size_t k = 0; k < ns; ++k) {
            const double tm = sa + (static_cast<double>(k) + 0.5) * dt;
            const double B = field.evaluate(tm);
            const double cb = dt * q * q * B * B / (8.0 * mass);
            std::vector<cplx> chb(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = g.coord(i);
                chb[i] = std::exp(-kI * (cb * x * x));
            }
            auto& d = cur.data();
            fft2(d, n, FftDirection::Forward);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) d[i * n + j] *= kin[i] * kin[j];
            fft2(d, n, FftDirection::Backward);
            if (pot) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        d[i * n + j] *= chb[i] * chb[j] * expV[i * n + j];
            } else {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        d[i * n + j] *= chb[i] * chb[j];
            }
            fft2(d, n, FftDirection::Forward);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) d[i * n + j] *= kin[i] * kin[j];
            fft2(d, n, FftDirection::Backward);
        }
    }
    return cur;
}

double dispersive_ratio(const FundamentalPair& pair, const Monodromy& mono,
                        double tau, double s, const WaveFunction& psi,
                        const PropagateOptions& opts) {
    const double G = gamma(pair, mono, tau, s);
    require(G > 0.0, "CausticProximity", "Gamma must be positive");
    const double l1 = psi.l1_norm();
    require(l1 > 0.0, "ConfigError", "psi must be nonzero");
    PropagateOptions local = opts;
    local.policy = GuardPolicy::NormOnly;
    if (!local.out_grid) {
        // the sup norm lives inside the classically spread window
        const IntervalCoefs cf = interval_matrix(pair, mono, tau, s);
        SpreadEstimate sp;
        if (local.radius_x && local.radius_k) {
            sp = {*local.radius_x, *local.radius_k};
        } else {
            sp = estimate_spread(psi);
        }
        local.out_grid =
            auto_output_grid(psi.grid(), cf, pair.field().mass(), sp);
    }
    const WaveFunction out = mehler_propagate(pair, mono, tau, s, psi, local);
    return out.sup_norm() * G / l1;
}

double weighted_norm_ratio(const FundamentalPair& pair, const Monodromy& mono,
                           double tau, double s, const WaveFunction& psi,
                           const PotentialSpec& pot, double p_tilde,
                           PropagateOptions opts) {
    require(p_tilde >= 2.0, "ConfigError", "p~ must be >= 2");
    const LpNorm lp = pot.lp_norm(p_tilde);
    if (!lp.finite) fail("DivergentWeight", "rho_j is not in L^p for this p");
    const double l2 = psi.l2_norm();
    if (l2 == 0.0) return 0.0;
    WaveFunction weighted(psi.grid());
    const GridSpec& g = psi.grid();
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double y = g.coord(j);
            weighted.at(i, j) = psi.at(i, j) * pot.rho2(x * x + y * y);
        }
    }
    const double G = gamma(pair, mono, tau, s);
    require(G > 0.0, "CausticProximity", "Gamma must be positive");
    opts.policy = GuardPolicy::NormOnly;
    if (!opts.out_grid) {
        const IntervalCoefs cf = interval_matrix(pair, mono, tau, s);
        opts.out_grid = auto_output_grid(psi.grid(), cf, pair.field().mass(),
                                         estimate_spread(weighted));
    }
    const WaveFunction out = mehler_propagate(pair, mono, tau, s, weighted, opts);
    const double num = out.weighted_l2(pot);
    return num * std::pow(G, 2.0 / p_tilde) / (lp.value * lp.value * l2);
}

}  // namespace floqmag
