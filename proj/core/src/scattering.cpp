#include "floqmag/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "floqmag/quadrature.hpp"

namespace floqmag {

FloquetVector FloquetVector::uniform(const WaveFunction& slice, std::size_t M,
                                     double T) {
    require(M >= 1, "ConfigError", "need at least one slice");
    FloquetVector fv;
    fv.period = T;
    fv.slices.assign(M, slice);
    return fv;
}

double FloquetVector::k_norm() const {
    double s = 0.0;
    for (const auto& sl : slices) {
        const double n = sl.l2_norm();
        s += n * n;
    }
    return std::sqrt(s * period / static_cast<double>(slices.size()));
}

namespace {

struct Transported {
    double a3 = 0.0, a4 = 1.0;  // zeta2(t + NT) = a3 zeta1(t) + a4 zeta2(t)
};

Transported transported_zeta2(const Monodromy& mono, long N) {
    const auto ec = extension_coefficients(mono, N);
    return {ec.a3(), ec.a4()};
}

double eval_g(const FundamentalPair& pair, const Transported& tr, double t) {
    double z1, dz1, z2, dz2;
    pair.eval_in_period(t, z1, dz1, z2, dz2);
    return tr.a3 * z1 + tr.a4 * z2;
}

double eval_dg(const FundamentalPair& pair, const Transported& tr, double t) {
    double z1, dz1, z2, dz2;
    pair.eval_in_period(t, z1, dz1, z2, dz2);
    return tr.a3 * dz1 + tr.a4 * dz2;
}

}  // namespace

double zeta2_singular_integral(const FundamentalPair& pair, const Monodromy& mono,
                               long N, double p, double window) {
    require(p > 4.0, "ConfigError", "integrability needs p > 4");
    require(N >= 0, "ConfigError", "N must be >= 0");
    const auto sc = classify(mono);
    if (N >= 1) {
        require(sc.regime == Regime::Hyperbolic, "NotHyperbolic",
                "period transport requires the hyperbolic regime");
        require(sc.zeta2_T_nonzero, "DegenerateZero", "zeta2(T) vanishes");
    }
    const double T = pair.field().period();
    const double alpha = 4.0 / p;  // < 1, integrable
    const Transported tr = transported_zeta2(mono, N);

    // locate zeros of g on [0, T): endpoint zeros get half windows
    std::vector<double> zeros;
    const double scale = std::fabs(tr.a3) + std::fabs(tr.a4);
    if (std::fabs(eval_g(pair, tr, 0.0)) < 1e-13 * scale) zeros.push_back(0.0);
    const std::size_t ns = pair.samples() - 1;
    for (std::size_t k = 0; k < ns; ++k) {
        const double ta = pair.step() * static_cast<double>(k);
        const double tb = ta + pair.step();
        double ga = eval_g(pair, tr, ta), gb = eval_g(pair, tr, tb);
        if (k == 0 && !zeros.empty()) continue;  // endpoint already recorded
        if (ga == 0.0) {
            if (ta > 0.0) zeros.push_back(ta);
            continue;
        }
        if (ga * gb < 0.0) {
            double lo = ta, hi = tb, flo = ga;
            for (int it = 0; it < 90 && hi - lo > 1e-15 * T; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = eval_g(pair, tr, mid);
                if ((flo <= 0.0) == (fm <= 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            const double z = 0.5 * (lo + hi);
            if (z < T * (1.0 - 1e-13)) zeros.push_back(z);
        }
    }
    std::sort(zeros.begin(), zeros.end());

    // choose the window half-width: the default must stay clear of both the
    // period ends and neighbouring zeros
    double w = window * T;
    for (std::size_t i = 1; i < zeros.size(); ++i)
        w = std::min(w, 0.05 * (zeros[i] - zeros[i - 1]));
    if (!zeros.empty()) {
        w = std::min(w, 0.05 * std::max(T - zeros.back(), 1e-6 * T));
        if (zeros.front() > 0.0) w = std::min(w, 0.05 * zeros.front());
    }
    w = std::max(w, 1e-10 * T);

    double total = 0.0;
    std::vector<std::pair<double, double>> smooth;  // zero-free subintervals
    double cursor = 0.0;
    for (double z : zeros) {
        const double dg = eval_dg(pair, tr, z);
        if (std::fabs(dg) < 1e-8 * std::max(1.0, scale))
            fail("DegenerateZero", "zero of zeta2 with vanishing slope");
        const double lo = std::max(0.0, z - w), hi = std::min(T, z + w);
        if (lo > cursor) smooth.emplace_back(cursor, lo);
        // analytic window: integral of |g'(z)(t - z)|^(-alpha)
        const double full = std::pow(w, 1.0 - alpha) /
                            ((1.0 - alpha) * std::pow(std::fabs(dg), alpha));
        total += (z - lo < w * 0.5 || hi - z < w * 0.5) ? full : 2.0 * full;
        cursor = hi;
    }
    if (cursor < T) smooth.emplace_back(cursor, T);

    for (const auto& [a, b] : smooth) {
        total += integrate_adaptive(
            [&](double t) {
                return std::pow(std::fabs(eval_g(pair, tr, t)), -alpha);
            },
            a, b, 1e-10, 1e-14);
    }
    return total;
}

DecayReport decay_fit(const FundamentalPair& pair, const Monodromy& mono,
                      double p, long N_lo, long N_hi) {
    require(N_hi - N_lo + 1 >= 6, "InsufficientData",
            "decay fit needs at least 6 values of N");
    const auto sc = classify(mono);
    require(sc.regime == Regime::Hyperbolic, "NotHyperbolic",
            "decay rate is defined in the hyperbolic regime");
    DecayReport rep;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (long N = N_lo; N <= N_hi; ++N) {
        const double I = zeta2_singular_integral(pair, mono, N, p);
        rep.N_values.push_back(N);
        rep.I_values.push_back(I);
        const double x = static_cast<double>(N), y = std::log(I);
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
    }
    const double n = static_cast<double>(rep.N_values.size());
    rep.fitted_rate = -(n * sty - st * sy) / (n * stt - st * st);
    rep.predicted_rate = 4.0 * sc.floquet_exponent / p;
    rep.rel_deviation =
        std::fabs(rep.fitted_rate - rep.predicted_rate) / rep.predicted_rate;
    return rep;
}

ResolventSums resolvent_series_partial_sums(const FundamentalPair& pair,
                                            const Monodromy& mono, double p,
                                            long N_max) {
    require(N_max >= 0, "ConfigError", "N_max must be >= 0");
    ResolventSums rs;
    double acc = 0.0;
    for (long N = 0; N <= N_max; ++N) {
        const double I = zeta2_singular_integral(pair, mono, N, p);
        rs.I_values.push_back(I);
        acc += std::sqrt(I);
        rs.partial_sums.push_back(acc);
    }
    return rs;
}

namespace {

WaveFunction apply_rho2(const WaveFunction& psi, const PotentialSpec& pot) {
    WaveFunction out = psi;
    const GridSpec& g = psi.grid();
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double y = g.coord(j);
            out.at(i, j) *= pot.rho2(x * x + y * y);
        }
    }
    return out;
}

// || rho1 U0~(tau, s) phi ||_2 on a spread-adapted output window
double weighted_propagated_norm(const FundamentalPair& pair,
                                const Monodromy& mono, const PotentialSpec& pot,
                                const WaveFunction& phi,
                                const SpreadEstimate& spread, double tau,
                                double s, double gamma_min) {
    PropagateOptions opts;
    opts.policy = GuardPolicy::NormOnly;
    opts.gamma_min = gamma_min;
    opts.radius_x = spread.radius_x;
    opts.radius_k = spread.radius_k;
    const IntervalCoefs cf = interval_matrix(pair, mono, tau, s);
    opts.out_grid =
        auto_output_grid(phi.grid(), cf, pair.field().mass(), spread);
    const WaveFunction out = mehler_propagate(pair, mono, tau, s, phi, opts);
    return out.weighted_l2(pot);
}

}  // namespace

FloquetNormTable floquet_free_norm(const FundamentalPair& pair,
                                   const Monodromy& mono, long N,
                                   const PotentialSpec& pot,
                                   const FloquetVector& phi, double p,
                                   double gamma_min) {
    require(p > 4.0, "ConfigError", "needs p > 4");
    const auto sc = classify(mono);
    require(sc.regime == Regime::Hyperbolic, "NotHyperbolic",
            "the decay table is defined in the hyperbolic regime");
    const LpNorm lp = pot.lp_norm(p);
    if (!lp.finite) fail("DivergentWeight", "rho_j is not in L^p");
    const double T = phi.period;
    const double mass = pair.field().mass();
    const std::size_t M = phi.slices.size();
    FloquetNormTable table;
    for (std::size_t i = 0; i < M; ++i) {
        const double t = phi.slice_time(i) + static_cast<double>(N) * T;
        FloquetNormRow row;
        row.t = phi.slice_time(i);
        row.N = N;
        for (std::size_t j = 0; j < M; ++j) {
            const double s = phi.slice_time(j);
            const double G = gamma(pair, mono, t, s);
            if (G / mass < gamma_min) {
                table.excluded.push_back({t, s, G});
                continue;
            }
            const WaveFunction weighted = apply_rho2(phi.slices[j], pot);
            const SpreadEstimate spread = estimate_spread(weighted);
            const double val = weighted_propagated_norm(pair, mono, pot, weighted,
                                                        spread, t, s, gamma_min);
            const double w = T / static_cast<double>(M);
            row.value += w * val;
            row.bound += w * std::pow(G, -2.0 / p) * lp.value * lp.value *
                         phi.slices[j].l2_norm();
        }
        table.rows.push_back(row);
    }
    return table;
}

SigmaRResult sigma_R_quadrature(const FundamentalPair& pair, const Monodromy& mono,
                                const PotentialSpec& pot, const WaveFunction& phi,
                                double lambda_spec, double tau_im, double R,
                                double dsigma, double p, double gamma_min) {
    (void)lambda_spec;  // unimodular phase; norms do not see it
    const double T = pair.field().period();
    require(dsigma <= T / 8.0 && dsigma > 0.0, "ConfigError",
            "dsigma must be positive and <= T/8");
    const auto sc = classify(mono);
    require(sc.regime == Regime::Hyperbolic, "NotHyperbolic",
            "the convergence condition needs the hyperbolic regime");
    if (std::fabs(tau_im) * T >= 2.0 * sc.floquet_exponent / p)
        fail("EpsilonTooLarge",
             "|tau_im| T must be < 2 lambda / p for convergence");

    const WaveFunction weighted = apply_rho2(phi, pot);
    const SpreadEstimate spread = estimate_spread(weighted);
    SigmaRResult res;
    double acc = 0.0;
    for (double s = 0.5 * dsigma; s < R; s += dsigma) {
        const double G = gamma(pair, mono, s, 0.0);
        if (G / pair.field().mass() < gamma_min) {
            res.excluded.push_back({s, 0.0, G});
        } else {
            const double nrm = weighted_propagated_norm(pair, mono, pot, weighted,
                                                        spread, s, 0.0, gamma_min);
            acc += s * std::exp(tau_im * s) * nrm * dsigma;
        }
        res.R_values.push_back(s + 0.5 * dsigma);
        res.running.push_back(acc);
    }
    return res;
}

CookSums cook_integrand_partial_sums(const FundamentalPair& pair,
                                     const Monodromy& mono,
                                     const PotentialSpec& pot,
                                     const WaveFunction& psi0, long N_max,
                                     double p, std::size_t slices,
                                     double gamma_min) {
    require(N_max >= 1, "ConfigError", "N_max must be >= 1");
    require(p > 4.0, "ConfigError", "needs p > 4");
    const auto sc = classify(mono);
    require(sc.regime == Regime::Hyperbolic, "NotHyperbolic",
            "Cook summability is verified in the hyperbolic regime");
    const double T = pair.field().period();
    const SpreadEstimate spread = estimate_spread(psi0);
    CookSums cs;
    double acc = 0.0;
    for (long N = 1; N <= N_max; ++N) {
        double term = 0.0;
        for (std::size_t j = 0; j < slices; ++j) {
            const double t = (static_cast<double>(j) + 0.5) * T /
                                 static_cast<double>(slices) +
                             static_cast<double>(N) * T;
            const double G = gamma(pair, mono, t, 0.0);
            if (G / pair.field().mass() < gamma_min) {
                cs.excluded.push_back({t, 0.0, G});
                continue;
            }
            const double nrm = weighted_propagated_norm(pair, mono, pot, psi0,
                                                        spread, t, 0.0, gamma_min);
            term += nrm * T / static_cast<double>(slices);
        }
        cs.terms.push_back(term);
        acc += term;
        cs.partial_sums.push_back(acc);
    }
    return cs;
}

namespace {

WaveFunction direct_wave_operator_state(const FundamentalPair& pair,
                                        const Monodromy& mono,
                                        const PotentialSpec* pot,
                                        const WaveFunction& psi0, long N,
                                        const WaveopOptions& opts) {
    if (N == 0) return psi0;
    const double T = pair.field().period();
    PropagateOptions popts;
    popts.gamma_min = opts.gamma_min;
    const WaveFunction big = mehler_propagate(
        pair, mono, static_cast<double>(N) * T, 0.0, psi0, popts);
    if (big.outer_frame_mass() > opts.escape_threshold)
        fail("GridEscape",
             "more than the allowed l2 mass reached the outer grid frame");
    return strang_oracle(pair.field(), pot, static_cast<double>(N) * T, 0.0,
                         opts.strang_steps_per_period * static_cast<std::size_t>(N),
                         big);
}

// One conjugated kick chi <- U0~(t,0)^* exp(+i dt V) U0~(t,0) chi in increment
// form. The forward output chirp cancels against the inverse input chirp, so
// only chirpless fields ever live on the resampled windows.
WaveFunction interaction_kick(const FundamentalPair& pair, const Monodromy& mono,
                              const PotentialSpec& pot, double tbar, double dt,
                              const WaveFunction& chi, const SpreadEstimate& sp,
                              double spread_x, double spread_k) {
    const double mass = pair.field().mass();
    const GridSpec& g = chi.grid();
    const IntervalCoefs cf = interval_matrix(pair, mono, tbar, 0.0);
    const double nyq = g.nyquist();
    const double k_spec =
        std::fabs(mass * cf.u / cf.v) * sp.radius_x + sp.radius_k;
    const double W = 1.4 * std::hypot(cf.u * spread_x, cf.v * spread_k / mass);
    const double budget =
        std::fabs(cf.v) / mass * (0.95 * nyq - k_spec);

    if (!(k_spec < 0.9 * nyq) || budget < 2.3 * W || std::fabs(cf.v) < 1e-12) {
        // multiplication limit: V(u x + v p / m) -> V(u x) as v/u -> 0
        WaveFunction out = chi;
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.coord(i);
            for (std::size_t j = 0; j < g.n; ++j) {
                const double y = g.coord(j);
                const double arg = cf.u * cf.u * (x * x + y * y);
                out.at(i, j) *= std::exp(cplx(0.0, dt * pot.value(arg)));
            }
        }
        return out;
    }

    PropagateOptions popts;
    popts.policy = GuardPolicy::NormOnly;
    popts.radius_x = sp.radius_x;
    popts.radius_k = sp.radius_k;
    const double L_near = std::min(g.half_extent, budget);
    const double L_far = std::min(std::max(g.half_extent, 3.0 * W), budget);
    const double r0 = std::min(10.0, 0.45 * L_near);

    WaveFunction out = chi;
    for (int pass = 0; pass < 2; ++pass) {
        const GridSpec gw(g.n, pass == 0 ? L_near : L_far);
        popts.out_grid = gw;
        IntervalCoefs coefs;
        WaveFunction G = mehler_chirpless(pair, mono, tbar, 0.0, chi, popts, coefs);
        for (std::size_t i = 0; i < gw.n; ++i) {
            const double x = gw.coord(i);
            for (std::size_t j = 0; j < gw.n; ++j) {
                const double y = gw.coord(j);
                const double r2 = x * x + y * y;
                const double cut = std::exp(-std::pow(std::sqrt(r2) / r0, 8.0));
                const double Vpart =
                    pot.value(r2) * (pass == 0 ? cut : 1.0 - cut);
                G.at(i, j) *= std::exp(cplx(0.0, dt * Vpart)) - 1.0;
            }
        }
        const WaveFunction inc = mehler_chirpless_inverse(G, coefs, mass, g);
        for (std::size_t i = 0; i < g.n * g.n; ++i) out.data()[i] += inc.data()[i];
    }
    return out;
}

}  // namespace

WaveopDefect wave_operator_defect(const FundamentalPair& pair,
                                  const Monodromy& mono, const PotentialSpec* pot,
                                  const WaveFunction& psi0, long N1, long N2,
                                  const WaveopOptions& opts) {
    require(0 <= N1 && N1 < N2 && N2 <= 6, "ConfigError",
            "need 0 <= N1 < N2 <= 6 periods");
    WaveopDefect d;
    d.N1 = N1;
    d.N2 = N2;
    if (opts.scheme == WaveopScheme::Direct) {
        const WaveFunction w1 =
            direct_wave_operator_state(pair, mono, pot, psi0, N1, opts);
        const WaveFunction w2 =
            direct_wave_operator_state(pair, mono, pot, psi0, N2, opts);
        d.defect = l2_distance(w1, w2);
        return d;
    }
    // Interaction picture: the defect equals || Q psi0 - psi0 || where Q is
    // the (reversed) product of conjugated kicks over (N1 T, N2 T].
    if (!pot) {
        d.defect = 0.0;
        return d;
    }
    const double T = pair.field().period();
    const double dt = T / static_cast<double>(opts.kicks_per_period);
    const long K1 = N1 * static_cast<long>(opts.kicks_per_period);
    const long K2 = N2 * static_cast<long>(opts.kicks_per_period);
    const SpreadEstimate sp0 = estimate_spread(psi0);
    SpreadEstimate sp = sp0;
    sp.radius_x *= 1.3;
    sp.radius_k *= 1.3;
    const double spread_x = psi0.second_moment();
    const double spread_k = psi0.momentum_second_moment();
    WaveFunction chi = psi0;
    for (long k = K2; k > K1; --k) {
        const double tbar = (static_cast<double>(k) - 0.5) * dt;
        chi = interaction_kick(pair, mono, *pot, tbar, dt, chi, sp, spread_x,
                               spread_k);
    }
    d.defect = l2_distance(chi, psi0);
    return d;
}

}  // namespace floqmag
