#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace floqmag {

// Gauss-Kronrod 7/15 panel. Returns the K15 value and an error estimate.
template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
    static const double nodes[8] = {
        0.000000000000000, 0.405845151377397, 0.741531185599394,
        0.949107912342759, 0.207784955007898, 0.586087235467691,
        0.864864423359769, 0.991455371120813};
    static const double wg[4] = {0.417959183673469, 0.381830050505119,
                                 0.279705391489277, 0.129484966168870};
    static const double wk[8] = {0.209482141084728, 0.190350578064785,
                                 0.140653259715525, 0.063092092629979,
                                 0.204432940075298, 0.169004726639267,
                                 0.104790010322250, 0.022935322010529};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double g7 = wg[0] * f0;
    double k15 = wk[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * nodes[i];
        const double fi = f(c + dx) + f(c - dx);
        k15 += wk[i] * fi;
        if (i < 4) g7 += wg[i] * fi;
    }
    g7 *= h;
    k15 *= h;
    double err = std::pow(200.0 * std::fabs(g7 - k15), 1.5);
    return {k15, err};
}

// Adaptive bisection driver. Splits the worst panel until the summed error
// estimate meets rel_tol (against the running integral) or abs_tol.
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 1e-14,
                          int max_depth = 48) {
    struct Panel {
        double a, b, val, err;
        int depth;
    };
    // explicit stack; worst-first refinement is not needed, plain DFS suffices
    constexpr std::size_t kMax = 4096;
    Panel stack[64];
    int top = 0;
    auto [v0, e0] = gk15(f, a, b);
    stack[top++] = {a, b, v0, e0, 0};
    double total = 0.0, total_err = 0.0;
    std::size_t panels = 0;
    while (top > 0) {
        Panel p = stack[--top];
        if (++panels > kMax) {  // give up refining, accept what we have
            total += p.val;
            total_err += p.err;
            continue;
        }
        const double scale = std::fabs(total) + std::fabs(p.val);
        if (p.err <= abs_tol || p.err <= rel_tol * scale || p.depth >= max_depth ||
            top >= 62) {
            total += p.val;
            total_err += p.err;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        auto [vl, el] = gk15(f, p.a, mid);
        auto [vr, er] = gk15(f, mid, p.b);
        stack[top++] = {p.a, mid, vl, el, p.depth + 1};
        stack[top++] = {mid, p.b, vr, er, p.depth + 1};
    }
    (void)total_err;
    return total;
}

}  // namespace floqmag
