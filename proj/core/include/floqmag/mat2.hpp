#pragma once

#include <cmath>

namespace floqmag {

// Minimal 2x2 real matrix for monodromy algebra.
struct Mat2 {
    double a = 1.0, b = 0.0;  // [a b]
    double c = 0.0, d = 1.0;  // [c d]

    static Mat2 identity() { return {}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }

    // exact inverse for det = 1 (adjugate)
    Mat2 unimodular_inverse() const { return {d, -b, -c, a}; }

    Mat2 transpose() const { return {a, c, b, d}; }

    // integer power by repeated squaring; negative n uses the adjugate inverse
    Mat2 pow(long n) const {
        Mat2 base = *this;
        if (n < 0) {
            base = unimodular_inverse();
            n = -n;
        }
        Mat2 acc = identity();
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    double max_abs() const {
        return std::max(std::max(std::fabs(a), std::fabs(b)),
                        std::max(std::fabs(c), std::fabs(d)));
    }
};

}  // namespace floqmag
