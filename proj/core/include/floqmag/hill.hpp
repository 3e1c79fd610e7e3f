#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "floqmag/field.hpp"
#include "floqmag/mat2.hpp"

namespace floqmag {

// Fundamental solutions of zeta'' + a(t)^2 zeta = 0 over one period,
// zeta1(0) = 1, zeta1'(0) = 0 and zeta2(0) = 0, zeta2'(0) = 1, sampled on a
// uniform grid t_k = k h (h is adjusted so the grid lands exactly on T).
class FundamentalPair {
public:
    static FundamentalPair integrate(const FieldSpec& field, double h,
                                     double wronskian_tol = 1e-9);

    const FieldSpec& field() const { return field_; }
    double step() const { return h_; }
    std::size_t samples() const { return z1_.size(); }

    double zeta1(std::size_t k) const { return z1_[k]; }
    double zeta2(std::size_t k) const { return z2_[k]; }
    double dzeta1(std::size_t k) const { return dz1_[k]; }
    double dzeta2(std::size_t k) const { return dz2_[k]; }

    // fundamental matrix [[z1, z2], [z1', z2']] at sample k
    Mat2 matrix_at(std::size_t k) const {
        return {z1_[k], z2_[k], dz1_[k], dz2_[k]};
    }

    // max |W - 1| over samples, W = z1 z2' - z1' z2
    double wronskian_drift() const;

    // cubic Hermite interpolation inside [0, T] (derivatives from the ODE)
    void eval_in_period(double s, double& z1, double& dz1, double& z2,
                        double& dz2) const;

private:
    explicit FundamentalPair(FieldSpec field) : field_(std::move(field)) {}

    FieldSpec field_;
    double h_ = 0.0;
    std::vector<double> z1_, dz1_, z2_, dz2_;
};

struct Monodromy {
    Mat2 phi_T;   // [[z1(T), z2(T)], [z1'(T), z2'(T)]]
    Mat2 l_mat;   // [[z1(T), z2(T)/m], [m z1'(T), z2'(T)]]
    double mass = 1.0;
    double period = 0.0;
};

Monodromy monodromy(const FundamentalPair& pair);

enum class Regime { Hyperbolic, Parabolic, Elliptic };

const char* regime_name(Regime r);

struct StabilityClass {
    double discriminant = 0.0;
    Regime regime = Regime::Elliptic;
    double floquet_exponent = 0.0;  // ln(spectral radius), hyperbolic only
    double lambda_tilde = 0.0;      // ln|mu_min| = -lambda, hyperbolic only
    bool zeta2_T_nonzero = false;
};

StabilityClass classify(const Monodromy& mono, double tau_D = 1e-9);

struct ExtensionCoefficients {
    long N = 0;
    // zeta_j(t + N T) = A[j][0] zeta1(t) + A[j][1] zeta2(t); A = (Phi_T^T)^N
    Mat2 A;
    double a1() const { return A.a; }
    double a2() const { return A.b; }
    double a3() const { return A.c; }
    double a4() const { return A.d; }
};

// |N| <= 64; OverflowRisk when entries would exceed 1e12.
ExtensionCoefficients extension_coefficients(const Monodromy& mono, long N);

// zeta_j and derivative at any t >= 0 through the period extension.
std::pair<double, double> evaluate_zeta(const FundamentalPair& pair,
                                        const Monodromy& mono, int j, double t);

struct ZeroSet {
    int which = 1;                        // 1 or 2
    std::vector<double> zeros;            // sorted, in [0, T)
    std::vector<double> derivative_at_zero;
};

// All zeros of zeta_j on [0, T), refined by bisection on the Hermite
// interpolant; every zero must be simple (|zeta_j'| > 1e-8).
ZeroSet find_zeros(const FundamentalPair& pair, int j);

struct RatioReport {
    int denominator = 2;        // checks zeta1/zeta2 when 2, zeta2/zeta1 when 1
    double min_abs_slope = 0.0;
    int slope_sign = 0;         // sign of every observed finite-difference slope
    bool strictly_monotone = false;
    // max over interior points of |slope * zeta_den^2 - expected|, where the
    // Wronskian gives d/dt(zeta1/zeta2) = -1/zeta2^2 and
    // d/dt(zeta2/zeta1) = +1/zeta1^2.
    double max_identity_residual = 0.0;
};

RatioReport ratio_monotonicity_check(const FundamentalPair& pair, int denominator,
                                     double t_lo, double t_hi,
                                     std::size_t points = 100);

}  // namespace floqmag
