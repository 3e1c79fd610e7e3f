#pragma once

namespace floqmag {

struct LpNorm {
    bool finite = false;
    double value = 0.0;  // meaningful only when finite
};

// Radial power-law scattering potential V(x) = v0 (1 + |x|^2)^(-rho/2) with
// the factorization V = rho1 * rho2, rho1 = |V|^(1/2), rho2 = sign(V)|V|^(1/2).
class PotentialSpec {
public:
    PotentialSpec(double v0, double rho);

    double v0() const { return v0_; }
    double rho() const { return rho_; }

    double value(double r2) const;   // V at |x|^2 = r2
    double rho1(double r2) const;    // |V|^(1/2)
    double rho2(double r2) const;    // sign(V) |V|^(1/2)

    // || rho_j ||_{L^p(R^2)} by radial quadrature. Both components share the
    // same magnitude, so the component index does not change the value.
    // finite = false signals the divergent case p*rho <= 4.
    LpNorm lp_norm(double p) const;

    // integral of |V| over the disc |x| <= rc (closed form); used as the
    // analytic core of grid-weighted norms near the origin.
    double disc_integral(double rc) const;

private:
    double v0_, rho_;
};

}  // namespace floqmag
