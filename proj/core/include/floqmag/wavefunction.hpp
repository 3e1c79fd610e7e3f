#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "floqmag/grid.hpp"
#include "floqmag/potential.hpp"

namespace floqmag {

using cplx = std::complex<double>;

// Complex amplitudes on a square grid, row-major: value at index (i, j) sits
// at (x1, x2) = (grid.coord(i), grid.coord(j)).
class WaveFunction {
public:
    WaveFunction() = default;
    explicit WaveFunction(const GridSpec& g)
        : grid_(g), amp_(g.n * g.n, cplx(0.0, 0.0)) {}

    static WaveFunction gaussian(const GridSpec& g, double width = 1.0);

    const GridSpec& grid() const { return grid_; }
    const std::vector<cplx>& data() const { return amp_; }
    std::vector<cplx>& data() { return amp_; }
    cplx at(std::size_t i, std::size_t j) const { return amp_[i * grid_.n + j]; }
    cplx& at(std::size_t i, std::size_t j) { return amp_[i * grid_.n + j]; }

    double l2_norm() const;
    double l1_norm() const;
    double sup_norm() const;

    // (sum |x|^2 |psi|^2 dx^2 / sum |psi|^2 dx^2)^(1/2)
    double second_moment() const;

    // second moment of |psi_hat|^2 in wavenumber space (momentum spread)
    double momentum_second_moment() const;

    // fraction of the l2 mass in the outer 10% frame of the grid
    double outer_frame_mass() const;

    // || rho1 * psi ||_2 with an analytic near-origin core: the weight is
    // integrated in closed form over the disc r <= rc (where |psi| is locally
    // constant) and summed on the grid outside. Keeps weighted norms correct
    // on dilated grids whose cells are much wider than the weight's core.
    double weighted_l2(const PotentialSpec& pot, double rc_cells = 3.5) const;

    WaveFunction& scale(cplx c);

    // flat binary snapshot: 16-byte header (u32 n, u32 reserved, f64 L,
    // little-endian), then n^2 (re, im) f64 pairs row-major
    void write_binary(std::ostream& os) const;
    static WaveFunction read_binary(std::istream& is);
    void save(const std::string& path) const;
    static WaveFunction load(const std::string& path);

private:
    GridSpec grid_;
    std::vector<cplx> amp_;
};

double l2_distance(const WaveFunction& a, const WaveFunction& b);

}  // namespace floqmag
