#pragma once

#include <cstddef>

#include "floqmag/errors.hpp"

namespace floqmag {

// Square 2D grid: n points per axis (power of two), coordinates
// x_i = -L + i * dx with dx = 2L/n. Note x = 0 lies exactly on the grid
// (index n/2) and +L is excluded.
struct GridSpec {
    std::size_t n = 512;
    double half_extent = 20.0;

    GridSpec() = default;
    GridSpec(std::size_t n_, double L) : n(n_), half_extent(L) {
        require(L > 0.0, "ConfigError", "grid half extent must be > 0");
        require(n >= 8 && (n & (n - 1)) == 0, "ConfigError",
                "grid size must be a power of two");
    }

    double dx() const { return 2.0 * half_extent / static_cast<double>(n); }
    double coord(std::size_t i) const {
        return -half_extent + dx() * static_cast<double>(i);
    }
    double nyquist() const;  // pi / dx

    bool operator==(const GridSpec& o) const {
        return n == o.n && half_extent == o.half_extent;
    }
};

}  // namespace floqmag
