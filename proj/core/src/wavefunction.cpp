#include "floqmag/wavefunction.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "floqmag/fft.hpp"

namespace floqmag {

double GridSpec::nyquist() const { return std::numbers::pi / dx(); }

WaveFunction WaveFunction::gaussian(const GridSpec& g, double width) {
    require(width > 0.0, "ConfigError", "gaussian width must be > 0");
    WaveFunction wf(g);
    const double norm = 1.0 / (width * std::sqrt(std::numbers::pi));
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.coord(i);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double y = g.coord(j);
            wf.at(i, j) = norm * std::exp(-(x * x + y * y) * inv2w2);
        }
    }
    return wf;
}

double WaveFunction::l2_norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s) * grid_.dx();
}

double WaveFunction::l1_norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::abs(a);
    return s * grid_.dx() * grid_.dx();
}

double WaveFunction::sup_norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s = std::max(s, std::norm(a));
    return std::sqrt(s);
}

double WaveFunction::second_moment() const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
        const double x = grid_.coord(i);
        for (std::size_t j = 0; j < grid_.n; ++j) {
            const double y = grid_.coord(j);
            const double w = std::norm(at(i, j));
            num += (x * x + y * y) * w;
            den += w;
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double WaveFunction::momentum_second_moment() const {
    std::vector<cplx> hat(amp_);
    fft2(hat, grid_.n, FftDirection::Forward);
    const double dk = 2.0 * std::numbers::pi / (grid_.dx() * static_cast<double>(grid_.n));
    double num = 0.0, den = 0.0;
    const std::size_t n = grid_.n;
    auto wavenumber = [&](std::size_t i) {
        const auto s = static_cast<std::ptrdiff_t>(i);
        return dk * static_cast<double>(i < n / 2 ? s : s - static_cast<std::ptrdiff_t>(n));
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double ki = wavenumber(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double kj = wavenumber(j);
            const double w = std::norm(hat[i * n + j]);
            num += (ki * ki + kj * kj) * w;
            den += w;
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double WaveFunction::outer_frame_mass() const {
    const double edge = 0.9 * grid_.half_extent;
    double outer = 0.0, total = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
        const double x = grid_.coord(i);
        for (std::size_t j = 0; j < grid_.n; ++j) {
            const double y = grid_.coord(j);
            const double w = std::norm(at(i, j));
            total += w;
            if (std::fabs(x) > edge || std::fabs(y) > edge) outer += w;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

double WaveFunction::weighted_l2(const PotentialSpec& pot, double rc_cells) const {
    const double rc = rc_cells * grid_.dx();
    const double rc2 = rc * rc;
    double outer = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
        const double x = grid_.coord(i);
        for (std::size_t j = 0; j < grid_.n; ++j) {
            const double y = grid_.coord(j);
            const double r2 = x * x + y * y;
            if (r2 <= rc2) continue;
            outer += std::fabs(pot.value(r2)) * std::norm(at(i, j));
        }
    }
    outer *= grid_.dx() * grid_.dx();
    const double inner =
        std::norm(at(grid_.n / 2, grid_.n / 2)) * pot.disc_integral(rc);
    return std::sqrt(outer + inner);
}

WaveFunction& WaveFunction::scale(cplx c) {
    for (auto& a : amp_) a *= c;
    return *this;
}

void WaveFunction::write_binary(std::ostream& os) const {
    const std::uint32_t n = static_cast<std::uint32_t>(grid_.n);
    const std::uint32_t reserved = 0;
    const double L = grid_.half_extent;
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&reserved), 4);
    os.write(reinterpret_cast<const char*>(&L), 8);
    for (const auto& a : amp_) {
        const double re = a.real(), im = a.imag();
        os.write(reinterpret_cast<const char*>(&re), 8);
        os.write(reinterpret_cast<const char*>(&im), 8);
    }
}

WaveFunction WaveFunction::read_binary(std::istream& is) {
    std::uint32_t n = 0, reserved = 0;
    double L = 0.0;
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&reserved), 4);
    is.read(reinterpret_cast<char*>(&L), 8);
    require(is.good(), "ConfigError", "truncated wavefunction header");
    WaveFunction wf(GridSpec(n, L));
    for (auto& a : wf.amp_) {
        double re = 0.0, im = 0.0;
        is.read(reinterpret_cast<char*>(&re), 8);
        is.read(reinterpret_cast<char*>(&im), 8);
        a = cplx(re, im);
    }
    require(is.good(), "ConfigError", "truncated wavefunction payload");
    return wf;
}

void WaveFunction::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), "ConfigError", "cannot open " + path + " for writing");
    write_binary(os);
}

WaveFunction WaveFunction::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "ConfigError", "cannot open " + path);
    return read_binary(is);
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    require(a.grid() == b.grid(), "ConfigError",
            "l2 distance needs matching grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        s += std::norm(a.data()[i] - b.data()[i]);
    return std::sqrt(s) * a.grid().dx();
}

}  // namespace floqmag
