#include "floqmag/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace floqmag {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex plan_mutex;

struct PlanKey {
    std::size_t n0, n1, rows;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (n0 != o.n0) return n0 < o.n0;
        if (n1 != o.n1) return n1 < o.n1;
        if (rows != o.rows) return rows < o.rows;
        return sign < o.sign;
    }
};

fftw_plan get_plan_2d(std::size_t n, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    const PlanKey key{n, n, 0, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(n * n);
    fftw_plan p = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf,
                                   buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    cache[key] = p;
    return p;
}

fftw_plan get_plan_rows(std::size_t len, std::size_t rows, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    const PlanKey key{len, 1, rows, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(len * rows);
    int n = static_cast<int>(len);
    fftw_plan p = fftw_plan_many_dft(1, &n, static_cast<int>(rows), buf, nullptr,
                                     1, n, buf, nullptr, 1, n, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    cache[key] = p;
    return p;
}

}  // namespace

void fft2(std::vector<std::complex<double>>& data, std::size_t n,
          FftDirection dir) {
    const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = get_plan_2d(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
    if (dir == FftDirection::Backward) {
        const double inv = 1.0 / static_cast<double>(n * n);
        for (auto& c : data) c *= inv;
    }
}

void fft_rows(std::complex<double>* data, std::size_t len, std::size_t rows,
              FftDirection dir) {
    const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan p = get_plan_rows(len, rows, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace floqmag
