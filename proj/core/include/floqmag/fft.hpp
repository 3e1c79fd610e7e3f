#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace floqmag {

enum class FftDirection { Forward, Backward };

// In-place 2D complex FFT on an n x n row-major array. Backward applies the
// 1/n^2 normalization. Plans are FFTW_ESTIMATE so repeated runs are
// bit-reproducible.
void fft2(std::vector<std::complex<double>>& data, std::size_t n,
          FftDirection dir);

// Batched in-place 1D FFTs: `rows` contiguous transforms of length `len`
// (row-major, stride 1, distance len). No normalization in either direction.
void fft_rows(std::complex<double>* data, std::size_t len, std::size_t rows,
              FftDirection dir);

}  // namespace floqmag
