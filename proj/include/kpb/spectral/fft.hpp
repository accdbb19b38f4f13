#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace kpb::spectral::fft {

using cplx = std::complex<double>;

enum class Direction { Forward, Backward };

/// In-place unnormalized 2D DFT of an x-major nx x ny array.
/// Forward uses e^{-i...}, Backward uses e^{+i...}.
///
/// Plans are created once per shape under a lock and executed through FFTW's
/// new-array interface, so concurrent calls on distinct buffers are safe.
void transform_2d(std::span<cplx> data, std::size_t nx, std::size_t ny, Direction dir);

/// In-place unnormalized DFT along the slow axis of a (length x stride) array,
/// i.e. `stride` interleaved transforms of size `length`.
void transform_strided(std::span<cplx> data, std::size_t length, std::size_t stride,
                       Direction dir);

}  // namespace kpb::spectral::fft
