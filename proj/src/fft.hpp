#pragma once

// Thin FFTW wrappers. Planning is serialized behind a mutex because the FFTW
// planner is not re-entrant; execution of distinct plans is thread-safe.

#include <complex>
#include <vector>

namespace fraxel::detail {

using Complex = std::complex<double>;

/// In-place 2D complex DFT of a row-major height x width grid (unnormalized).
void fft2d(std::vector<Complex>& data, int width, int height, bool inverse);

/// Real inverse DFT from the non-redundant half spectrum
/// (height x (width / 2 + 1), row-major). Unnormalized.
std::vector<double> irfft2d(std::vector<Complex> half, int width, int height);

}  // namespace fraxel::detail
