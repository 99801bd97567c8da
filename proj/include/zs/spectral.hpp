#pragma once

#include <span>
#include <vector>

#include "zs/grid.hpp"
#include "zs/types.hpp"

/// FFT-backed utilities: translation, band-limited refinement, and linear
/// convolution. The last grid node duplicates the first in the periodic
/// picture; fields must have decayed at both ends for these to be exact.
namespace zs {

/// Discrete Fourier transform of arbitrary length (FFTW backend).
/// sign = -1 forward, +1 inverse; the inverse is unnormalized.
std::vector<Complex> dft(std::span<const Complex> in, int sign);

/// g(x) = f(x - s) by the periodic shift theorem on the first n-1 nodes;
/// the right endpoint is closed up periodically. Exact for band-limited
/// periodized data, spectrally accurate for decayed smooth fields.
ComplexField spectral_translate(const ComplexField& f, double s);

/// Band-limited values at the n-1 cell midpoints x_min + (i + 1/2) dx,
/// by zero-padding the spectrum of the first n-1 nodes.
std::vector<Complex> cell_midpoint_values(const ComplexField& f);

/// Linear convolution out[k] = sum_j a[j] b[k-j], |result| = |a|+|b|-1.
std::vector<Complex> linear_convolution(std::span<const Complex> a,
                                        std::span<const Complex> b);

}  // namespace zs
