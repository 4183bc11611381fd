#pragma once

// Discrete Fourier transforms of arbitrary length, backed by FFTW.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qgrad {

using Complex = std::complex<double>;

enum class Direction { forward, inverse };

/// Unnormalized 1D DFT, in place:
///   forward: X_k = sum_j x_j exp(-2 pi i j k / n)
///   inverse: X_k = sum_j x_j exp(+2 pi i j k / n)
void dft(std::span<Complex> data, Direction dir);

/// Unitary separable d-dimensional transform over the row-major lattice
/// [0,N)^d: every axis gets the 1D transform followed by 1/sqrt(N).
/// Lines are split across `workers` threads; every line runs through the
/// same plan, so the result does not depend on the worker count.
void fourier_nd(std::vector<Complex>& data, int d, std::int64_t N, Direction dir, unsigned workers = 1);

}  // namespace qgrad
