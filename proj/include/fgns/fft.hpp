#pragma once

#include <span>

#include "fgns/grid.hpp"

namespace fgns {

// Real-to-spectral transform on the full coefficient layout of `grid`.
//
// coeffs[k] = N^{-dim} sum_x phys[x] exp(-i xi_k . x), so that
// phys[x] = sum_k coeffs[k] exp(i xi_k . x). The output is exactly Hermitian:
// coeffs[mirror(k)] == conj(coeffs[k]) bit for bit.
void forward_real(const TorusGrid& grid, std::span<const double> phys, std::span<Complex> coeffs);

// Inverse of forward_real. Reads only the half spectrum (last axis index
// <= N/2); the other half is assumed to be the Hermitian mirror.
void inverse_real(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> phys);

// Version string of the transform library.
const char* fft_library_version();

}  // namespace fgns
