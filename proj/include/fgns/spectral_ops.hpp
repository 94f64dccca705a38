#pragma once

#include "fgns/field.hpp"

namespace fgns {

// Leray projection (I - xi xi^T / |xi|^2) u, identity at xi = 0. The result is
// flagged divergence-free.
SpectralVectorField leray_project(const SpectralVectorField& u);

// Multiplication by exp(-t |xi|^{2 beta}). Throws ConfigError for t < 0 or
// beta outside (1/2, 1].
SpectralVectorField fractional_semigroup(const SpectralVectorField& u, double t, double beta);

// exp(-t |xi|^{2 beta}) for a squared wavevector length.
double fractional_multiplier(double xi_squared, double t, double beta);

// Dealiased products u_i v_j. Inputs and output are restricted to modes with
// every |k_a| <= N/3, which makes the result the exact truncated convolution.
SpectralTensorField nonlinear_tensor(const SpectralVectorField& u, const SpectralVectorField& v);

// (div T)_i = sum_j i xi_j T_ij.
SpectralVectorField tensor_divergence(const SpectralTensorField& tensor);

// P div(u (x) v), the integrand of the Duhamel term before the semigroup.
// Uses the symmetric product when u and v are the same object.
SpectralVectorField projected_flux(const SpectralVectorField& u, const SpectralVectorField& v);

// Scalar divergence sum_a i xi_a u_a.
CoeffArray divergence(const SpectralVectorField& u);

// Gradient of a scalar given by its coefficients.
SpectralVectorField gradient(const TorusGrid& grid, const CoeffArray& scalar);

// Zero every mode outside the 2/3-rule band.
void dealias(SpectralVectorField& u);

}  // namespace fgns
