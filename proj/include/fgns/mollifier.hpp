#pragma once

#include "fgns/field.hpp"
#include "fgns/time_mesh.hpp"

namespace fgns {

// omega_eps(x) = eps^{-n} omega(x / eps) with the fixed bump
// omega(x) = c exp(-1 / (1 - |x|^2)) on |x| < 1, c normalizing the mass to 1.
struct MollifierSpec {
  double epsilon = 0.1;
};

// Unnormalized profile exp(-1 / (1 - r^2)) for r < 1, else 0.
double bump_profile(double r);
// Normalizing constant c in dimension `dim`, computed by quadrature.
double mollifier_normalization(int dim);
// omega_eps at distance r from the origin.
double mollifier_value(double r, double epsilon, int dim);
// Fourier transform of the unit-mass profile at |xi| = rho (1 at rho = 0).
double mollifier_symbol(double rho, int dim);

// Spectral convolution with omega_eps. Throws ConfigError unless
// 0 < eps < L/4.
SpectralVectorField mollify(const SpectralVectorField& u, const MollifierSpec& spec);
TrajectoryField mollify(const TrajectoryField& u, const MollifierSpec& spec);

// sum over grid points of omega_eps(x) h^n, using the periodic distance to 0.
double mollifier_grid_mass(const TorusGrid& grid, const MollifierSpec& spec);

}  // namespace fgns
