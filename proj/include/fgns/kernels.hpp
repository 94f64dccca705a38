#pragma once

#include <string>
#include <vector>

namespace fgns {

// Auxiliary periodic grid used to invert kernel symbols. The box should be
// much larger than the kernel's core so that periodic images are negligible.
struct KernelGridSpec {
  int n_aux = 256;
  double box_len = 4.0 * 3.14159265358979323846;
};

enum class Ray { axis, diagonal };

const char* ray_name(Ray ray);

struct KernelSeries {
  std::string component;  // "scalar", "magnitude" or "i,k,j"
  Ray ray = Ray::axis;
  std::vector<double> values;  // one per radius
};

struct KernelTable {
  double beta = 1.0;
  double time = 1.0;
  int dim = 3;
  std::vector<double> radii;  // increasing, >= 0
  std::vector<KernelSeries> series;
  // Gaussian (4 pi t)^{-n/2} exp(-r^2 / 4t) at each radius when beta == 1.
  std::vector<double> analytic;

  // Series with the given component name along a ray, or nullptr.
  const KernelSeries* find(const std::string& component, Ray ray) const;
};

// Radial values of the fractional heat kernel along the first axis, by direct
// Fourier inversion of exp(-t |xi|^{2 beta}) on the auxiliary grid.
KernelTable heat_kernel_table(double beta, double t, const std::vector<double>& radii, int dim,
                              const KernelGridSpec& spec = {});

// Integral of the discretized heat kernel over the auxiliary box, summed on
// the grid points. Equals 1 up to rounding.
double heat_kernel_mass(double beta, double t, int dim, const KernelGridSpec& spec);

// Tensor kernel of exp(-t(-Delta)^beta) P div with symbol
// i xi_j (delta_ik - xi_i xi_k / |xi|^2) exp(-t |xi|^{2 beta}), tabulated
// along the axis and diagonal rays for every (i, k, j), plus the Frobenius
// magnitude over components. Radii default to the inner half box.
KernelTable oseen_kernel_table(double beta, double t, int dim, const KernelGridSpec& spec = {},
                               std::vector<double> radii = {});

// Sup over the table of |G_t(x)| (t^{1/(2 beta)} + |x|)^{dim+1}, using the
// magnitude series.
double fit_decay_constant(const KernelTable& table, double beta, double t, int dim);

struct KernelNorms {
  double strong = 0.0;  // L^r over the auxiliary box
  double weak = 0.0;    // L^{r,infinity}
};

// L^r and weak L^r norms of the Oseen tensor magnitude over the auxiliary grid.
KernelNorms oseen_kernel_norms(double beta, double t, int dim, double r, const KernelGridSpec& spec);

// Default radii: `count` evenly spaced points in [0, box_len / 4].
std::vector<double> inner_half_radii(const KernelGridSpec& spec, int count);

}  // namespace fgns
