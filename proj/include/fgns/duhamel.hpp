#pragma once

#include <cstddef>
#include <vector>

#include "fgns/mollifier.hpp"
#include "fgns/parallel.hpp"
#include "fgns/time_mesh.hpp"

namespace fgns {

// Graded product-trapezoid rule on (0, t): s_j = t (1 - (1 - j/M)^gamma).
// On each panel the flux P div(u (x) v) is interpolated linearly and the
// semigroup factor exp(-(t - s)|xi|^{2 beta}) is integrated exactly per mode.
struct QuadratureRule {
  double grading = 2.0;
  int panels = 32;

  void validate() const;
  std::vector<double> nodes(double t) const;
};

// Weights of the exact panel integral: for z = lambda h,
//   w_left(z)  = int_0^1 exp(-z y) y dy,
//   w_right(z) = int_0^1 exp(-z y) (1 - y) dy,
// so that int_a^b exp(-(b - s) lambda) f(s) ds = h (w_left f(a) + w_right f(b))
// for f linear on [a, b].
void panel_weights(double z, double& w_left, double& w_right);

// B(u, v)(t) at mesh node `node`:
//   int_0^t exp(-(t - s)(-Delta)^beta) P div(u (x) v)(s) ds.
// Throws ConfigError when the meshes differ or node is out of range.
SpectralVectorField bilinear_B(const TrajectoryField& u, const TrajectoryField& v, std::size_t node, double beta,
                               const QuadratureRule& rule = {});

// Same, addressed by time; the time must be a mesh node.
SpectralVectorField bilinear_B_at(const TrajectoryField& u, const TrajectoryField& v, double t, double beta,
                                  const QuadratureRule& rule = {});

// B at every node. The parallel policy distributes target nodes over threads.
TrajectoryField bilinear_B_trajectory(const TrajectoryField& u, const TrajectoryField& v, double beta,
                                      const QuadratureRule& rule = {}, Exec exec = Exec::parallel);

// B_eps(u, u) = B(u * omega_eps, u).
SpectralVectorField bilinear_B_mollified(const TrajectoryField& u, const MollifierSpec& spec, std::size_t node,
                                         double beta, const QuadratureRule& rule = {});
TrajectoryField bilinear_B_mollified_trajectory(const TrajectoryField& u, const MollifierSpec& spec, double beta,
                                                const QuadratureRule& rule = {}, Exec exec = Exec::parallel);

}  // namespace fgns
