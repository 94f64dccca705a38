#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fgns/grid.hpp"
#include "fgns/parallel.hpp"

namespace fgns {

// Parabolic windows (r, x0): dyadic radii r_j = r_max 2^{-j}, centers on the
// grid points with index stride `stride` along every axis.
struct CarlesonWindowSet {
  std::vector<double> radii;  // decreasing
  int stride = 1;

  // r_max^{2 beta} just below `horizon`, levels + 1 radii, stride 0 meaning
  // max(1, N / 16).
  static CarlesonWindowSet dyadic(const TorusGrid& grid, double horizon, double beta, int levels = 6, int stride = 0);

  // Windows with r^{2 beta} < horizon.
  CarlesonWindowSet restricted_to(double horizon, double beta) const;

  // Throws ConfigError for empty sets, stride < 1, r^{2 beta} >= horizon or
  // balls wider than half the box.
  void validate(const TorusGrid& grid, double horizon, double beta) const;
};

// Inputs of the window scan. density[i] holds |g(t_i, x)|^2 on the grid.
struct CarlesonProblem {
  const TorusGrid* grid = nullptr;
  std::span<const double> times;
  std::span<const RealArray> density;
  std::span<const double> radii;
  int stride = 1;
  double alpha = 0.5;
  double beta = 0.75;
};

// Largest window value
//   r^{2 alpha - n + 2 beta - 2} int_0^{r^{2 beta}} int_{|y - x0| < r} |g|^2 t^{-alpha/beta} dy dt
// and the window attaining it (ties go to the larger radius, then the lower
// center index).
struct CarlesonHit {
  double value = 0.0;
  double radius = 0.0;
  std::size_t center = 0;
};

// Per-node weights w_i with int_0^R S(t) t^{-a} dt = sum_i w_i S(t_i) for S
// piecewise linear on the nodes. R must not exceed the last node.
std::vector<double> singular_time_weights(std::span<const double> times, double upper, double a);

// Integer offsets d with |d| h < r (cell-center membership).
std::vector<MultiIndex> ball_offsets(const TorusGrid& grid, double radius);

// Volume of the ball of radius r in dimension 2 or 3.
double ball_volume(int dim, double radius);

CarlesonHit carleson_scan_serial(const CarlesonProblem& problem);
CarlesonHit carleson_scan_omp(const CarlesonProblem& problem);
CarlesonHit carleson_scan(const CarlesonProblem& problem, Exec exec = Exec::parallel);

}  // namespace fgns
