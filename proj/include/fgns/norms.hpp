#pragma once

#include <array>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fgns/carleson.hpp"
#include "fgns/field.hpp"
#include "fgns/grid.hpp"
#include "fgns/parallel.hpp"
#include "fgns/time_mesh.hpp"

namespace fgns {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Lorentz exponents tied to the model by beta - 1/2 = beta/p + n/(2q).
struct LorentzParams {
  double p = 6.0;
  double q = 8.0;
  double beta = 0.75;
  int dim = 2;

  // Throws ConfigError unless p > 2 beta / (2 beta - 1), q > n / (2 beta - 1)
  // and the relation holds within 1e-12 (1/inf = 0).
  void validate() const;
  // p solved from the relation.
  static LorentzParams from_q(double q, double beta, int dim);
  static LorentzParams from_p(double p, double beta, int dim);
};

struct NormReport {
  std::string name;
  double value = 0.0;
  // Attaining window (radius 0 when none) or attaining time.
  double radius = 0.0;
  std::size_t center = 0;
  double time = 0.0;
  // Parts of composite norms.
  double sup_term = 0.0;
  double carleson_term = 0.0;
};

// Per-window time sampling for q_norm_loc: every window gets `nodes_per_window`
// graded intervals on [0, r^{2 beta}].
struct QNormOptions {
  int nodes_per_window = 24;
  double grading = 2.0;
  Exec exec = Exec::parallel;
};

// sqrt of the largest window value of |exp(-t(-Delta)^beta) u0|^2.
// Throws ConfigError for empty window sets or r^{2 beta} >= T.
NormReport q_norm_loc(const SpectralVectorField& u0, const ModelParams& params, const CarlesonWindowSet& windows,
                      double horizon, const QNormOptions& opts = {});

// sup_{0 < t_i <= T} t_i^{1 - 1/(2 beta)} max|g(t_i)| plus the square root of
// the largest window value of |g|^2. Windows with r^{2 beta} >= T are
// rejected; an empty window set contributes 0.
NormReport x_norm(const TrajectoryField& g, const ModelParams& params, const CarlesonWindowSet& windows,
                  double horizon, Exec exec = Exec::parallel);

// Largest N accepted by q_seminorm_double_integral (per dimension).
int seminorm_grid_limit(int dim);

// max over dyadic cubes I (side >= 2h) of
//   l(I)^{2(alpha + beta - 1) - n} sum_{x != y in I} |f(x) - f(y)|^2 / |x - y|^{n + 2(alpha - beta + 1)} h^{2n}.
NormReport q_seminorm_double_integral(const TorusGrid& grid, std::span<const double> f, const ModelParams& params,
                                      Exec exec = Exec::parallel);

// Weak L^q norm of |u| (q = inf gives max |u|). Throws ConfigError for q <= 1.
double lorentz_norm(const SpectralVectorField& u, double q);
double lorentz_norm(const TorusGrid& grid, std::span<const double> magnitudes, double q);

// Weak L^p norm on (0, T) of the series held constant on (t_{i-1}, t_i]
// (node 0 carries no measure). Throws ConfigError for p <= 1.
double time_lorentz_norm(std::span<const double> series, const TimeMesh& mesh, double p);

struct LevelSplit {
  double level = 0.0;
  TrajectoryField above;  // u on nodes with ||u(t)||_{q,inf} > level, 0 elsewhere
  TrajectoryField below;
  std::vector<double> node_norms;
  double measure = 0.0;   // |{t : ||u(t)||_{q,inf} > level}|
  double c_level = 0.0;   // level^p * measure
};

LevelSplit level_split(const TrajectoryField& u, double level, double p, double q);

// Values of a nodal series at the three smallest positive nodes.
struct Profile {
  std::vector<double> times;
  std::vector<double> values;
  double sup = 0.0;
  double sup_time = 0.0;
  std::array<double, 3> head{};
};

// max over nodes in (0, 1) of t^{alpha/(2 beta)} ||exp(-t(-Delta)^beta) u0||_{q,inf}.
// Throws ConfigError when no node lies in (0, 1e-3].
Profile besov_norm(const SpectralVectorField& u0, double alpha, double beta, double q, const TimeMesh& mesh);

// t^{1/p} ||u(t)||_{q,inf} at every node.
Profile decay_profile(const TrajectoryField& u, const LorentzParams& lp);

// Weights w_j with int_0^{t_k} (t_k - s)^{-a} phi(s) ds = sum_j w_j phi(t_j)
// for phi piecewise linear on the nodes; 0 <= a < 1.
std::vector<double> singular_convolution_weights(std::span<const double> times, std::size_t node, double a);

// Right side of the Lorentz bound for B at every node:
//   int_0^t (t - s)^{-(1 + n/q)/(2 beta)} ||u(s)||_{q,inf} ||v(s)||_{q,inf} ds.
std::vector<double> duhamel_lorentz_bound(const TrajectoryField& u, const TrajectoryField& v, double beta, double q);

}  // namespace fgns
