#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgns/carleson.hpp"
#include "fgns/duhamel.hpp"
#include "fgns/errors.hpp"
#include "fgns/field.hpp"
#include "fgns/mollifier.hpp"
#include "fgns/norms.hpp"
#include "fgns/parallel.hpp"
#include "fgns/time_mesh.hpp"

namespace fgns {

enum class NormMode { x, lorentz };

struct PicardConfig {
  double horizon = 1.0;
  int intervals = 32;
  double grading = 2.0;
  int max_iter = 20;
  // Relative to the norm of the first iterate.
  double stop_tol = 1e-8;
  NormMode mode = NormMode::x;
  ModelParams model;
  LorentzParams lorentz;
  int window_levels = 6;
  int window_stride = 0;
  QuadratureRule rule;
  // Empirical bilinear constant used by the smallness indicator.
  double bilinear_constant = 1.0;
  // Shrink T to the largest dyadic T' where the indicator is below 1.
  bool shrink_horizon = false;
  Exec exec = Exec::parallel;

  void validate() const;
  TimeMesh mesh() const;
  CarlesonWindowSet windows(const TorusGrid& grid) const;
};

struct PicardStep {
  int iter = 0;
  double norm = 0.0;   // ||e_n||
  double diff = 0.0;   // ||e_{n+1} - e_n||
  double ratio = 0.0;  // diff_n / diff_{n-1}; NaN for n = 0
};

struct PicardTrace {
  std::vector<PicardStep> steps;
  double horizon = 0.0;
  double e0_norm = 0.0;
  double indicator = 0.0;   // 4 C ||e_0|| (X mode) or 4 T^{1/p} ||u0||_{q,inf}
  bool guaranteed = false;  // indicator < 1
  bool converged = false;
  double final_norm = 0.0;
  double residual = 0.0;    // ||u - (e_0 - B(u, u))|| / ||e_0||
  double ball_radius = 0.0; // 2 ||e_0|| (2 ||u0||_{q,inf} in Lorentz mode)
  bool ball_ok = true;
};

struct PicardResult {
  TrajectoryField solution;
  PicardTrace trace;
};

// Raised when the differences grow for three consecutive steps.
class PicardDivergence : public NonConvergence {
 public:
  PicardDivergence(const std::string& what, PicardTrace trace) : NonConvergence(what), trace_(std::move(trace)) {}
  const PicardTrace& trace() const { return trace_; }

 private:
  PicardTrace trace_;
};

struct SmallnessReport {
  double indicator = 0.0;
  bool holds = true;
  double e0_norm = 0.0;
  // Largest T 2^{-k} (k <= 30) with indicator < 1; 0 if none.
  double admissible_horizon = 0.0;
};

// 4 C x_norm(caloric extension of u0) on [0, T], plus the dyadic horizon scan
// (the windows and nodes for T' are the subsets of those for T, so the
// indicator is nondecreasing in T).
SmallnessReport smallness_check(const SpectralVectorField& u0, const PicardConfig& cfg);

// v_0 = exp(-t(-Delta)^beta) u0, v_n = v_0 - B(v_{n-1}, v_{n-1}).
PicardResult solve_mild(const SpectralVectorField& u0, const PicardConfig& cfg);

// Same with B replaced by B_eps(u, u) = B(u * omega_eps, u).
PicardResult solve_mollified(const SpectralVectorField& u0, const MollifierSpec& spec, const PicardConfig& cfg);

struct EpsComparison {
  double epsilon = 0.0;
  double lhs = 0.0;             // x_norm(u - u_eps)
  double mollifier_gap = 0.0;   // x_norm(u - u * omega_eps)
  double rhs = 0.0;             // 2 C e / (1 - 4 C e) * gap
  int iterations = 0;
};

struct EpsReport {
  double indicator = 0.0;
  double e0_norm = 0.0;
  std::vector<EpsComparison> rows;
  bool decreasing = true;
  double max_ratio = 0.0;       // max lhs / rhs
};

// Throws InvariantViolation when the smallness indicator is >= 1.
EpsReport compare_mollified_to_mild(const SpectralVectorField& u0, const std::vector<double>& eps_list,
                                    const PicardConfig& cfg);

// 4 T^{1/p} ||u0||_{q,inf}.
double lorentz_threshold(const SpectralVectorField& u0, const LorentzParams& lp, double horizon);
// Largest admissible horizon (1 / (4 ||u0||_{q,inf}))^p (exclusive).
double lorentz_admissible_horizon(double u0_norm, double p);

// Picard iteration measured in L^inf((0,T), L^{q,inf}). Throws ConfigError
// when the threshold is >= 1.
PicardResult lorentz_picard(const SpectralVectorField& u0, const LorentzParams& lp, const PicardConfig& cfg);

// e^{-t(-Delta)^beta}(a + (t / T) b) on the config mesh.
TrajectoryField sample_trajectory(const SpectralVectorField& a, const SpectralVectorField& b, const PicardConfig& cfg);

// Seeded pairs of random band-limited trajectories.
std::vector<std::pair<TrajectoryField, TrajectoryField>> random_trajectory_pairs(const TorusGrid& grid, int count,
                                                                                 std::uint64_t seed,
                                                                                 const PicardConfig& cfg);

struct BilinearEstimate {
  double constant = 0.0;
  std::vector<double> ratios;  // one per pair with nonzero norms
  int skipped = 0;
};

// max over pairs of x_norm(B(u, v)) / (x_norm(u) x_norm(v)); pairs with a
// zero norm are skipped. Throws ConfigError when no pair remains.
BilinearEstimate estimate_bilinear_constant(const std::vector<std::pair<TrajectoryField, TrajectoryField>>& pairs,
                                            const PicardConfig& cfg);
// Seeded sample of `sample_size` >= 10 pairs.
BilinearEstimate estimate_bilinear_constant(int sample_size, const TorusGrid& grid, const PicardConfig& cfg,
                                            std::uint64_t seed);

}  // namespace fgns
