#include "fgns/picard.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "fgns/initial_data.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

void PicardConfig::validate() const {
  if (!(horizon > 0.0)) throw ConfigError("horizon.T must be positive");
  if (intervals < 2) throw ConfigError("mesh.nodes must be >= 2");
  if (!(grading >= 1.0)) throw ConfigError("mesh.gamma must be >= 1");
  if (max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (!(stop_tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (!(bilinear_constant > 0.0)) throw ConfigError("bilinear constant must be positive");
  if (window_levels < 0) throw ConfigError("windows.J must be >= 0");
  if (window_stride < 0) throw ConfigError("windows.stride must be >= 0");
  model.validate();
  rule.validate();
}

TimeMesh PicardConfig::mesh() const { return TimeMesh::graded(horizon, intervals, grading); }

CarlesonWindowSet PicardConfig::windows(const TorusGrid& grid) const {
  return CarlesonWindowSet::dyadic(grid, horizon, model.beta, window_levels, window_stride);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using BTerm = std::function<TrajectoryField(const TrajectoryField&)>;
using Norm = std::function<double(const TrajectoryField&)>;

void check_divfree(const TrajectoryField& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double defect = g[i].divergence_defect();
    if (defect > 1e-10 * (1.0 + sup_norm(g[i]))) {
      throw InvariantViolation("picard iterate lost the divergence-free property (defect " + std::to_string(defect) +
                               ")");
    }
  }
}

void check_initial(const SpectralVectorField& u0) {
  const double defect = u0.divergence_defect();
  if (defect > 1e-9) {
    throw InvariantViolation("initial data is not divergence-free (defect " + std::to_string(defect) + ")");
  }
}

PicardResult iterate(const TrajectoryField& e0, PicardTrace trace, const BTerm& bterm, const Norm& norm,
                     const PicardConfig& cfg) {
  TrajectoryField v = e0;
  double prev = kNaN;
  int increases = 0;
  const double ball = trace.ball_radius * (1.0 + 1e-12);
  for (int n = 0; n < cfg.max_iter; ++n) {
    TrajectoryField next = e0 - bterm(v);
    check_divfree(next);
    const double d = norm(next - v);
    const double nv = n == 0 ? trace.e0_norm : norm(v);
    trace.steps.push_back({n, nv, d, n == 0 ? kNaN : (prev > 0.0 ? d / prev : 0.0)});
    if (nv > ball) trace.ball_ok = false;
    increases = (n > 0 && d > prev) ? increases + 1 : 0;
    v = std::move(next);
    prev = d;
    if (d <= cfg.stop_tol * trace.e0_norm) {
      trace.converged = true;
      break;
    }
    if (increases >= 3) {
      trace.final_norm = norm(v);
      throw PicardDivergence("picard differences grew for three consecutive iterations", trace);
    }
  }
  trace.final_norm = norm(v);
  if (trace.final_norm > ball) trace.ball_ok = false;
  if (trace.converged) {
    const double res = norm(v - (e0 - bterm(v)));
    trace.residual = trace.e0_norm > 0.0 ? res / trace.e0_norm : res;
  }
  return {std::move(v), std::move(trace)};
}

Norm x_norm_of(const PicardConfig& cfg, const TorusGrid& grid) {
  auto windows = cfg.windows(grid);
  return [cfg, windows](const TrajectoryField& g) {
    return x_norm(g, cfg.model, windows, cfg.horizon, cfg.exec).value;
  };
}

PicardConfig shrink_if_needed(const SpectralVectorField& u0, PicardConfig cfg) {
  if (!cfg.shrink_horizon) return cfg;
  const SmallnessReport sm = smallness_check(u0, cfg);
  if (sm.holds) return cfg;
  if (!(sm.admissible_horizon > 0.0)) throw NonConvergence("no dyadic horizon satisfies the smallness condition");
  cfg.horizon = sm.admissible_horizon;
  return cfg;
}

PicardResult run_x_mode(const SpectralVectorField& u0, const PicardConfig& in, const BTerm& bterm) {
  in.validate();
  check_initial(u0);
  const PicardConfig cfg = shrink_if_needed(u0, in);
  const TrajectoryField e0 = caloric_extension(u0, cfg.mesh(), cfg.model.beta);
  const Norm norm = x_norm_of(cfg, u0.grid());
  PicardTrace trace;
  trace.horizon = cfg.horizon;
  trace.e0_norm = norm(e0);
  trace.indicator = 4.0 * cfg.bilinear_constant * trace.e0_norm;
  trace.guaranteed = trace.indicator < 1.0;
  trace.ball_radius = 2.0 * trace.e0_norm;
  return iterate(e0, std::move(trace), bterm, norm, cfg);
}

}  // namespace

SmallnessReport smallness_check(const SpectralVectorField& u0, const PicardConfig& cfg) {
  cfg.validate();
  const TrajectoryField e0 = caloric_extension(u0, cfg.mesh(), cfg.model.beta);
  const CarlesonWindowSet windows = cfg.windows(u0.grid());
  SmallnessReport rep;
  for (int k = 0; k <= 30; ++k) {
    const double t = std::ldexp(cfg.horizon, -k);
    const double xn = x_norm(e0, cfg.model, windows.restricted_to(t, cfg.model.beta), t, cfg.exec).value;
    const double ind = 4.0 * cfg.bilinear_constant * xn;
    if (k == 0) {
      rep.indicator = ind;
      rep.e0_norm = xn;
      rep.holds = ind < 1.0;
    }
    if (ind < 1.0) {
      rep.admissible_horizon = t;
      break;
    }
  }
  return rep;
}

PicardResult solve_mild(const SpectralVectorField& u0, const PicardConfig& cfg) {
  const BTerm b = [&cfg](const TrajectoryField& v) {
    return bilinear_B_trajectory(v, v, cfg.model.beta, cfg.rule, cfg.exec);
  };
  return run_x_mode(u0, cfg, b);
}

PicardResult solve_mollified(const SpectralVectorField& u0, const MollifierSpec& spec, const PicardConfig& cfg) {
  // Surface a bad epsilon before any work.
  (void)mollify(u0, spec);
  const BTerm b = [&cfg, spec](const TrajectoryField& v) {
    return bilinear_B_mollified_trajectory(v, spec, cfg.model.beta, cfg.rule, cfg.exec);
  };
  return run_x_mode(u0, cfg, b);
}

EpsReport compare_mollified_to_mild(const SpectralVectorField& u0, const std::vector<double>& eps_list,
                                    const PicardConfig& in) {
  PicardConfig cfg = in;
  cfg.shrink_horizon = false;
  const SmallnessReport sm = smallness_check(u0, cfg);
  if (!sm.holds) {
    throw InvariantViolation("smallness indicator " + std::to_string(sm.indicator) + " >= 1; comparison not covered");
  }
  const PicardResult mild = solve_mild(u0, cfg);
  const Norm norm = x_norm_of(cfg, u0.grid());
  EpsReport rep;
  rep.indicator = mild.trace.indicator;
  rep.e0_norm = mild.trace.e0_norm;
  const double ce = cfg.bilinear_constant * rep.e0_norm;
  const double factor = 2.0 * ce / (1.0 - 4.0 * ce);
  for (double eps : eps_list) {
    const MollifierSpec spec{eps};
    const PicardResult moll = solve_mollified(u0, spec, cfg);
    EpsComparison row;
    row.epsilon = eps;
    row.lhs = norm(mild.solution - moll.solution);
    row.mollifier_gap = norm(mild.solution - mollify(mild.solution, spec));
    row.rhs = factor * row.mollifier_gap;
    row.iterations = static_cast<int>(moll.trace.steps.size());
    if (!rep.rows.empty() && !(row.lhs < rep.rows.back().lhs)) rep.decreasing = false;
    const double ratio = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? kInf : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

double lorentz_threshold(const SpectralVectorField& u0, const LorentzParams& lp, double horizon) {
  lp.validate();
  return 4.0 * std::pow(horizon, 1.0 / lp.p) * lorentz_norm(u0, lp.q);
}

double lorentz_admissible_horizon(double u0_norm, double p) {
  if (!(u0_norm > 0.0)) return kInf;
  return std::pow(1.0 / (4.0 * u0_norm), p);
}

PicardResult lorentz_picard(const SpectralVectorField& u0, const LorentzParams& lp, const PicardConfig& cfg) {
  cfg.validate();
  lp.validate();
  check_initial(u0);
  if (lp.dim != u0.grid().dim() || lp.beta != cfg.model.beta) {
    throw ConfigError("lorentz parameters do not match the grid dimension and beta");
  }
  const double threshold = lorentz_threshold(u0, lp, cfg.horizon);
  if (!(threshold < 1.0)) {
    throw ConfigError("lorentz threshold 4 T^{1/p} ||u0||_{q,inf} = " + std::to_string(threshold) +
                      " >= 1 (admissible T < " +
                      std::to_string(lorentz_admissible_horizon(lorentz_norm(u0, lp.q), lp.p)) + ")");
  }
  const TrajectoryField e0 = caloric_extension(u0, cfg.mesh(), cfg.model.beta);
  const double q = lp.q;
  const Norm norm = [q](const TrajectoryField& g) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, lorentz_norm(g[i], q));
    return m;
  };
  const BTerm b = [&cfg](const TrajectoryField& v) {
    return bilinear_B_trajectory(v, v, cfg.model.beta, cfg.rule, cfg.exec);
  };
  PicardTrace trace;
  trace.horizon = cfg.horizon;
  trace.e0_norm = norm(e0);
  trace.indicator = threshold;
  trace.guaranteed = true;
  trace.ball_radius = 2.0 * lorentz_norm(u0, q);
  return iterate(e0, std::move(trace), b, norm, cfg);
}

TrajectoryField sample_trajectory(const SpectralVectorField& a, const SpectralVectorField& b, const PicardConfig& cfg) {
  const TimeMesh mesh = cfg.mesh();
  std::vector<SpectralVectorField> states;
  states.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double s = mesh[i] / mesh.horizon();
    states.push_back(fractional_semigroup(a + s * b, mesh[i], cfg.model.beta));
  }
  return TrajectoryField(mesh, std::move(states));
}

std::vector<std::pair<TrajectoryField, TrajectoryField>> random_trajectory_pairs(const TorusGrid& grid, int count,
                                                                                 std::uint64_t seed,
                                                                                 const PicardConfig& cfg) {
  std::mt19937_64 rng(seed);
  const int band = std::min(4, grid.n_axis() / 3 - 1);
  std::vector<std::pair<TrajectoryField, TrajectoryField>> pairs;
  for (int k = 0; k < count; ++k) {
    const auto a1 = random_bandlimited(grid, 1.0, rng, band);
    const auto b1 = random_bandlimited(grid, 0.5, rng, band);
    const auto a2 = random_bandlimited(grid, 1.0, rng, band);
    const auto b2 = random_bandlimited(grid, 0.5, rng, band);
    pairs.emplace_back(sample_trajectory(a1, b1, cfg), sample_trajectory(a2, b2, cfg));
  }
  return pairs;
}

BilinearEstimate estimate_bilinear_constant(const std::vector<std::pair<TrajectoryField, TrajectoryField>>& pairs,
                                            const PicardConfig& cfg) {
  cfg.validate();
  BilinearEstimate est;
  if (pairs.empty()) throw ConfigError("bilinear estimate: empty sample");
  const Norm norm = x_norm_of(cfg, pairs.front().first.grid());
  for (const auto& [u, v] : pairs) {
    const double nu = norm(u);
    const double nv = norm(v);
    if (!(nu > 0.0) || !(nv > 0.0)) {
      ++est.skipped;
      continue;
    }
    const double nb = norm(bilinear_B_trajectory(u, v, cfg.model.beta, cfg.rule, cfg.exec));
    const double ratio = nb / (nu * nv);
    est.ratios.push_back(ratio);
    est.constant = std::max(est.constant, ratio);
  }
  if (est.ratios.empty()) throw ConfigError("bilinear estimate: every sample pair has a zero norm");
  return est;
}

BilinearEstimate estimate_bilinear_constant(int sample_size, const TorusGrid& grid, const PicardConfig& cfg,
                                            std::uint64_t seed) {
  if (sample_size < 10) throw ConfigError("bilinear.samples must be >= 10");
  return estimate_bilinear_constant(random_trajectory_pairs(grid, sample_size, seed, cfg), cfg);
}

}  // namespace fgns
