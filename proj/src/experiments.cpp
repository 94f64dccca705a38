#include "fgns/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

#include "fgns/csv.hpp"
#include "fgns/errors.hpp"
#include "fgns/fft.hpp"
#include "fgns/initial_data.hpp"
#include "fgns/kernels.hpp"
#include "fgns/norms.hpp"
#include "fgns/parallel.hpp"
#include "fgns/picard.hpp"
#include "fgns/snapshot.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

namespace fs = std::filesystem;

namespace {

struct Context {
  const ExperimentConfig& cfg;
  fs::path dir;
  std::vector<std::string> artifacts;

  std::string path(const std::string& name) {
    if (std::find(artifacts.begin(), artifacts.end(), name) == artifacts.end()) artifacts.push_back(name);
    return (dir / name).string();
  }
};

std::string yes(bool b) { return b ? "true" : "false"; }

// Empirical C: from the config when given, else a seeded sample.
double bilinear_constant(const ExperimentConfig& cfg, const TorusGrid& grid, const PicardConfig& pc) {
  if (cfg.bilinear_c > 0.0) return cfg.bilinear_c;
  return estimate_bilinear_constant(cfg.bilinear_samples, grid, pc, cfg.seed).constant;
}

struct Prepared {
  TorusGrid grid;
  PicardConfig picard;
  SpectralVectorField u0;
  double amplitude = 0.0;
};

Prepared prepare(const ExperimentConfig& cfg, bool need_constant) {
  const TorusGrid grid = cfg.grid();
  PicardConfig pc = cfg.picard();
  if (need_constant) pc.bilinear_constant = bilinear_constant(cfg, grid, pc);
  double amp = cfg.data_amplitude;
  if (cfg.data_indicator > 0.0) {
    const auto unit = generate_initial_data(cfg.data_kind, 1.0, cfg.seed, grid);
    const double ind = smallness_check(unit, pc).indicator;
    if (!(ind > 0.0)) throw ConfigError("data.indicator: the chosen data has zero X-norm");
    amp = cfg.data_indicator / ind;
  }
  auto u0 = generate_initial_data(cfg.data_kind, amp, cfg.seed, grid);
  return {grid, pc, std::move(u0), amp};
}

CsvTable trace_table(const PicardTrace& tr) {
  CsvTable t({"iter", "norm", "diff", "ratio"});
  for (const auto& s : tr.steps) t.add({std::to_string(s.iter), fmt(s.norm), fmt(s.diff), fmt(s.ratio)});
  return t;
}

void add_trace_summary(CsvTable& sum, const PicardTrace& tr) {
  sum.add({"horizon", fmt(tr.horizon)});
  sum.add({"e0_norm", fmt(tr.e0_norm)});
  sum.add({"indicator", fmt(tr.indicator)});
  sum.add({"guaranteed", yes(tr.guaranteed)});
  sum.add({"converged", yes(tr.converged)});
  sum.add({"iterations", std::to_string(tr.steps.size())});
  sum.add({"final_norm", fmt(tr.final_norm)});
  sum.add({"residual", fmt(tr.residual)});
  sum.add({"ball_radius", fmt(tr.ball_radius)});
  sum.add({"ball_ok", yes(tr.ball_ok)});
}

// Shared tail of solve-mild / solve-mollified.
void finish_solve(Context& ctx, const Prepared& pr, const std::function<PicardResult()>& solve, CsvTable& sum) {
  write_snapshot(ctx.path("initial.fgns"), pr.u0, 0.0);
  PicardResult res = [&] {
    try {
      return solve();
    } catch (const PicardDivergence& e) {
      trace_table(e.trace()).write(ctx.path("trace.csv"));
      throw;
    }
  }();
  trace_table(res.trace).write(ctx.path("trace.csv"));
  write_trajectory(ctx.path("solution.fgns"), res.solution);
  const auto windows = CarlesonWindowSet::dyadic(pr.grid, res.trace.horizon, pr.picard.model.beta,
                                                 pr.picard.window_levels, pr.picard.window_stride);
  const NormReport xn = x_norm(res.solution, pr.picard.model, windows, res.trace.horizon);
  add_trace_summary(sum, res.trace);
  sum.add({"x_norm_solution", fmt(xn.value)});
  sum.write(ctx.path("summary.csv"));
  if (res.trace.guaranteed && !res.trace.ball_ok) {
    throw InvariantViolation("iterates left the ball of radius 2 ||e_0|| under the smallness condition");
  }
  if (!res.trace.converged) throw NonConvergence("picard iteration hit solver.max_iter without converging");
}

CsvTable summary_head(const Prepared& pr) {
  CsvTable sum({"quantity", "value"});
  sum.add({"bilinear_constant", fmt(pr.picard.bilinear_constant)});
  sum.add({"amplitude", fmt(pr.amplitude)});
  return sum;
}

void cmd_solve_mild(Context& ctx) {
  const Prepared pr = prepare(ctx.cfg, true);
  CsvTable sum = summary_head(pr);
  finish_solve(ctx, pr, [&] { return solve_mild(pr.u0, pr.picard); }, sum);
}

void cmd_solve_mollified(Context& ctx) {
  const Prepared pr = prepare(ctx.cfg, true);
  CsvTable sum = summary_head(pr);
  const MollifierSpec spec{ctx.cfg.eps.front()};
  sum.add({"epsilon", fmt(spec.epsilon)});
  finish_solve(ctx, pr, [&] { return solve_mollified(pr.u0, spec, pr.picard); }, sum);
}

void cmd_compare_eps(Context& ctx) {
  const Prepared pr = prepare(ctx.cfg, true);
  write_snapshot(ctx.path("initial.fgns"), pr.u0, 0.0);
  const EpsReport rep = compare_mollified_to_mild(pr.u0, ctx.cfg.eps, pr.picard);
  CsvTable t({"eps", "lhs", "mollifier_gap", "rhs", "ratio", "iterations"});
  for (const auto& r : rep.rows) {
    t.add({fmt(r.epsilon), fmt(r.lhs), fmt(r.mollifier_gap), fmt(r.rhs), fmt(r.rhs > 0 ? r.lhs / r.rhs : 0.0),
           std::to_string(r.iterations)});
  }
  t.write(ctx.path("compare.csv"));
  CsvTable sum = summary_head(pr);
  sum.add({"indicator", fmt(rep.indicator)});
  sum.add({"e0_norm", fmt(rep.e0_norm)});
  sum.add({"decreasing", yes(rep.decreasing)});
  sum.add({"max_ratio", fmt(rep.max_ratio)});
  sum.write(ctx.path("summary.csv"));
  if (!rep.decreasing) throw InvariantViolation("||u - u_eps||_X is not strictly decreasing over the eps list");
  if (rep.max_ratio > 1.1) throw InvariantViolation("||u - u_eps||_X exceeds the bound by more than 10%");
}

void cmd_norms(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ModelParams model = cfg.model();
  SpectralVectorField u0(cfg.grid());
  std::optional<TrajectoryField> traj;
  if (!cfg.input.empty()) {
    auto recs = read_records(cfg.input);
    u0 = recs.front().field;
    if (recs.size() >= 2) traj = read_trajectory(cfg.input);
  } else {
    u0 = prepare(cfg, cfg.data_indicator > 0.0).u0;
  }
  const TorusGrid& grid = u0.grid();
  const double horizon = traj ? traj->mesh().horizon() : cfg.horizon;
  if (!traj) traj = caloric_extension(u0, TimeMesh::graded(horizon, cfg.mesh_nodes, cfg.mesh_gamma), model.beta);
  const auto windows = CarlesonWindowSet::dyadic(grid, horizon, model.beta, cfg.windows_levels, cfg.windows_stride);
  const LorentzParams lp = cfg.lorentz();

  CsvTable t({"name", "value", "radius", "center", "time"});
  auto row = [&t](const std::string& name, double v, double r = 0.0, std::size_t c = 0, double time = 0.0) {
    t.add({name, fmt(v), fmt(r), std::to_string(c), fmt(time)});
  };
  row("l2", l2_norm(u0));
  row("sup", sup_norm(u0));
  row("lorentz_q", lorentz_norm(u0, lp.q));
  const NormReport q = q_norm_loc(u0, model, windows, horizon);
  row("q_norm_loc", q.value, q.radius, q.center);
  const NormReport x = x_norm(*traj, model, windows, horizon);
  row("x_norm", x.value, x.radius, x.center, x.time);
  row("x_norm_sup_term", x.sup_term, 0.0, 0, x.time);
  row("x_norm_carleson_term", x.carleson_term, x.radius, x.center);
  const Profile besov = besov_norm(u0, model.alpha, model.beta, lp.q, TimeMesh::graded(1.0, 64, 3.0));
  row("besov", besov.sup, 0.0, 0, besov.sup_time);
  const Profile decay = decay_profile(*traj, lp);
  row("decay_sup", decay.sup, 0.0, 0, decay.sup_time);
  std::vector<double> series;
  for (std::size_t i = 0; i < traj->size(); ++i) series.push_back(lorentz_norm((*traj)[i], lp.q));
  row("time_lorentz_p", time_lorentz_norm(series, traj->mesh(), lp.p));
  if (grid.n_axis() <= seminorm_grid_limit(grid.dim())) {
    const RealArray f = u0.to_physical().front();
    const NormReport s = q_seminorm_double_integral(grid, f, model);
    row("q_seminorm_u1", s.value, s.radius, s.center);
  }
  t.write(ctx.path("norms.csv"));
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void cmd_verify(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const TorusGrid grid = cfg.grid();
  const PicardConfig pc = cfg.picard();
  const LorentzParams lp = cfg.lorentz();
  const auto windows = pc.windows(grid);
  CsvTable t({"check", "sample", "value", "bound", "pass"});
  bool ok = true;
  auto row = [&](const std::string& check, const std::string& sample, double v, double bound, bool pass) {
    t.add({check, sample, fmt(v), fmt(bound), yes(pass)});
    ok = ok && pass;
  };

  const auto pairs = random_trajectory_pairs(grid, cfg.verify_pairs, cfg.seed, pc);
  const TimeMesh mesh = pc.mesh();
  const double tp = std::pow(pc.horizon, 1.0 / lp.p);
  double c_hat = 0.0;
  std::array<double, 4> lorentz_const{};
  auto weak_series = [&](const TrajectoryField& g) {
    std::vector<double> s;
    for (std::size_t i = 0; i < g.size(); ++i) s.push_back(lorentz_norm(g[i], lp.q));
    return s;
  };
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [u, v] = pairs[k];
    const TrajectoryField b = bilinear_B_trajectory(u, v, pc.model.beta, pc.rule);
    const auto bound = duhamel_lorentz_bound(u, v, pc.model.beta, lp.q);
    const auto sb = weak_series(b);
    double worst = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) worst = std::max(worst, sb[i] / bound[i]);
    row("lorentz_duhamel_ratio", std::to_string(k), worst, 1.1, worst <= 1.1);

    const double xb = x_norm(b, pc.model, windows, pc.horizon).value;
    const double xu = x_norm(u, pc.model, windows, pc.horizon).value;
    const double xv = x_norm(v, pc.model, windows, pc.horizon).value;
    c_hat = std::max(c_hat, xb / (xu * xv));

    const auto su = weak_series(u);
    const auto sv = weak_series(v);
    const double bp = time_lorentz_norm(sb, mesh, lp.p);
    const double up = time_lorentz_norm(su, mesh, lp.p);
    const double vp = time_lorentz_norm(sv, mesh, lp.p);
    const double binf = *std::max_element(sb.begin(), sb.end());
    const double uinf = *std::max_element(su.begin(), su.end());
    const double vinf = *std::max_element(sv.begin(), sv.end());
    lorentz_const[0] = std::max(lorentz_const[0], bp / (up * vp));
    lorentz_const[1] = std::max(lorentz_const[1], binf / (uinf * vp));
    lorentz_const[2] = std::max(lorentz_const[2], binf / (tp * uinf * vinf));
    lorentz_const[3] = std::max(lorentz_const[3], bp / (tp * uinf * vp));
  }
  row("x_bilinear_constant", "max", c_hat, kInf, std::isfinite(c_hat));
  const char* names[4] = {"lorentz_pp_constant", "lorentz_inf_p_constant", "lorentz_inf_inf_constant",
                          "lorentz_inf_p_to_p_constant"};
  for (int i = 0; i < 4; ++i) row(names[i], "max", lorentz_const[static_cast<std::size_t>(i)], kInf, std::isfinite(lorentz_const[static_cast<std::size_t>(i)]));

  // Oseen kernel decay and L^r scaling.
  const KernelGridSpec spec = cfg.kernel_grid();
  const int n = cfg.kernel_dim;
  for (double beta : cfg.kernel_betas) {
    std::vector<double> consts, strong;
    for (double time : cfg.kernel_times) {
      const KernelTable tab = oseen_kernel_table(beta, time, n, spec);
      consts.push_back(fit_decay_constant(tab, beta, time, n));
      strong.push_back(oseen_kernel_norms(beta, time, n, cfg.kernel_r, spec).strong);
    }
    const double spread = *std::max_element(consts.begin(), consts.end()) / *std::min_element(consts.begin(), consts.end());
    row("oseen_decay_spread", "beta=" + fmt(beta), spread, 2.0, spread <= 2.0);
    const double expect = (n / cfg.kernel_r - (n + 1.0)) / (2.0 * beta);
    const double got = slope(cfg.kernel_times, strong);
    const double rel = std::abs(got - expect) / std::abs(expect);
    row("oseen_lr_slope_rel_error", "beta=" + fmt(beta), rel, 0.05, rel <= 0.05);
  }

  // Small-time decay of t^{1/p} ||e^{-t(-Delta)^beta} u0||_{q,inf}.
  const auto u0 = generate_initial_data(cfg.data_kind, cfg.data_amplitude, cfg.seed, grid);
  const Profile prof = decay_profile(caloric_extension(u0, mesh, pc.model.beta), lp);
  const bool shrinking = prof.head[0] < prof.head[1] && prof.head[1] < prof.head[2];
  row("caloric_decay_head", "t1", prof.head[0], prof.head[1], shrinking && std::isfinite(prof.sup));
  t.write(ctx.path("inequalities.csv"));
  if (!ok) throw InvariantViolation("at least one inequality check failed (see inequalities.csv)");
}

void cmd_kernel_table(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const KernelGridSpec spec = cfg.kernel_grid();
  const int n = cfg.kernel_dim;
  CsvTable t({"beta", "t", "component", "r", "value"});
  CsvTable d({"beta", "t", "decay_constant", "lr_norm", "weak_lr_norm"});
  for (double beta : cfg.kernel_betas) {
    for (double time : cfg.kernel_times) {
      const KernelTable oseen = oseen_kernel_table(beta, time, n, spec);
      const KernelTable heat = heat_kernel_table(beta, time, oseen.radii, n, spec);
      auto emit = [&](const std::string& prefix, const KernelTable& tab) {
        for (const auto& s : tab.series) {
          const std::string comp = prefix + "/" + ray_name(s.ray) + "/" + s.component;
          for (std::size_t i = 0; i < tab.radii.size(); ++i) {
            t.add({fmt(beta), fmt(time), comp, fmt(tab.radii[i]), fmt(s.values[i])});
          }
        }
      };
      emit("heat", heat);
      for (std::size_t i = 0; i < heat.analytic.size(); ++i) {
        t.add({fmt(beta), fmt(time), "gaussian/axis/scalar", fmt(heat.radii[i]), fmt(heat.analytic[i])});
      }
      emit("oseen", oseen);
      const KernelNorms nr = oseen_kernel_norms(beta, time, n, cfg.kernel_r, spec);
      d.add({fmt(beta), fmt(time), fmt(fit_decay_constant(oseen, beta, time, n)), fmt(nr.strong), fmt(nr.weak)});
    }
  }
  t.write(ctx.path("kernel.csv"));
  d.write(ctx.path("kernel_decay.csv"));
}

void cmd_decay_profile(Context& ctx) {
  const Prepared pr = prepare(ctx.cfg, true);
  const LorentzParams lp = ctx.cfg.lorentz();
  write_snapshot(ctx.path("initial.fgns"), pr.u0, 0.0);
  const PicardResult res = solve_mild(pr.u0, pr.picard);
  write_trajectory(ctx.path("solution.fgns"), res.solution);
  trace_table(res.trace).write(ctx.path("trace.csv"));
  const Profile cal = decay_profile(caloric_extension(pr.u0, res.solution.mesh(), pr.picard.model.beta), lp);
  const Profile mild = decay_profile(res.solution, lp);
  CsvTable t({"t", "caloric", "mild"});
  for (std::size_t i = 0; i < mild.times.size(); ++i) t.add({fmt(mild.times[i]), fmt(cal.values[i]), fmt(mild.values[i])});
  t.write(ctx.path("decay.csv"));
  CsvTable sum = summary_head(pr);
  sum.add({"p", fmt(lp.p)});
  sum.add({"q", fmt(lp.q)});
  sum.add({"caloric_sup", fmt(cal.sup)});
  sum.add({"mild_sup", fmt(mild.sup)});
  for (int i = 0; i < 3; ++i) sum.add({"mild_head_" + std::to_string(i), fmt(mild.head[static_cast<std::size_t>(i)])});
  add_trace_summary(sum, res.trace);
  sum.write(ctx.path("summary.csv"));
  if (!std::isfinite(mild.sup)) throw InvariantViolation("decay profile sup is not finite");
  if (!res.trace.converged) throw NonConvergence("picard iteration hit solver.max_iter without converging");
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> m{
      {"solve-mild", cmd_solve_mild},       {"solve-mollified", cmd_solve_mollified},
      {"compare-eps", cmd_compare_eps},     {"norms", cmd_norms},
      {"verify-inequalities", cmd_verify},  {"kernel-table", cmd_kernel_table},
      {"decay-profile", cmd_decay_profile},
  };
  return m;
}

void write_manifest(Context& ctx, const std::string& sub, const RunResult& res) {
  nlohmann::ordered_json j;
  j["tool"] = "fgns";
  j["version"] = kToolVersion;
  j["subcommand"] = sub;
  j["seed"] = ctx.cfg.seed;
  j["config"] = ctx.cfg.echo();
  j["fft_library"] = fft_library_version();
#ifdef __VERSION__
  j["compiler"] = __VERSION__;
#endif
  j["thread_limit"] = thread_limit();
  j["status"] = res.exit_code == kExitOk ? "ok" : "failed";
  j["exit_code"] = res.exit_code;
  j["message"] = res.message;
  j["partial"] = res.exit_code != kExitOk;
  j["artifacts"] = ctx.artifacts;
  std::ofstream os(ctx.dir / "manifest.json", std::ios::trunc);
  os << j.dump(2) << '\n';
  // Re-runnable config in the input format.
  std::ofstream cs(ctx.dir / "config.txt", std::ios::trunc);
  for (const auto& [k, v] : ctx.cfg.echo()) cs << k << " = " << v << '\n';
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, f] : commands()) out.push_back(k);
    return out;
  }();
  return names;
}

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& subcommand) {
  RunResult res;
  const auto it = commands().find(subcommand);
  if (it == commands().end()) {
    res.exit_code = kExitConfig;
    res.message = "unknown subcommand '" + subcommand + "'";
    return res;
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
    return res;
  }
  Context ctx{cfg, fs::path(cfg.out), {}};
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec) {
    res.exit_code = kExitConfig;
    res.message = "cannot create output directory " + cfg.out + ": " + ec.message();
    return res;
  }
  try {
    it->second(ctx);
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const NonConvergence& e) {
    res.exit_code = kExitNonConvergence;
    res.message = e.what();
  } catch (const InvariantViolation& e) {
    res.exit_code = kExitInvariant;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = kExitInvariant;
    res.message = std::string("unexpected failure: ") + e.what();
  }
  res.artifacts = ctx.artifacts;
  write_manifest(ctx, subcommand, res);
  return res;
}

}  // namespace fgns
