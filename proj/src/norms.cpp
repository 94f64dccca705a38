#include "fgns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fgns/errors.hpp"
#include "fgns/rearrangement.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

namespace {

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

RealArray squared(RealArray v) {
  for (double& x : v) x *= x;
  return v;
}

}  // namespace

void LorentzParams::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("lorentz: dim must be 2 or 3");
  if (!(beta > 0.5 && beta <= 1.0)) throw ConfigError("lorentz: beta must lie in (1/2, 1]");
  const double p_min = 2.0 * beta / (2.0 * beta - 1.0);
  const double q_min = dim / (2.0 * beta - 1.0);
  if (!(p > p_min)) throw ConfigError("lorentz.p must exceed " + std::to_string(p_min));
  if (!(q > q_min)) throw ConfigError("lorentz.q must exceed " + std::to_string(q_min));
  const double gap = beta - 0.5 - beta * inv(p) - dim * inv(q) / 2.0;
  if (std::abs(gap) > 1e-12) {
    throw ConfigError("lorentz: beta - 1/2 != beta/p + n/(2q) (gap " + std::to_string(gap) + ")");
  }
}

LorentzParams LorentzParams::from_q(double q, double beta, int dim) {
  const double inv_p = (beta - 0.5 - dim * inv(q) / 2.0) / beta;
  LorentzParams lp{inv_p > 0.0 ? 1.0 / inv_p : -1.0, q, beta, dim};
  lp.validate();
  return lp;
}

LorentzParams LorentzParams::from_p(double p, double beta, int dim) {
  const double inv_q = 2.0 * (beta - 0.5 - beta * inv(p)) / dim;
  LorentzParams lp{p, inv_q > 0.0 ? 1.0 / inv_q : -1.0, beta, dim};
  lp.validate();
  return lp;
}

NormReport q_norm_loc(const SpectralVectorField& u0, const ModelParams& params, const CarlesonWindowSet& windows,
                      double horizon, const QNormOptions& opts) {
  params.validate();
  const TorusGrid& grid = u0.grid();
  windows.validate(grid, horizon, params.beta);
  if (opts.nodes_per_window < 1 || !(opts.grading >= 1.0)) throw ConfigError("q_norm_loc: bad time sampling");

  std::vector<double> times{0.0};
  for (double r : windows.radii) {
    const double top = std::pow(r, 2.0 * params.beta);
    for (int i = 1; i <= opts.nodes_per_window; ++i) {
      times.push_back(top * std::pow(static_cast<double>(i) / opts.nodes_per_window, opts.grading));
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<RealArray> density(times.size());
#pragma omp parallel for schedule(dynamic) if (opts.exec == Exec::parallel)
  for (long i = 0; i < static_cast<long>(times.size()); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    density[ui] = squared(fractional_semigroup(u0, times[ui], params.beta).magnitude());
  }

  CarlesonProblem pb;
  pb.grid = &grid;
  pb.times = times;
  pb.density = density;
  pb.radii = windows.radii;
  pb.stride = windows.stride;
  pb.alpha = params.alpha;
  pb.beta = params.beta;
  const CarlesonHit hit = carleson_scan(pb, opts.exec);

  NormReport rep;
  rep.name = "q_norm_loc";
  rep.value = std::sqrt(std::max(hit.value, 0.0));
  rep.radius = hit.radius;
  rep.center = hit.center;
  rep.carleson_term = rep.value;
  return rep;
}

NormReport x_norm(const TrajectoryField& g, const ModelParams& params, const CarlesonWindowSet& windows,
                  double horizon, Exec exec) {
  params.validate();
  const TimeMesh& mesh = g.mesh();
  if (mesh.size() < 2) throw ConfigError("x_norm: empty mesh");
  if (!(horizon > 0.0) || horizon > mesh.horizon() * (1.0 + 1e-12)) {
    throw ConfigError("x_norm: horizon must lie in (0, mesh horizon]");
  }
  const TorusGrid& grid = g.grid();
  double r_top = 0.0;
  if (!windows.radii.empty()) {
    windows.validate(grid, horizon, params.beta);
    for (double r : windows.radii) r_top = std::max(r_top, std::pow(r, 2.0 * params.beta));
  }

  // Nodes needed: all t_i <= T for the sup term, and up to the first node
  // covering the largest window for the Carleson term.
  std::size_t n_sup = 0;
  while (n_sup < mesh.size() && mesh[n_sup] <= horizon * (1.0 + 1e-12)) ++n_sup;
  std::size_t n_carl = 0;
  if (r_top > 0.0) {
    n_carl = 1;
    while (n_carl < mesh.size() && mesh[n_carl - 1] < r_top) ++n_carl;
  }
  const std::size_t n_need = std::max(n_sup, n_carl);

  std::vector<RealArray> mags(n_need);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long i = 0; i < static_cast<long>(n_need); ++i) {
    mags[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)].magnitude();
  }

  NormReport rep;
  rep.name = "x_norm";
  const double expo = 1.0 - 1.0 / (2.0 * params.beta);
  for (std::size_t i = 1; i < n_sup; ++i) {
    const double m = *std::max_element(mags[i].begin(), mags[i].end());
    const double v = std::pow(mesh[i], expo) * m;
    if (v > rep.sup_term) {
      rep.sup_term = v;
      rep.time = mesh[i];
    }
  }
  if (n_carl > 0) {
    for (std::size_t i = 0; i < n_carl; ++i) {
      for (double& x : mags[i]) x *= x;
    }
    const std::vector<double> times(mesh.nodes().begin(), mesh.nodes().begin() + static_cast<long>(n_carl));
    CarlesonProblem pb;
    pb.grid = &grid;
    pb.times = times;
    pb.density = std::span<const RealArray>(mags.data(), n_carl);
    pb.radii = windows.radii;
    pb.stride = windows.stride;
    pb.alpha = params.alpha;
    pb.beta = params.beta;
    const CarlesonHit hit = carleson_scan(pb, exec);
    rep.carleson_term = std::sqrt(std::max(hit.value, 0.0));
    rep.radius = hit.radius;
    rep.center = hit.center;
  }
  rep.value = rep.sup_term + rep.carleson_term;
  return rep;
}

int seminorm_grid_limit(int dim) { return dim == 2 ? 32 : 16; }

NormReport q_seminorm_double_integral(const TorusGrid& grid, std::span<const double> f, const ModelParams& params,
                                      Exec exec) {
  params.validate();
  const int n = grid.dim();
  const int N = grid.n_axis();
  if (N > seminorm_grid_limit(n)) {
    throw ConfigError("q_seminorm: N = " + std::to_string(N) + " exceeds the limit " +
                      std::to_string(seminorm_grid_limit(n)) + " for the O(N^{2d}) double sum");
  }
  if (f.size() != grid.size()) throw ConfigError("q_seminorm: field size does not match the grid");
  const double h = grid.spacing();
  const double s = n + 2.0 * (params.alpha - params.beta + 1.0);
  const double cell2 = std::pow(h, 2.0 * n);

  NormReport rep;
  rep.name = "q_seminorm";
  double best = -1.0;
  for (int m = N; m >= 2; m /= 2) {
    // Kernel by index difference, 0 on the diagonal.
    const int span = m;
    std::vector<double> kern(static_cast<std::size_t>(span * span * (n == 3 ? span : 1)), 0.0);
    for (std::size_t k = 0; k < kern.size(); ++k) {
      const int a = static_cast<int>(k) % span;
      const int b = (static_cast<int>(k) / span) % span;
      const int c = n == 3 ? static_cast<int>(k) / (span * span) : 0;
      const double d2 = static_cast<double>(a * a + b * b + c * c);
      kern[k] = d2 == 0.0 ? 0.0 : std::pow(std::sqrt(d2) * h, -s);
    }
    const double side = m * h;
    const double pref = std::pow(side, 2.0 * (params.alpha + params.beta - 1.0) - n);
    const int per_axis = N / m;
    const int cubes = n == 3 ? per_axis * per_axis * per_axis : per_axis * per_axis;
    const int cells = n == 3 ? m * m * m : m * m;
    for (int cube = 0; cube < cubes; ++cube) {
      const MultiIndex origin{(cube % per_axis) * m, (cube / per_axis % per_axis) * m,
                              n == 3 ? cube / (per_axis * per_axis) * m : 0};
      std::vector<MultiIndex> local(static_cast<std::size_t>(cells));
      std::vector<double> vals(static_cast<std::size_t>(cells));
      for (int c = 0; c < cells; ++c) {
        const MultiIndex off{c % m, c / m % m, n == 3 ? c / (m * m) : 0};
        local[static_cast<std::size_t>(c)] = off;
        MultiIndex g{origin[0] + off[0], origin[1] + off[1], origin[2] + off[2]};
        vals[static_cast<std::size_t>(c)] = f[grid.linear_index(g)];
      }
      std::vector<double> rows(static_cast<std::size_t>(cells), 0.0);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
      for (int x = 0; x < cells; ++x) {
        const auto ux = static_cast<std::size_t>(x);
        double acc = 0.0;
        for (int y = 0; y < cells; ++y) {
          const auto uy = static_cast<std::size_t>(y);
          const int a = std::abs(local[ux][0] - local[uy][0]);
          const int b = std::abs(local[ux][1] - local[uy][1]);
          const int c = std::abs(local[ux][2] - local[uy][2]);
          const double w = kern[static_cast<std::size_t>(a + span * (b + span * c))];
          const double d = vals[ux] - vals[uy];
          acc += d * d * w;
        }
        rows[ux] = acc;
      }
      double total = 0.0;
      for (double r : rows) total += r;
      const double value = pref * total * cell2;
      if (value > best) {
        best = value;
        rep.radius = side;
        rep.center = grid.linear_index(origin);
      }
    }
  }
  rep.sup_term = std::max(best, 0.0);
  rep.value = std::sqrt(rep.sup_term);
  return rep;
}

double lorentz_norm(const TorusGrid& grid, std::span<const double> magnitudes, double q) {
  if (!(q > 1.0)) throw ConfigError("lorentz norm requires q > 1");
  return weak_norm_uniform(magnitudes, grid.cell_volume(), q);
}

double lorentz_norm(const SpectralVectorField& u, double q) {
  if (!(q > 1.0)) throw ConfigError("lorentz norm requires q > 1");
  const RealArray mag = u.magnitude();
  return weak_norm_uniform(mag, u.grid().cell_volume(), q);
}

double time_lorentz_norm(std::span<const double> series, const TimeMesh& mesh, double p) {
  if (!(p > 1.0)) throw ConfigError("time lorentz norm requires p > 1");
  if (series.size() != mesh.size()) throw ConfigError("time lorentz norm: one value per node required");
  std::vector<double> vals(series.begin() + 1, series.end());
  std::vector<double> cells(mesh.size() - 1);
  for (std::size_t i = 1; i < mesh.size(); ++i) cells[i - 1] = mesh[i] - mesh[i - 1];
  return weak_norm(vals, cells, p);
}

LevelSplit level_split(const TrajectoryField& u, double level, double p, double q) {
  if (!(level > 0.0)) throw ConfigError("level_split: level must be positive");
  LevelSplit out{level, TrajectoryField(u.mesh(), u.grid()), TrajectoryField(u.mesh(), u.grid()), {}, 0.0, 0.0};
  const TimeMesh& mesh = u.mesh();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double nrm = lorentz_norm(u[i], q);
    out.node_norms.push_back(nrm);
    if (nrm > level) {
      out.above[i] = u[i];
      if (i > 0) out.measure += mesh[i] - mesh[i - 1];
    } else {
      out.below[i] = u[i];
    }
  }
  out.c_level = std::pow(level, p) * out.measure;
  return out;
}

namespace {

Profile finish_profile(std::vector<double> times, std::vector<double> values) {
  Profile prof;
  prof.times = std::move(times);
  prof.values = std::move(values);
  for (std::size_t i = 0; i < prof.values.size(); ++i) {
    if (prof.values[i] > prof.sup) {
      prof.sup = prof.values[i];
      prof.sup_time = prof.times[i];
    }
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < prof.times.size() && k < 3; ++i) {
    if (prof.times[i] > 0.0) prof.head[k++] = prof.values[i];
  }
  return prof;
}

}  // namespace

Profile besov_norm(const SpectralVectorField& u0, double alpha, double beta, double q, const TimeMesh& mesh) {
  if (!(alpha > 0.0)) throw ConfigError("besov norm requires alpha > 0");
  if (!(q > 1.0)) throw ConfigError("besov norm requires q > 1");
  if (mesh.size() < 2 || !(mesh[1] <= 1e-3)) {
    throw ConfigError("besov norm: mesh must reach below t = 1e-3 to resolve the small-time limit");
  }
  std::vector<double> times;
  for (std::size_t i = 1; i < mesh.size() && mesh[i] < 1.0; ++i) times.push_back(mesh[i]);
  std::vector<double> values(times.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(times.size()); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    values[ui] = std::pow(times[ui], alpha / (2.0 * beta)) *
                 lorentz_norm(fractional_semigroup(u0, times[ui], beta), q);
  }
  return finish_profile(std::move(times), std::move(values));
}

Profile decay_profile(const TrajectoryField& u, const LorentzParams& lp) {
  lp.validate();
  std::vector<double> times = u.mesh().nodes();
  std::vector<double> values(times.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(times.size()); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    values[ui] = std::pow(times[ui], inv(lp.p)) * lorentz_norm(u[ui], lp.q);
  }
  return finish_profile(std::move(times), std::move(values));
}

std::vector<double> singular_convolution_weights(std::span<const double> times, std::size_t node, double a) {
  if (!(a >= 0.0 && a < 1.0)) throw ConfigError("singular weights need 0 <= a < 1");
  if (node >= times.size()) throw ConfigError("singular weights: node out of range");
  std::vector<double> w(times.size(), 0.0);
  const double t = times[node];
  for (std::size_t i = 0; i < node; ++i) {
    const double ta = times[i];
    const double tb = times[i + 1];
    const double h = tb - ta;
    const double lo = t - tb;
    const double hi = t - ta;
    const double j0 = (std::pow(hi, 1.0 - a) - std::pow(lo, 1.0 - a)) / (1.0 - a);
    const double j1 = (std::pow(hi, 2.0 - a) - std::pow(lo, 2.0 - a)) / (2.0 - a);
    w[i] += ((tb - t) * j0 + j1) / h;
    w[i + 1] += ((t - ta) * j0 - j1) / h;
  }
  return w;
}

std::vector<double> duhamel_lorentz_bound(const TrajectoryField& u, const TrajectoryField& v, double beta, double q) {
  if (!(u.mesh() == v.mesh())) throw ConfigError("lorentz bound: meshes differ");
  const int n = u.grid().dim();
  const double a = (1.0 + n * inv(q)) / (2.0 * beta);
  if (!(a < 1.0)) throw ConfigError("lorentz bound: exponent (1 + n/q)/(2 beta) must be < 1");
  std::vector<double> prod(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) prod[i] = lorentz_norm(u[i], q) * lorentz_norm(v[i], q);
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t k = 1; k < u.size(); ++k) {
    const auto w = singular_convolution_weights(u.mesh().nodes(), k, a);
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += w[j] * prod[j];
    out[k] = acc;
  }
  return out;
}

}  // namespace fgns
