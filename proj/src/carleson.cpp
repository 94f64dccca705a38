#include "fgns/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fgns/errors.hpp"

namespace fgns {

CarlesonWindowSet CarlesonWindowSet::dyadic(const TorusGrid& grid, double horizon, double beta, int levels, int stride) {
  if (!(horizon > 0.0)) throw ConfigError("window horizon must be positive");
  if (levels < 0) throw ConfigError("windows.J must be >= 0");
  CarlesonWindowSet set;
  set.stride = stride > 0 ? stride : std::max(1, grid.n_axis() / 16);
  // strictly inside r^{2 beta} < T
  const double r_max = std::pow(horizon, 1.0 / (2.0 * beta)) * (1.0 - 1e-12);
  for (int j = 0; j <= levels; ++j) set.radii.push_back(r_max * std::ldexp(1.0, -j));
  return set;
}

CarlesonWindowSet CarlesonWindowSet::restricted_to(double horizon, double beta) const {
  CarlesonWindowSet out;
  out.stride = stride;
  for (double r : radii) {
    if (std::pow(r, 2.0 * beta) < horizon) out.radii.push_back(r);
  }
  return out;
}

void CarlesonWindowSet::validate(const TorusGrid& grid, double horizon, double beta) const {
  if (radii.empty()) throw ConfigError("window set is empty");
  if (stride < 1) throw ConfigError("window stride must be >= 1");
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("window radii must be positive");
    if (!(std::pow(r, 2.0 * beta) < horizon)) {
      throw ConfigError("window radius " + std::to_string(r) + " has r^{2 beta} >= T");
    }
    if (!(r < 0.5 * grid.box_len())) throw ConfigError("window radius exceeds half the box");
  }
}

std::vector<double> singular_time_weights(std::span<const double> times, double upper, double a) {
  std::vector<double> w(times.size(), 0.0);
  if (times.size() < 2) throw ConfigError("time weights need at least two nodes");
  if (upper > times.back() * (1.0 + 1e-12)) throw ConfigError("window time exceeds the trajectory horizon");
  const double p0 = 1.0 - a;
  const double p1 = 2.0 - a;
  auto prim0 = [&](double t) { return std::pow(t, p0) / p0; };
  auto prim1 = [&](double t) { return std::pow(t, p1) / p1; };
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double ta = times[i];
    const double tb = times[i + 1];
    if (ta >= upper) break;
    const double end = std::min(tb, upper);
    const double h = tb - ta;
    const double i0 = prim0(end) - prim0(ta);
    const double i1 = prim1(end) - prim1(ta);
    w[i] += (tb * i0 - i1) / h;
    w[i + 1] += (i1 - ta * i0) / h;
  }
  return w;
}

std::vector<MultiIndex> ball_offsets(const TorusGrid& grid, double radius) {
  const double h = grid.spacing();
  const int reach = static_cast<int>(std::floor(radius / h));
  std::vector<MultiIndex> out;
  const int dim = grid.dim();
  const double r2 = radius * radius;
  for (int a = -reach; a <= reach; ++a) {
    for (int b = -reach; b <= reach; ++b) {
      if (dim == 2) {
        if ((a * a + b * b) * h * h < r2) out.push_back({a, b, 0});
        continue;
      }
      for (int c = -reach; c <= reach; ++c) {
        if ((a * a + b * b + c * c) * h * h < r2) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

double ball_volume(int dim, double radius) {
  return dim == 2 ? std::numbers::pi * radius * radius : 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

namespace {

bool better(const CarlesonHit& a, const CarlesonHit& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.radius != b.radius) return a.radius > b.radius;
  return a.center < b.center;
}

struct RadiusPlan {
  double radius = 0.0;
  double scale = 0.0;  // prefactor * |B_r| / #cells
  std::vector<double> weights;
  std::size_t last_node = 0;
  std::vector<MultiIndex> offsets;
};

std::vector<RadiusPlan> plan_radii(const CarlesonProblem& pb) {
  const TorusGrid& grid = *pb.grid;
  const int n = grid.dim();
  const double a = pb.alpha / pb.beta;
  std::vector<RadiusPlan> plans;
  for (double r : pb.radii) {
    RadiusPlan p;
    p.radius = r;
    p.weights = singular_time_weights(pb.times, std::pow(r, 2.0 * pb.beta), a);
    p.last_node = 0;
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
      if (p.weights[i] != 0.0) p.last_node = i;
    }
    p.offsets = ball_offsets(grid, r);
    const double pref = std::pow(r, 2.0 * pb.alpha - n + 2.0 * pb.beta - 2.0);
    p.scale = pref * ball_volume(n, r) / static_cast<double>(p.offsets.size());
    plans.push_back(std::move(p));
  }
  return plans;
}

std::vector<std::size_t> centers(const TorusGrid& grid, int stride) {
  std::vector<std::size_t> out;
  const int n = grid.n_axis();
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    bool keep = true;
    for (int d = 0; d < grid.dim(); ++d) keep = keep && idx[static_cast<std::size_t>(d)] % stride == 0;
    if (keep) out.push_back(lin);
  }
  (void)n;
  return out;
}

double window_value(const CarlesonProblem& pb, const RadiusPlan& plan, std::size_t center,
                    std::vector<std::size_t>& cells) {
  const TorusGrid& grid = *pb.grid;
  const int n = grid.n_axis();
  const MultiIndex c = grid.multi_index(center);
  cells.resize(plan.offsets.size());
  for (std::size_t o = 0; o < plan.offsets.size(); ++o) {
    MultiIndex idx{0, 0, 0};
    for (int d = 0; d < grid.dim(); ++d) {
      const auto ud = static_cast<std::size_t>(d);
      idx[ud] = ((c[ud] + plan.offsets[o][ud]) % n + n) % n;
    }
    cells[o] = grid.linear_index(idx);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i <= plan.last_node; ++i) {
    const double w = plan.weights[i];
    if (w == 0.0) continue;
    const RealArray& dens = pb.density[i];
    double s = 0.0;
    for (std::size_t cell : cells) s += dens[cell];
    acc += w * s;
  }
  return plan.scale * acc;
}

void check_problem(const CarlesonProblem& pb) {
  if (pb.grid == nullptr) throw ConfigError("carleson scan: missing grid");
  if (pb.times.size() != pb.density.size()) throw ConfigError("carleson scan: one density per node required");
  if (pb.radii.empty()) throw ConfigError("carleson scan: no radii");
}

}  // namespace

CarlesonHit carleson_scan_serial(const CarlesonProblem& pb) {
  check_problem(pb);
  const auto plans = plan_radii(pb);
  const auto ctr = centers(*pb.grid, pb.stride);
  CarlesonHit best{-1.0, 0.0, 0};
  std::vector<std::size_t> cells;
  for (const auto& plan : plans) {
    for (std::size_t c : ctr) {
      const CarlesonHit hit{window_value(pb, plan, c, cells), plan.radius, c};
      if (better(hit, best)) best = hit;
    }
  }
  return best;
}

CarlesonHit carleson_scan_omp(const CarlesonProblem& pb) {
  check_problem(pb);
  const auto plans = plan_radii(pb);
  const auto ctr = centers(*pb.grid, pb.stride);
  CarlesonHit best{-1.0, 0.0, 0};
  const auto nc = static_cast<long>(ctr.size());
  for (const auto& plan : plans) {
#pragma omp parallel
    {
      CarlesonHit local{-1.0, 0.0, 0};
      std::vector<std::size_t> cells;
#pragma omp for schedule(static) nowait
      for (long k = 0; k < nc; ++k) {
        const std::size_t c = ctr[static_cast<std::size_t>(k)];
        const CarlesonHit hit{window_value(pb, plan, c, cells), plan.radius, c};
        if (better(hit, local)) local = hit;
      }
#pragma omp critical(fgns_carleson_merge)
      {
        if (better(local, best)) best = local;
      }
    }
  }
  return best;
}

CarlesonHit carleson_scan(const CarlesonProblem& problem, Exec exec) {
  return exec == Exec::serial ? carleson_scan_serial(problem) : carleson_scan_omp(problem);
}

}  // namespace fgns
