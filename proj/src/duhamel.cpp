#include "fgns/duhamel.hpp"

#include <cmath>
#include <string>

#include "fgns/errors.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

void QuadratureRule::validate() const {
  if (!(grading >= 1.0)) throw ConfigError("quadrature grading must be >= 1");
  if (panels < 1) throw ConfigError("quadrature needs at least one panel");
}

std::vector<double> QuadratureRule::nodes(double t) const {
  std::vector<double> s(static_cast<std::size_t>(panels) + 1);
  for (int j = 0; j <= panels; ++j) {
    s[static_cast<std::size_t>(j)] = t * (1.0 - std::pow(1.0 - static_cast<double>(j) / panels, grading));
  }
  s.front() = 0.0;
  s.back() = t;
  return s;
}

void panel_weights(double z, double& w_left, double& w_right) {
  if (z < 0.5) {
    // int_0^1 e^{-zy} y dy = sum (-z)^m / (m! (m + 2)),  int_0^1 e^{-zy} dy = sum (-z)^m / (m + 1)!
    double term = 1.0;  // (-z)^m / m!
    double first = 0.0;
    double zeroth = 0.0;
    for (int m = 0; m < 24; ++m) {
      first += term / (m + 2);
      zeroth += term / (m + 1);
      term *= -z / (m + 1);
    }
    w_left = first;
    w_right = zeroth - first;
    return;
  }
  const double ez = std::exp(-z);
  w_left = (1.0 - ez * (1.0 + z)) / (z * z);
  w_right = (1.0 - ez) / z - w_left;
}

namespace {

void check_pair(const TrajectoryField& u, const TrajectoryField& v) {
  if (!(u.mesh() == v.mesh())) throw ConfigError("bilinear_B: trajectory meshes differ");
  if (!(u.grid() == v.grid())) throw ConfigError("bilinear_B: trajectory grids differ");
}

SpectralVectorField flux_at(const TrajectoryField& u, const TrajectoryField& v, double s) {
  const SpectralVectorField us = u.at(s);
  if (&u == &v) return projected_flux(us, us);
  const SpectralVectorField vs = v.at(s);
  return projected_flux(us, vs);
}

SpectralVectorField duhamel_at(const TrajectoryField& u, const TrajectoryField& v, std::size_t node, double beta,
                               const QuadratureRule& rule, const std::vector<double>& lambda) {
  const TorusGrid& grid = u.grid();
  SpectralVectorField acc(grid);
  acc.set_divergence_free(true, 1e-10);
  const double t = u.mesh()[node];
  if (node == 0 || t == 0.0) return acc;
  (void)beta;

  const std::vector<double> s = rule.nodes(t);
  SpectralVectorField left = flux_at(u, v, s[0]);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    SpectralVectorField right = flux_at(u, v, s[j + 1]);
    const double h = s[j + 1] - s[j];
    const double lag = t - s[j + 1];
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      if (grid.dealiased_out(lin)) continue;  // flux vanishes there
      const double lam = lambda[lin];
      double wl = 0.0;
      double wr = 0.0;
      panel_weights(lam * h, wl, wr);
      const double decay = lag == 0.0 ? 1.0 : std::exp(-lag * lam);
      const double cl = decay * h * wl;
      const double cr = decay * h * wr;
      for (int c = 0; c < acc.components(); ++c) {
        acc.component(c)[lin] += cl * left.component(c)[lin] + cr * right.component(c)[lin];
      }
    }
    left = std::move(right);
  }
  return acc;
}

std::vector<double> symbol_table(const TorusGrid& grid, double beta) {
  std::vector<double> lambda(grid.size());
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const double x2 = grid.xi_squared(lin);
    lambda[lin] = x2 == 0.0 ? 0.0 : std::pow(x2, beta);
  }
  return lambda;
}

void check_beta(double beta) {
  if (!(beta > 0.5 && beta <= 1.0)) throw ConfigError("beta must lie in (1/2, 1]");
}

}  // namespace

SpectralVectorField bilinear_B(const TrajectoryField& u, const TrajectoryField& v, std::size_t node, double beta,
                               const QuadratureRule& rule) {
  check_pair(u, v);
  check_beta(beta);
  rule.validate();
  if (node >= u.mesh().size()) throw ConfigError("bilinear_B: node index out of range");
  return duhamel_at(u, v, node, beta, rule, symbol_table(u.grid(), beta));
}

SpectralVectorField bilinear_B_at(const TrajectoryField& u, const TrajectoryField& v, double t, double beta,
                                  const QuadratureRule& rule) {
  const auto& nodes = u.mesh().nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == t) return bilinear_B(u, v, i, beta, rule);
  }
  throw ConfigError("bilinear_B: time " + std::to_string(t) + " is not a mesh node");
}

TrajectoryField bilinear_B_trajectory(const TrajectoryField& u, const TrajectoryField& v, double beta,
                                      const QuadratureRule& rule, Exec exec) {
  check_pair(u, v);
  check_beta(beta);
  rule.validate();
  const auto lambda = symbol_table(u.grid(), beta);
  TrajectoryField out(u.mesh(), u.grid());
  const auto n = static_cast<long>(u.mesh().size());
  if (exec == Exec::serial) {
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = duhamel_at(u, v, static_cast<std::size_t>(i), beta, rule, lambda);
  } else {
    // later nodes carry more work; dynamic scheduling balances them
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = n - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = duhamel_at(u, v, static_cast<std::size_t>(i), beta, rule, lambda);
    }
  }
  return out;
}

SpectralVectorField bilinear_B_mollified(const TrajectoryField& u, const MollifierSpec& spec, std::size_t node,
                                         double beta, const QuadratureRule& rule) {
  return bilinear_B(mollify(u, spec), u, node, beta, rule);
}

TrajectoryField bilinear_B_mollified_trajectory(const TrajectoryField& u, const MollifierSpec& spec, double beta,
                                                const QuadratureRule& rule, Exec exec) {
  return bilinear_B_trajectory(mollify(u, spec), u, beta, rule, exec);
}

}  // namespace fgns
