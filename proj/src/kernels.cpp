#include "fgns/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fgns/errors.hpp"
#include "fgns/fft.hpp"
#include "fgns/grid.hpp"
#include "fgns/rearrangement.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {
namespace {

void check_args(double beta, double t, int dim) {
  if (!(t > 0.0)) throw ConfigError("kernel time must be positive");
  if (!(beta > 0.5 && beta <= 1.0)) throw ConfigError("kernel beta must lie in (1/2, 1]");
  if (dim != 2 && dim != 3) throw ConfigError("kernel dimension must be 2 or 3");
}

// Sums of a symbol grouped by the projection of k onto a ray: the axis ray
// groups by k_0, the diagonal ray by k_0 + ... + k_{n-1}. Evaluating the
// kernel at r e reduces to a one-dimensional trigonometric sum over the key.
struct RayMarginal {
  int offset = 0;               // key + offset indexes `sums`
  std::vector<double> sums;     // one per key, per component: sums[c * keys + key]
  int keys = 0;
};

template <class Visit>
void for_each_mode(int dim, int n, Visit&& visit) {
  int k[3] = {0, 0, 0};
  const int lo = -n / 2;
  const int hi = n / 2;
  if (dim == 2) {
    for (k[0] = lo; k[0] < hi; ++k[0])
      for (k[1] = lo; k[1] < hi; ++k[1]) visit(k);
  } else {
    for (k[0] = lo; k[0] < hi; ++k[0])
      for (k[1] = lo; k[1] < hi; ++k[1])
        for (k[2] = lo; k[2] < hi; ++k[2]) visit(k);
  }
}

int ray_key(Ray ray, const int* k, int dim) {
  if (ray == Ray::axis) return k[0];
  int s = 0;
  for (int a = 0; a < dim; ++a) s += k[a];
  return s;
}

double ray_phase_scale(Ray ray, int dim, double unit) {
  return ray == Ray::axis ? unit : unit / std::sqrt(static_cast<double>(dim));
}

std::vector<std::string> oseen_component_names(int dim) {
  std::vector<std::string> names;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j) names.push_back(std::to_string(i) + "," + std::to_string(k) + "," + std::to_string(j));
  return names;
}

}  // namespace

const char* ray_name(Ray ray) { return ray == Ray::axis ? "axis" : "diagonal"; }

const KernelSeries* KernelTable::find(const std::string& component, Ray ray) const {
  for (const auto& s : series) {
    if (s.component == component && s.ray == ray) return &s;
  }
  return nullptr;
}

std::vector<double> inner_half_radii(const KernelGridSpec& spec, int count) {
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = 0.25 * spec.box_len * i / std::max(1, count - 1);
  return r;
}

KernelTable heat_kernel_table(double beta, double t, const std::vector<double>& radii, int dim,
                              const KernelGridSpec& spec) {
  check_args(beta, t, dim);
  if (spec.n_aux < 8 || spec.n_aux % 2 != 0 || !(spec.box_len > 0.0)) throw ConfigError("invalid kernel grid");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw ConfigError("kernel radii must be strictly increasing");
  }
  const int n = spec.n_aux;
  const double unit = 2.0 * std::numbers::pi / spec.box_len;

  RayMarginal marg;
  marg.keys = n;
  marg.offset = n / 2;
  marg.sums.assign(static_cast<std::size_t>(n), 0.0);
  for_each_mode(dim, n, [&](const int* k) {
    double k2 = 0.0;
    for (int a = 0; a < dim; ++a) k2 += static_cast<double>(k[a]) * k[a];
    marg.sums[static_cast<std::size_t>(k[0] + marg.offset)] += fractional_multiplier(k2 * unit * unit, t, beta);
  });

  KernelTable table;
  table.beta = beta;
  table.time = t;
  table.dim = dim;
  table.radii = radii;
  KernelSeries s{"scalar", Ray::axis, std::vector<double>(radii.size(), 0.0)};
  const double norm = 1.0 / std::pow(spec.box_len, dim);
  for (std::size_t ir = 0; ir < radii.size(); ++ir) {
    double acc = 0.0;
    for (int key = 0; key < marg.keys; ++key) {
      acc += marg.sums[static_cast<std::size_t>(key)] * std::cos(unit * (key - marg.offset) * radii[ir]);
    }
    s.values[ir] = acc * norm;
  }
  table.series.push_back(std::move(s));
  if (beta == 1.0) {
    table.analytic.resize(radii.size());
    for (std::size_t ir = 0; ir < radii.size(); ++ir) {
      table.analytic[ir] = std::pow(4.0 * std::numbers::pi * t, -0.5 * dim) * std::exp(-radii[ir] * radii[ir] / (4.0 * t));
    }
  }
  return table;
}

double heat_kernel_mass(double beta, double t, int dim, const KernelGridSpec& spec) {
  check_args(beta, t, dim);
  TorusGrid grid(dim, spec.box_len, spec.n_aux);
  CoeffArray coeffs(grid.size());
  const double norm = 1.0 / grid.volume();
  for (std::size_t lin = 0; lin < grid.size(); ++lin) coeffs[lin] = fractional_multiplier(grid.xi_squared(lin), t, beta) * norm;
  RealArray phys(grid.size());
  inverse_real(grid, coeffs, phys);
  double mass = 0.0;
  for (double v : phys) mass += v;
  return mass * grid.cell_volume();
}

KernelTable oseen_kernel_table(double beta, double t, int dim, const KernelGridSpec& spec, std::vector<double> radii) {
  check_args(beta, t, dim);
  if (spec.n_aux < 8 || spec.n_aux % 2 != 0 || !(spec.box_len > 0.0)) throw ConfigError("invalid kernel grid");
  if (radii.empty()) radii = inner_half_radii(spec, 65);
  const int n = spec.n_aux;
  const double unit = 2.0 * std::numbers::pi / spec.box_len;
  const auto names = oseen_component_names(dim);
  const int ncomp = static_cast<int>(names.size());

  RayMarginal axis;
  axis.keys = n;
  axis.offset = n / 2;
  axis.sums.assign(static_cast<std::size_t>(ncomp * axis.keys), 0.0);
  RayMarginal diag;
  diag.keys = dim * n;
  diag.offset = dim * n / 2;
  diag.sums.assign(static_cast<std::size_t>(ncomp * diag.keys), 0.0);

  for_each_mode(dim, n, [&](const int* k) {
    double xi[3] = {0.0, 0.0, 0.0};
    double xi2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      xi[a] = unit * k[a];
      xi2 += xi[a] * xi[a];
    }
    if (xi2 == 0.0) return;
    const double m = fractional_multiplier(xi2, t, beta);
    const int ka = ray_key(Ray::axis, k, dim) + axis.offset;
    const int kd = ray_key(Ray::diagonal, k, dim) + diag.offset;
    int c = 0;
    for (int i = 0; i < dim; ++i) {
      for (int kk = 0; kk < dim; ++kk) {
        const double proj = (i == kk ? 1.0 : 0.0) - xi[i] * xi[kk] / xi2;
        for (int j = 0; j < dim; ++j, ++c) {
          const double w = xi[j] * proj * m;
          axis.sums[static_cast<std::size_t>(c * axis.keys + ka)] += w;
          diag.sums[static_cast<std::size_t>(c * diag.keys + kd)] += w;
        }
      }
    }
  });

  KernelTable table;
  table.beta = beta;
  table.time = t;
  table.dim = dim;
  table.radii = radii;
  const double norm = 1.0 / std::pow(spec.box_len, dim);
  for (Ray ray : {Ray::axis, Ray::diagonal}) {
    const RayMarginal& marg = ray == Ray::axis ? axis : diag;
    const double scale = ray_phase_scale(ray, dim, unit);
    KernelSeries mag{"magnitude", ray, std::vector<double>(radii.size(), 0.0)};
    for (int c = 0; c < ncomp; ++c) {
      KernelSeries s{names[static_cast<std::size_t>(c)], ray, std::vector<double>(radii.size(), 0.0)};
      for (std::size_t ir = 0; ir < radii.size(); ++ir) {
        double acc = 0.0;
        for (int key = 0; key < marg.keys; ++key) {
          const double w = marg.sums[static_cast<std::size_t>(c * marg.keys + key)];
          if (w != 0.0) acc += w * std::sin(scale * (key - marg.offset) * radii[ir]);
        }
        // i xi e^{i xi x} contributes -xi sin(xi x) to the real part
        s.values[ir] = -acc * norm;
        mag.values[ir] += s.values[ir] * s.values[ir];
      }
      table.series.push_back(std::move(s));
    }
    for (double& v : mag.values) v = std::sqrt(v);
    table.series.push_back(std::move(mag));
  }
  return table;
}

double fit_decay_constant(const KernelTable& table, double beta, double t, int dim) {
  double best = 0.0;
  const double scale = std::pow(t, 1.0 / (2.0 * beta));
  bool any = false;
  for (const auto& s : table.series) {
    if (s.component != "magnitude") continue;
    any = true;
    for (std::size_t ir = 0; ir < s.values.size(); ++ir) {
      if (!std::isfinite(s.values[ir])) throw ConfigError("kernel table contains non-finite values");
      best = std::max(best, std::abs(s.values[ir]) * std::pow(scale + table.radii[ir], dim + 1));
    }
  }
  if (!any) {
    // tables without a magnitude series: use every component
    for (const auto& s : table.series) {
      for (std::size_t ir = 0; ir < s.values.size(); ++ir) {
        if (!std::isfinite(s.values[ir])) throw ConfigError("kernel table contains non-finite values");
        best = std::max(best, std::abs(s.values[ir]) * std::pow(scale + table.radii[ir], dim + 1));
      }
    }
  }
  return best;
}

KernelNorms oseen_kernel_norms(double beta, double t, int dim, double r, const KernelGridSpec& spec) {
  check_args(beta, t, dim);
  if (!(r > 0.0)) throw ConfigError("kernel norm exponent must be positive");
  TorusGrid grid(dim, spec.box_len, spec.n_aux);
  const double norm = 1.0 / grid.volume();
  RealArray mag2(grid.size(), 0.0);
  CoeffArray coeffs(grid.size());
  RealArray phys(grid.size());
  const Complex iu{0.0, 1.0};
  for (int i = 0; i < dim; ++i) {
    for (int kk = 0; kk < dim; ++kk) {
      for (int j = 0; j < dim; ++j) {
        for (std::size_t lin = 0; lin < grid.size(); ++lin) {
          const MultiIndex idx = grid.multi_index(lin);
          double xi[3] = {0.0, 0.0, 0.0};
          double xi2 = 0.0;
          for (int a = 0; a < dim; ++a) {
            xi[a] = grid.derivative_symbol(idx[static_cast<std::size_t>(a)]);
            xi2 += xi[a] * xi[a];
          }
          if (xi2 == 0.0) {
            coeffs[lin] = Complex{};
            continue;
          }
          const double proj = (i == kk ? 1.0 : 0.0) - xi[i] * xi[kk] / xi2;
          coeffs[lin] = iu * xi[j] * proj * fractional_multiplier(grid.xi_squared(lin), t, beta) * norm;
        }
        inverse_real(grid, coeffs, phys);
        for (std::size_t x = 0; x < grid.size(); ++x) mag2[x] += phys[x] * phys[x];
      }
    }
  }
  double strong = 0.0;
  for (double& v : mag2) {
    v = std::sqrt(v);
    strong += std::pow(v, r);
  }
  KernelNorms out;
  out.strong = std::pow(strong * grid.cell_volume(), 1.0 / r);
  out.weak = weak_norm_uniform(mag2, grid.cell_volume(), r);
  return out;
}

}  // namespace fgns
