#include "fgns/spectral_ops.hpp"

#include <cmath>

#include "fgns/errors.hpp"
#include "fgns/fft.hpp"

namespace fgns {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.5 && beta <= 1.0)) throw ConfigError("beta must lie in (1/2, 1]");
}

void require_vector(const SpectralVectorField& u) {
  if (u.components() != u.grid().dim()) throw ConfigError("expected a velocity field with dim components");
}

CoeffArray truncated_copy(const TorusGrid& grid, const CoeffArray& c) {
  CoeffArray out(c);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (grid.dealiased_out(i)) out[i] = Complex{};
  }
  return out;
}

}  // namespace

SpectralVectorField leray_project(const SpectralVectorField& u) {
  require_vector(u);
  const TorusGrid& grid = u.grid();
  const int dim = grid.dim();
  SpectralVectorField out(grid);
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    double xi[3] = {0.0, 0.0, 0.0};
    double xi2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      xi[a] = grid.derivative_symbol(idx[static_cast<std::size_t>(a)]);
      xi2 += xi[a] * xi[a];
    }
    if (xi2 == 0.0) {
      for (int a = 0; a < dim; ++a) out.component(a)[lin] = u.component(a)[lin];
      continue;
    }
    Complex dot{};
    for (int a = 0; a < dim; ++a) dot += xi[a] * u.component(a)[lin];
    dot /= xi2;
    for (int a = 0; a < dim; ++a) out.component(a)[lin] = u.component(a)[lin] - xi[a] * dot;
  }
  out.set_divergence_free(true, 1e-10);
  return out;
}

double fractional_multiplier(double xi_squared, double t, double beta) {
  if (t == 0.0 || xi_squared == 0.0) return 1.0;
  return std::exp(-t * std::pow(xi_squared, beta));
}

SpectralVectorField fractional_semigroup(const SpectralVectorField& u, double t, double beta) {
  if (!(t >= 0.0)) throw ConfigError("semigroup time must be nonnegative");
  check_beta(beta);
  SpectralVectorField out(u);
  if (t == 0.0) return out;
  const TorusGrid& grid = u.grid();
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const double m = fractional_multiplier(grid.xi_squared(lin), t, beta);
    for (int c = 0; c < out.components(); ++c) out.component(c)[lin] *= m;
  }
  return out;
}

SpectralTensorField nonlinear_tensor(const SpectralVectorField& u, const SpectralVectorField& v) {
  if (!(u.grid() == v.grid())) throw ConfigError("nonlinear_tensor: grid mismatch");
  require_vector(u);
  require_vector(v);
  const TorusGrid& grid = u.grid();
  const int dim = grid.dim();
  const bool same = &u == &v;

  std::vector<RealArray> up(static_cast<std::size_t>(dim), RealArray(grid.size()));
  std::vector<RealArray> vp;
  for (int a = 0; a < dim; ++a) inverse_real(grid, truncated_copy(grid, u.component(a)), up[static_cast<std::size_t>(a)]);
  if (!same) {
    vp.assign(static_cast<std::size_t>(dim), RealArray(grid.size()));
    for (int a = 0; a < dim; ++a) inverse_real(grid, truncated_copy(grid, v.component(a)), vp[static_cast<std::size_t>(a)]);
  }
  const auto& vv = same ? up : vp;

  SpectralTensorField out(grid);
  RealArray prod(grid.size());
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (same && j < i) {
        out.at(i, j) = out.at(j, i);
        continue;
      }
      const auto& a = up[static_cast<std::size_t>(i)];
      const auto& b = vv[static_cast<std::size_t>(j)];
      for (std::size_t x = 0; x < grid.size(); ++x) prod[x] = a[x] * b[x];
      auto& dst = out.at(i, j);
      forward_real(grid, prod, dst);
      for (std::size_t lin = 0; lin < grid.size(); ++lin) {
        if (grid.dealiased_out(lin)) dst[lin] = Complex{};
      }
    }
  }
  return out;
}

SpectralVectorField tensor_divergence(const SpectralTensorField& tensor) {
  const TorusGrid& grid = tensor.grid();
  const int dim = grid.dim();
  SpectralVectorField out(grid);
  const Complex iu{0.0, 1.0};
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    for (int i = 0; i < dim; ++i) {
      Complex acc{};
      for (int j = 0; j < dim; ++j) acc += grid.derivative_symbol(idx[static_cast<std::size_t>(j)]) * tensor.at(i, j)[lin];
      out.component(i)[lin] = iu * acc;
    }
  }
  return out;
}

SpectralVectorField projected_flux(const SpectralVectorField& u, const SpectralVectorField& v) {
  return leray_project(tensor_divergence(nonlinear_tensor(u, v)));
}

CoeffArray divergence(const SpectralVectorField& u) {
  require_vector(u);
  const TorusGrid& grid = u.grid();
  CoeffArray out(grid.size());
  const Complex iu{0.0, 1.0};
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    Complex acc{};
    for (int a = 0; a < grid.dim(); ++a) acc += grid.derivative_symbol(idx[static_cast<std::size_t>(a)]) * u.component(a)[lin];
    out[lin] = iu * acc;
  }
  return out;
}

SpectralVectorField gradient(const TorusGrid& grid, const CoeffArray& scalar) {
  SpectralVectorField out(grid);
  const Complex iu{0.0, 1.0};
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    for (int a = 0; a < grid.dim(); ++a) {
      out.component(a)[lin] = iu * grid.derivative_symbol(idx[static_cast<std::size_t>(a)]) * scalar[lin];
    }
  }
  return out;
}

void dealias(SpectralVectorField& u) {
  const TorusGrid& grid = u.grid();
  for (int c = 0; c < u.components(); ++c) {
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      if (grid.dealiased_out(lin)) u.component(c)[lin] = Complex{};
    }
  }
}

}  // namespace fgns
