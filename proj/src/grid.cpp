#include "fgns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fgns/errors.hpp"

namespace fgns {

TorusGrid::TorusGrid(int dim, double box_len, int n_axis) {
  if (dim != 2 && dim != 3) {
    throw ConfigError("grid.dim must be 2 or 3, got " + std::to_string(dim));
  }
  if (n_axis < 8 || n_axis % 2 != 0) {
    throw ConfigError("grid.N must be even and >= 8, got " + std::to_string(n_axis));
  }
  if (!(box_len > 0.0) || !std::isfinite(box_len)) {
    throw ConfigError("grid.L must be positive and finite");
  }
  auto d = std::make_shared<Data>();
  d->dim = dim;
  d->box_len = box_len;
  d->n_axis = n_axis;
  d->size = 1;
  for (int a = 0; a < dim; ++a) d->size *= static_cast<std::size_t>(n_axis);
  d->wave_unit = 2.0 * std::numbers::pi / box_len;

  d->kappa.resize(static_cast<std::size_t>(n_axis));
  for (int i = 0; i < n_axis; ++i) {
    const int k = i < n_axis / 2 ? i : i - n_axis;
    d->kappa[static_cast<std::size_t>(i)] = (i == n_axis / 2) ? 0.0 : d->wave_unit * k;
  }

  data_ = d;  // multi_index/linear_index below need data_
  d->mirror.resize(d->size);
  d->xi_sq.resize(d->size);
  d->truncated.resize(d->size);
  for (std::size_t lin = 0; lin < d->size; ++lin) {
    MultiIndex idx = multi_index(lin);
    MultiIndex neg{0, 0, 0};
    double k2 = 0.0;
    bool cut = false;
    for (int a = 0; a < dim; ++a) {
      const int i = idx[static_cast<std::size_t>(a)];
      neg[static_cast<std::size_t>(a)] = (n_axis - i) % n_axis;
      const int k = i < n_axis / 2 ? i : i - n_axis;
      k2 += static_cast<double>(k) * k;
      if (3 * std::abs(k) > n_axis) cut = true;
    }
    d->mirror[lin] = linear_index(neg);
    d->xi_sq[lin] = k2 * d->wave_unit * d->wave_unit;
    d->truncated[lin] = cut ? 1 : 0;
  }
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim()); }

double TorusGrid::volume() const { return std::pow(box_len(), dim()); }

MultiIndex TorusGrid::multi_index(std::size_t linear) const {
  MultiIndex idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(n_axis());
  for (int a = dim() - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(linear % n);
    linear /= n;
  }
  return idx;
}

std::size_t TorusGrid::linear_index(const MultiIndex& idx) const {
  std::size_t lin = 0;
  const auto n = static_cast<std::size_t>(n_axis());
  for (int a = 0; a < dim(); ++a) lin = lin * n + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
  return lin;
}

void ModelParams::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("model dimension must be 2 or 3");
  if (!(alpha > 0.0)) throw ConfigError("model.alpha must be positive");
  if (!(beta > 0.5 && beta <= 1.0)) throw ConfigError("model.beta must lie in (1/2, 1]");
  if (!(beta > alpha)) throw ConfigError("model.alpha must be smaller than model.beta");
  if (alpha + beta - 1.0 < 0.0) throw ConfigError("model requires alpha + beta - 1 >= 0");
}

}  // namespace fgns
