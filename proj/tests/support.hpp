#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "fgns/field.hpp"
#include "fgns/grid.hpp"

namespace fgns::test {

inline constexpr double kPi = std::numbers::pi;

// Samples f(x, y, z) on the grid points.
inline RealArray sample(const TorusGrid& grid, const std::function<double(double, double, double)>& f) {
  RealArray out(grid.size());
  const double h = grid.spacing();
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    out[lin] = f(idx[0] * h, idx[1] * h, grid.dim() == 3 ? idx[2] * h : 0.0);
  }
  return out;
}

inline SpectralVectorField field_from(const TorusGrid& grid,
                                      const std::vector<std::function<double(double, double, double)>>& comps) {
  std::vector<RealArray> vals;
  for (const auto& f : comps) vals.push_back(sample(grid, f));
  return SpectralVectorField::from_physical(grid, vals);
}

// Random real field (not projected) with modes |k|_inf <= band, built in
// physical space from explicit sinusoids so it does not rely on the library's
// generators.
inline SpectralVectorField random_smooth(const TorusGrid& grid, std::uint64_t seed, int band = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double u = grid.wave_unit();
  std::vector<RealArray> vals(static_cast<std::size_t>(grid.dim()), RealArray(grid.size(), 0.0));
  for (int c = 0; c < grid.dim(); ++c) {
    for (int a = -band; a <= band; ++a) {
      for (int b = -band; b <= band; ++b) {
        const int zmax = grid.dim() == 3 ? band : 0;
        for (int z = -zmax; z <= zmax; ++z) {
          const double amp = uni(rng) / (1.0 + a * a + b * b + z * z);
          const double ph = kPi * uni(rng);
          const RealArray s = sample(grid, [&](double x, double y, double w) {
            return amp * std::cos(u * (a * x + b * y + z * w) + ph);
          });
          for (std::size_t i = 0; i < s.size(); ++i) vals[static_cast<std::size_t>(c)][i] += s[i];
        }
      }
    }
  }
  return SpectralVectorField::from_physical(grid, vals);
}

inline double max_abs_diff(const SpectralVectorField& a, const SpectralVectorField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (std::size_t i = 0; i < a.component(c).size(); ++i) {
      m = std::max(m, std::abs(a.component(c)[i] - b.component(c)[i]));
    }
  }
  return m;
}

inline double max_abs(const SpectralVectorField& a) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    for (const auto& z : a.component(c)) m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace fgns::test
