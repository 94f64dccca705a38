#include "fgns/mollifier.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "fgns/errors.hpp"

namespace fgns {
namespace {

// Composite 20-point Gauss-Legendre on [0, 1].
template <class F>
double integrate_unit(F&& f, int panels = 32) {
  double acc = 0.0;
  const double w = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * w;
    acc += boost::math::quadrature::gauss<double, 20>::integrate(f, a, a + w);
  }
  return acc;
}

double radial_mass(int dim) {
  return integrate_unit([dim](double r) { return bump_profile(r) * std::pow(r, dim - 1); });
}

double sphere_area(int dim) { return dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

}  // namespace

double bump_profile(double r) {
  if (!(r < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

double mollifier_normalization(int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("mollifier dimension must be 2 or 3");
  return 1.0 / (sphere_area(dim) * radial_mass(dim));
}

double mollifier_value(double r, double epsilon, int dim) {
  return mollifier_normalization(dim) * bump_profile(r / epsilon) / std::pow(epsilon, dim);
}

double mollifier_symbol(double rho, int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("mollifier dimension must be 2 or 3");
  if (rho == 0.0) return 1.0;
  // more panels once the Bessel/sinc factor oscillates
  const int panels = std::max(32, static_cast<int>(rho / 2.0));
  double num = 0.0;
  if (dim == 2) {
    num = integrate_unit([rho](double r) { return bump_profile(r) * std::cyl_bessel_j(0.0, rho * r) * r; }, panels);
  } else {
    num = integrate_unit(
        [rho](double r) {
          const double x = rho * r;
          const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
          return bump_profile(r) * sinc * r * r;
        },
        panels);
  }
  return num / radial_mass(dim);
}

SpectralVectorField mollify(const SpectralVectorField& u, const MollifierSpec& spec) {
  const TorusGrid& grid = u.grid();
  if (!(spec.epsilon > 0.0) || !(spec.epsilon < grid.box_len() / 4.0)) {
    throw ConfigError("mollifier epsilon must lie in (0, L/4)");
  }
  const double unit = grid.wave_unit();
  std::unordered_map<long long, double> cache;
  SpectralVectorField out(u);
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const auto key = std::llround(grid.xi_squared(lin) / (unit * unit));
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, mollifier_symbol(spec.epsilon * unit * std::sqrt(static_cast<double>(key)), grid.dim())).first;
    }
    for (int c = 0; c < out.components(); ++c) out.component(c)[lin] *= it->second;
  }
  return out;
}

TrajectoryField mollify(const TrajectoryField& u, const MollifierSpec& spec) {
  std::vector<SpectralVectorField> states;
  states.reserve(u.size());
  for (const auto& s : u.states()) states.push_back(mollify(s, spec));
  return TrajectoryField(u.mesh(), std::move(states));
}

double mollifier_grid_mass(const TorusGrid& grid, const MollifierSpec& spec) {
  const double c = mollifier_normalization(grid.dim());
  const double h = grid.spacing();
  const double L = grid.box_len();
  double acc = 0.0;
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      double x = idx[static_cast<std::size_t>(a)] * h;
      if (x > 0.5 * L) x -= L;
      r2 += x * x;
    }
    acc += bump_profile(std::sqrt(r2) / spec.epsilon);
  }
  return acc * c * grid.cell_volume() / std::pow(spec.epsilon, grid.dim());
}

}  // namespace fgns
