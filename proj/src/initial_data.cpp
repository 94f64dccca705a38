#include "fgns/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fgns/errors.hpp"
#include "fgns/mollifier.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

void normalize_max_speed(SpectralVectorField& u, double amplitude) {
  const double peak = sup_norm(u);
  if (peak > 0.0) u *= amplitude / peak;
}

SpectralVectorField taylor_green(const TorusGrid& grid, double amplitude, int wavenumber) {
  const int n = grid.dim();
  const double h = grid.spacing();
  const double k = grid.wave_unit() * wavenumber;
  std::vector<RealArray> vals(static_cast<std::size_t>(n), RealArray(grid.size(), 0.0));
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    const double x = k * idx[0] * h;
    const double y = k * idx[1] * h;
    const double cz = n == 3 ? std::cos(k * idx[2] * h) : 1.0;
    vals[0][lin] = std::sin(x) * std::cos(y) * cz;
    vals[1][lin] = -std::cos(x) * std::sin(y) * cz;
  }
  auto u = leray_project(SpectralVectorField::from_physical(grid, vals));
  normalize_max_speed(u, amplitude);
  return u;
}

SpectralVectorField taylor_green_mixed(const TorusGrid& grid, double amplitude) {
  auto u = taylor_green(grid, 1.0, 1);
  u += 0.5 * taylor_green(grid, 1.0, 2);
  normalize_max_speed(u, amplitude);
  return u;
}

SpectralVectorField random_bandlimited(const TorusGrid& grid, double amplitude, std::mt19937_64& rng, int band) {
  if (band < 1 || band >= grid.n_axis() / 3) throw ConfigError("random_bandlimited: band must lie in [1, N/3)");
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralVectorField u(grid);
  for (int c = 0; c < u.components(); ++c) {
    CoeffArray& co = u.component(c);
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      const MultiIndex idx = grid.multi_index(lin);
      int kmax = 0;
      double k2 = 0.0;
      for (int d = 0; d < grid.dim(); ++d) {
        const int kd = grid.wavenumber(idx[static_cast<std::size_t>(d)]);
        kmax = std::max(kmax, std::abs(kd));
        k2 += kd * kd;
      }
      if (kmax == 0 || kmax > band) continue;
      const double re = gauss(rng);
      const double im = gauss(rng);
      co[lin] = Complex(re, im) / (1.0 + k2);
    }
    // Hermitian symmetry: keep the lower index of each pair.
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      const std::size_t m = grid.mirror_index(lin);
      if (m == lin) {
        co[lin] = Complex(co[lin].real(), 0.0);
      } else if (lin < m) {
        co[m] = std::conj(co[lin]);
      }
    }
  }
  u = leray_project(u);
  normalize_max_speed(u, amplitude);
  return u;
}

double curl_bump_radius(const TorusGrid& grid) { return 0.8 * grid.box_len() / 4.0; }

SpectralVectorField curl_bump(const TorusGrid& grid, double amplitude) {
  return curl_bump(grid, amplitude, curl_bump_radius(grid));
}

SpectralVectorField curl_bump(const TorusGrid& grid, double amplitude, double rad) {
  if (!(rad > 0.0 && rad < grid.box_len() / 2.0)) throw ConfigError("curl_bump: radius must lie in (0, L/2)");
  const int n = grid.dim();
  const double h = grid.spacing();
  const double c = grid.box_len() / 2.0;
  RealArray psi(grid.size(), 0.0);
  for (std::size_t lin = 0; lin < grid.size(); ++lin) {
    const MultiIndex idx = grid.multi_index(lin);
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double x = idx[static_cast<std::size_t>(d)] * h - c;
      r2 += x * x;
    }
    psi[lin] = bump_profile(std::sqrt(r2) / rad);
  }
  const SpectralVectorField s = SpectralVectorField::from_physical(grid, std::vector<RealArray>{psi});
  const SpectralVectorField g = gradient(grid, s.component(0));
  SpectralVectorField u(grid);
  if (n == 2) {
    u.component(0) = g.component(1);
    u.component(1) = g.component(0);
    for (auto& z : u.component(1)) z = -z;
  } else {
    // curl of (psi, psi, psi)
    for (std::size_t lin = 0; lin < grid.size(); ++lin) {
      const Complex gx = g.component(0)[lin];
      const Complex gy = g.component(1)[lin];
      const Complex gz = g.component(2)[lin];
      u.component(0)[lin] = gy - gz;
      u.component(1)[lin] = gz - gx;
      u.component(2)[lin] = gx - gy;
    }
  }
  u.set_divergence_free(true);
  normalize_max_speed(u, amplitude);
  return u;
}

SpectralVectorField generate_initial_data(const std::string& kind, double amplitude, std::uint64_t seed,
                                          const TorusGrid& grid) {
  if (kind == "taylor_green") return taylor_green(grid, amplitude);
  if (kind == "taylor_green_mixed") return taylor_green_mixed(grid, amplitude);
  if (kind == "curl_bump") return curl_bump(grid, amplitude);
  if (kind == "random_bandlimited") {
    std::mt19937_64 rng(seed);
    return random_bandlimited(grid, amplitude, rng);
  }
  throw ConfigError("data.kind: unknown initial data kind '" + kind + "'");
}

}  // namespace fgns
