#include <doctest.h>

#include <cmath>
#include <map>

#include "fgns/errors.hpp"
#include "fgns/fft.hpp"
#include "fgns/field.hpp"
#include "fgns/spectral_ops.hpp"
#include "support.hpp"

using namespace fgns;
using fgns::test::kPi;

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(TorusGrid(4, 1.0, 16), ConfigError);
  CHECK_THROWS_AS(TorusGrid(2, 1.0, 15), ConfigError);
  CHECK_THROWS_AS(TorusGrid(2, 1.0, 6), ConfigError);
  CHECK_THROWS_AS(TorusGrid(2, -1.0, 16), ConfigError);
}

TEST_CASE("grid index bookkeeping") {
  const TorusGrid g(3, 2 * kPi, 8);
  CHECK(g.size() == 512);
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.wavenumber(7) == -1);
  for (std::size_t lin = 0; lin < g.size(); ++lin) {
    CHECK(g.linear_index(g.multi_index(lin)) == lin);
    CHECK(g.mirror_index(g.mirror_index(lin)) == lin);
  }
  // Nyquist derivative symbol vanishes, |xi|^2 keeps the true wavenumber.
  CHECK(g.derivative_symbol(4) == 0.0);
  CHECK(g.xi_squared(g.linear_index({4, 0, 0})) == doctest::Approx(16.0));
  CHECK(g.dealiased_out(g.linear_index({3, 0, 0})) == true);  // 3*3 > 8
  CHECK(g.dealiased_out(g.linear_index({2, 7, 0})) == false);
}

TEST_CASE("forward transform normalization of a single mode") {
  const TorusGrid g(2, 2 * kPi, 16);
  const RealArray f = test::sample(g, [](double x, double y, double) { return std::cos(2 * x + 3 * y); });
  CoeffArray c(g.size());
  forward_real(g, f, c);
  const std::size_t kp = g.linear_index({2, 3, 0});
  const std::size_t km = g.mirror_index(kp);
  CHECK(std::abs(c[kp] - Complex(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(c[km] - Complex(0.5, 0.0)) < 1e-14);
  double rest = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != kp && i != km) rest = std::max(rest, std::abs(c[i]));
  }
  CHECK(rest < 1e-14);
}

TEST_CASE("round trip, exact Hermitian symmetry and Parseval") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, 3.0, dim == 2 ? 32 : 16);
    const auto u = test::random_smooth(g, 7, 3);
    CHECK(u.hermitian_defect() == 0.0);
    const auto phys = u.to_physical();
    const auto back = SpectralVectorField::from_physical(g, phys);
    CHECK(test::max_abs_diff(u, back) < 1e-14);
    double grid_sum = 0.0;
    for (const auto& comp : phys) {
      for (double v : comp) grid_sum += v * v;
    }
    grid_sum *= g.cell_volume();
    CHECK(l2_norm(u) * l2_norm(u) == doctest::Approx(grid_sum).epsilon(1e-12));
  }
}

TEST_CASE("spectral derivatives match analytic derivatives") {
  const TorusGrid g(2, 2 * kPi, 32);
  const auto phi = test::field_from(g, {[](double x, double y, double) { return std::sin(3 * x) * std::cos(2 * y); }});
  const auto grad = gradient(g, phi.component(0));
  const auto expect = test::field_from(g, {[](double x, double y, double) { return 3 * std::cos(3 * x) * std::cos(2 * y); },
                                           [](double x, double y, double) { return -2 * std::sin(3 * x) * std::sin(2 * y); }});
  CHECK(test::max_abs_diff(grad, expect) < 1e-13);
  // Finite-difference cross-check on the physical grid.
  const auto gphys = grad.to_physical();
  const auto pphys = phi.to_physical()[0];
  const double h = g.spacing();
  double err = 0.0;
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const auto at = [&](int a, int b) { return pphys[g.linear_index({(a + 32) % 32, (b + 32) % 32, 0})]; };
      const double fd = (-at(i + 2, j) + 8 * at(i + 1, j) - 8 * at(i - 1, j) + at(i - 2, j)) / (12 * h);
      err = std::max(err, std::abs(fd - gphys[0][g.linear_index({i, j, 0})]));
    }
  }
  // fourth-order stencil error ~ k^5 h^4 / 30
  CHECK(err < 0.02);
}

TEST_CASE("Leray projection kills gradients and is idempotent") {
  const TorusGrid g(2, 2 * kPi, 64);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto u = test::random_smooth(g, seed, 4);
    const auto pu = leray_project(u);
    CHECK(pu.divergence_free());
    CHECK(pu.divergence_defect() < 1e-12);
    CHECK(test::max_abs_diff(leray_project(pu), pu) < 1e-12);
    const auto grad = gradient(g, u.component(0));
    CHECK(test::max_abs(leray_project(grad)) < 1e-12);
  }
}

TEST_CASE("fractional semigroup") {
  const TorusGrid g(2, 2 * kPi, 32);
  const auto u = test::field_from(g, {[](double x, double y, double) { return std::sin(2 * x + y); },
                                      [](double x, double y, double) { return -2 * std::sin(2 * x + y); }});
  SUBCASE("beta = 1 single mode is the heat multiplier") {
    const double t = 0.3;
    const auto v = fractional_semigroup(u, t, 1.0);
    const std::size_t k = g.linear_index({2, 1, 0});
    const double expect = std::exp(-t * 5.0);
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(v.component(c)[k] - expect * u.component(c)[k]) <= 1e-12 * std::abs(expect * u.component(c)[k]));
    }
  }
  SUBCASE("t = 0 is the identity, semigroup law holds") {
    CHECK(fractional_semigroup(u, 0.0, 0.75) == u);
    const auto a = fractional_semigroup(fractional_semigroup(u, 0.2, 0.75), 0.3, 0.75);
    const auto b = fractional_semigroup(u, 0.5, 0.75);
    CHECK(test::max_abs_diff(a, b) < 1e-15);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(fractional_semigroup(u, -1.0, 0.75), ConfigError);
    CHECK_THROWS_AS(fractional_semigroup(u, 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(fractional_semigroup(u, 1.0, 1.2), ConfigError);
  }
  SUBCASE("multiplier") {
    CHECK(fractional_multiplier(4.0, 0.5, 0.75) == doctest::Approx(std::exp(-0.5 * std::pow(4.0, 0.75))));
  }
}

namespace {

// Truncated convolution sum_{p + q = k} a(p) b(q), with integer wavevectors
// taken literally (no wrap-around), restricted to |k_a| <= N/3.
CoeffArray direct_product(const TorusGrid& g, const CoeffArray& a, const CoeffArray& b) {
  const int n = g.n_axis();
  std::vector<std::pair<MultiIndex, Complex>> av, bv;
  auto keep = [&](const MultiIndex& k) {
    for (int d = 0; d < g.dim(); ++d) {
      if (3 * std::abs(k[static_cast<std::size_t>(d)]) > n) return false;
    }
    return true;
  };
  for (std::size_t lin = 0; lin < g.size(); ++lin) {
    const MultiIndex idx = g.multi_index(lin);
    MultiIndex k{g.wavenumber(idx[0]), g.wavenumber(idx[1]), g.dim() == 3 ? g.wavenumber(idx[2]) : 0};
    if (!keep(k)) continue;
    if (a[lin] != Complex{}) av.push_back({k, a[lin]});
    if (b[lin] != Complex{}) bv.push_back({k, b[lin]});
  }
  CoeffArray out(g.size());
  for (const auto& [p, x] : av) {
    for (const auto& [q, y] : bv) {
      const MultiIndex s{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
      if (!keep(s)) continue;
      MultiIndex idx{(s[0] + n) % n, (s[1] + n) % n, (s[2] + n) % n};
      out[g.linear_index(idx)] += x * y;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("dealiased product equals the direct truncated convolution") {
  const TorusGrid g(2, 2 * kPi, 32);
  auto u = test::random_smooth(g, 11, 8);
  auto v = test::random_smooth(g, 12, 8);
  // include modes that alias if the product were not truncated
  for (int c = 0; c < 2; ++c) {
    u.component(c)[g.linear_index({10, 3, 0})] += Complex(0.3, 0.1);
    u.component(c)[g.mirror_index(g.linear_index({10, 3, 0}))] += Complex(0.3, -0.1);
  }
  const SpectralTensorField t = nonlinear_tensor(u, v);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const CoeffArray ref = direct_product(g, u.component(i), v.component(j));
      for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(ref[k] - t.at(i, j)[k]));
    }
  }
  CHECK(err < 1e-10);
  // the shortcut for u == v agrees with the general path
  const auto w = u;
  const SpectralTensorField same = nonlinear_tensor(u, u);
  const SpectralTensorField general = nonlinear_tensor(u, w);
  double diff = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < g.size(); ++k) diff = std::max(diff, std::abs(same.at(i, j)[k] - general.at(i, j)[k]));
  CHECK(diff < 1e-14);
}

TEST_CASE("projected flux is divergence-free and real") {
  const TorusGrid g(3, 2 * kPi, 16);
  const auto u = leray_project(test::random_smooth(g, 3, 2));
  const auto f = projected_flux(u, u);
  CHECK(f.divergence_free());
  CHECK(f.divergence_defect() < 1e-12);
  CHECK(f.hermitian_defect() < 1e-14);
}

TEST_CASE("divergence of a gradient is minus the Laplacian") {
  const TorusGrid g(2, 2 * kPi, 32);
  const auto phi = test::random_smooth(g, 5, 4);
  const CoeffArray lap = divergence(gradient(g, phi.component(0)));
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    err = std::max(err, std::abs(lap[k] + g.xi_squared(k) * phi.component(0)[k]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("field arithmetic and norms") {
  const TorusGrid g(2, 2 * kPi, 16);
  const auto u = test::random_smooth(g, 1, 2);
  const auto v = test::random_smooth(g, 2, 2);
  CHECK(test::max_abs_diff((u + v) - v, u) < 1e-15);
  CHECK(l2_norm(-3.0 * u) == doctest::Approx(3.0 * l2_norm(u)).epsilon(1e-14));
  CHECK(l2_inner(u, u) == doctest::Approx(l2_norm(u) * l2_norm(u)).epsilon(1e-13));
  const auto half = SpectralVectorField::lerp(u, v, 0.5);
  CHECK(test::max_abs_diff(half, 0.5 * (u + v)) < 1e-15);
  double m = 0.0;
  for (double x : u.magnitude()) m = std::max(m, x);
  CHECK(sup_norm(u) == m);
}
