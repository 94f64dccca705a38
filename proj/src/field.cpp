#include "fgns/field.hpp"

#include <algorithm>
#include <cmath>

#include "fgns/errors.hpp"
#include "fgns/fft.hpp"

namespace fgns {

SpectralVectorField::SpectralVectorField(TorusGrid grid, int components) : grid_(std::move(grid)) {
  const int c = components < 0 ? grid_.dim() : components;
  coeffs_.assign(static_cast<std::size_t>(c), CoeffArray(grid_.size(), Complex{}));
}

SpectralVectorField SpectralVectorField::from_physical(const TorusGrid& grid, std::span<const RealArray> values) {
  SpectralVectorField f(grid, static_cast<int>(values.size()));
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c].size() != grid.size()) throw ConfigError("physical array size does not match grid");
    forward_real(grid, values[c], f.coeffs_[c]);
  }
  return f;
}

std::vector<RealArray> SpectralVectorField::to_physical() const {
  std::vector<RealArray> out(coeffs_.size(), RealArray(grid_.size()));
  for (std::size_t c = 0; c < coeffs_.size(); ++c) inverse_real(grid_, coeffs_[c], out[c]);
  return out;
}

RealArray SpectralVectorField::magnitude() const {
  const auto phys = to_physical();
  RealArray mag(grid_.size(), 0.0);
  for (const auto& comp : phys) {
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += comp[i] * comp[i];
  }
  for (double& m : mag) m = std::sqrt(m);
  return mag;
}

double SpectralVectorField::divergence_defect() const {
  double worst = 0.0;
  const int dim = grid_.dim();
  if (components() != dim) return 0.0;
  for (std::size_t lin = 0; lin < grid_.size(); ++lin) {
    const MultiIndex idx = grid_.multi_index(lin);
    Complex div{};
    double mag2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const Complex c = coeffs_[static_cast<std::size_t>(a)][lin];
      div += grid_.derivative_symbol(idx[static_cast<std::size_t>(a)]) * c;
      mag2 += std::norm(c);
    }
    worst = std::max(worst, std::abs(div) / std::max(1.0, std::sqrt(mag2)));
  }
  return worst;
}

double SpectralVectorField::hermitian_defect() const {
  double worst = 0.0;
  for (const auto& comp : coeffs_) {
    for (std::size_t lin = 0; lin < grid_.size(); ++lin) {
      const Complex a = comp[lin];
      const Complex b = comp[grid_.mirror_index(lin)];
      worst = std::max(worst, std::abs(b - std::conj(a)) / std::max(1.0, std::abs(a)));
    }
  }
  return worst;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  if (!(grid_ == other.grid_) || components() != other.components()) throw ConfigError("field shape mismatch");
  for (std::size_t c = 0; c < coeffs_.size(); ++c) {
    for (std::size_t i = 0; i < grid_.size(); ++i) coeffs_[c][i] += other.coeffs_[c][i];
  }
  divfree_ = divfree_ && other.divfree_;
  divfree_tol_ = std::max(divfree_tol_, other.divfree_tol_);
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  if (!(grid_ == other.grid_) || components() != other.components()) throw ConfigError("field shape mismatch");
  for (std::size_t c = 0; c < coeffs_.size(); ++c) {
    for (std::size_t i = 0; i < grid_.size(); ++i) coeffs_[c][i] -= other.coeffs_[c][i];
  }
  divfree_ = divfree_ && other.divfree_;
  divfree_tol_ = std::max(divfree_tol_, other.divfree_tol_);
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double scale) {
  for (auto& comp : coeffs_) {
    for (auto& c : comp) c *= scale;
  }
  return *this;
}

SpectralVectorField SpectralVectorField::lerp(const SpectralVectorField& a, const SpectralVectorField& b, double w) {
  if (!(a.grid_ == b.grid_) || a.components() != b.components()) throw ConfigError("field shape mismatch");
  SpectralVectorField out(a.grid_, a.components());
  const double wa = 1.0 - w;
  for (std::size_t c = 0; c < a.coeffs_.size(); ++c) {
    for (std::size_t i = 0; i < a.grid_.size(); ++i) out.coeffs_[c][i] = wa * a.coeffs_[c][i] + w * b.coeffs_[c][i];
  }
  out.divfree_ = a.divfree_ && b.divfree_;
  out.divfree_tol_ = std::max(a.divfree_tol_, b.divfree_tol_);
  return out;
}

SpectralTensorField::SpectralTensorField(TorusGrid grid) : grid_(std::move(grid)) {
  const auto d = static_cast<std::size_t>(grid_.dim());
  coeffs_.assign(d * d, CoeffArray(grid_.size(), Complex{}));
}

double l2_norm(const SpectralVectorField& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

double l2_inner(const SpectralVectorField& u, const SpectralVectorField& v) {
  if (!(u.grid() == v.grid()) || u.components() != v.components()) throw ConfigError("field shape mismatch");
  double acc = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    const auto& a = u.component(c);
    const auto& b = v.component(c);
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] * std::conj(b[i])).real();
  }
  return acc * u.grid().volume();
}

double sup_norm(const SpectralVectorField& u) {
  const RealArray mag = u.magnitude();
  return mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
}

}  // namespace fgns
