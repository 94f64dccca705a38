#pragma once

#include <span>
#include <vector>

#include "fgns/grid.hpp"

namespace fgns {

// Real vector field on a torus, stored as Fourier coefficients (one full
// coefficient array per component, FFT order).
//
// Fields built through from_physical are exactly Hermitian. The
// divergence-free flag is set by the Leray projector and carried through
// linear operations; it is a promise checked by divergence_defect().
class SpectralVectorField {
 public:
  explicit SpectralVectorField(TorusGrid grid, int components = -1);

  static SpectralVectorField from_physical(const TorusGrid& grid, std::span<const RealArray> values);

  const TorusGrid& grid() const { return grid_; }
  int components() const { return static_cast<int>(coeffs_.size()); }
  CoeffArray& component(int i) { return coeffs_[static_cast<std::size_t>(i)]; }
  const CoeffArray& component(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

  std::vector<RealArray> to_physical() const;
  // Euclidean magnitude |u(x)| at every grid point.
  RealArray magnitude() const;

  bool divergence_free() const { return divfree_; }
  double divfree_tol() const { return divfree_tol_; }
  void set_divergence_free(bool flag, double tol = 1e-10) {
    divfree_ = flag;
    divfree_tol_ = tol;
  }
  // max over modes of |xi . u(xi)| / max(1, |u(xi)|).
  double divergence_defect() const;
  // max over modes of |u(-k) - conj(u(k))| / max(1, |u(k)|).
  double hermitian_defect() const;

  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double scale);

  friend SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
  friend SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
  friend SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

  // (1 - w) a + w b, coefficientwise.
  static SpectralVectorField lerp(const SpectralVectorField& a, const SpectralVectorField& b, double w);

  friend bool operator==(const SpectralVectorField&, const SpectralVectorField&) = default;

 private:
  TorusGrid grid_;
  std::vector<CoeffArray> coeffs_;
  bool divfree_ = false;
  double divfree_tol_ = 0.0;
};

// dim x dim field of Fourier coefficients; entry (i, j) at index i * dim + j.
class SpectralTensorField {
 public:
  explicit SpectralTensorField(TorusGrid grid);

  const TorusGrid& grid() const { return grid_; }
  int rank_dim() const { return grid_.dim(); }
  CoeffArray& at(int i, int j) { return coeffs_[static_cast<std::size_t>(i * rank_dim() + j)]; }
  const CoeffArray& at(int i, int j) const { return coeffs_[static_cast<std::size_t>(i * rank_dim() + j)]; }

 private:
  TorusGrid grid_;
  std::vector<CoeffArray> coeffs_;
};

// Physical-space L^2 norm computed from coefficients: (L^dim sum |u_k|^2)^{1/2}.
double l2_norm(const SpectralVectorField& u);
// Real L^2 inner product.
double l2_inner(const SpectralVectorField& u, const SpectralVectorField& v);
// max_x |u(x)| on the grid.
double sup_norm(const SpectralVectorField& u);

}  // namespace fgns
