#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace fgns {

using Complex = std::complex<double>;
using CoeffArray = std::vector<Complex>;
using RealArray = std::vector<double>;
using MultiIndex = std::array<int, 3>;

// Periodic box [0, L)^dim sampled at N points per axis.
//
// Grid points sit at x_i = i * h. Coefficient arrays use FFT order: index i on
// an axis carries the wavenumber k = i for i < N/2 and k = i - N otherwise, and
// the linear index is row-major with axis 0 slowest.
//
// The handle is cheap to copy; the per-mode tables are shared.
class TorusGrid {
 public:
  TorusGrid(int dim, double box_len, int n_axis);

  int dim() const { return data_->dim; }
  double box_len() const { return data_->box_len; }
  int n_axis() const { return data_->n_axis; }
  std::size_t size() const { return data_->size; }
  double spacing() const { return data_->box_len / data_->n_axis; }
  double cell_volume() const;
  double volume() const;
  // 2 pi / L
  double wave_unit() const { return data_->wave_unit; }

  int wavenumber(int index) const { return index < n_axis() / 2 ? index : index - n_axis(); }
  // Wavevector component used by derivatives and the Leray projector. The
  // Nyquist index has no symmetric partner, so its derivative symbol is zero.
  double derivative_symbol(int index) const { return data_->kappa[static_cast<std::size_t>(index)]; }

  MultiIndex multi_index(std::size_t linear) const;
  std::size_t linear_index(const MultiIndex& idx) const;
  // Linear index of the mode -k.
  std::size_t mirror_index(std::size_t linear) const { return data_->mirror[linear]; }
  // |xi|^2 with the true (signed) wavenumbers, including Nyquist modes.
  double xi_squared(std::size_t linear) const { return data_->xi_sq[linear]; }
  // 2/3-rule mask: true when some |k_a| > N/3.
  bool dealiased_out(std::size_t linear) const { return data_->truncated[linear] != 0; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.data_ == b.data_ ||
           (a.dim() == b.dim() && a.n_axis() == b.n_axis() && a.box_len() == b.box_len());
  }

 private:
  struct Data {
    int dim = 0;
    double box_len = 0.0;
    int n_axis = 0;
    std::size_t size = 0;
    double wave_unit = 0.0;
    std::vector<double> kappa;
    std::vector<std::size_t> mirror;
    std::vector<double> xi_sq;
    std::vector<unsigned char> truncated;
  };
  std::shared_ptr<const Data> data_;
};

// Exponents (alpha, beta) of the model, with the spatial dimension.
struct ModelParams {
  double alpha = 0.5;
  double beta = 0.75;
  int dim = 2;

  // Throws ConfigError unless max{alpha, 1/2} < beta <= 1, alpha > 0 and
  // alpha + beta - 1 >= 0.
  void validate() const;
};

}  // namespace fgns
