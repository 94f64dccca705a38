#include "fgns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace fgns {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per (dim, N) and never destroyed.
const PlanPair& plans_for(int dim, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({dim, n});
  if (it != cache.end()) return it->second;

  std::vector<int> dims(static_cast<std::size_t>(dim), n);
  std::size_t real_size = 1;
  for (int a = 0; a < dim; ++a) real_size *= static_cast<std::size_t>(n);
  const std::size_t half_size = real_size / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
  double* real = fftw_alloc_real(real_size);
  fftw_complex* cplx = fftw_alloc_complex(half_size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c(dim, dims.data(), real, cplx, flags);
  p.c2r = fftw_plan_dft_c2r(dim, dims.data(), cplx, real, flags | FFTW_DESTROY_INPUT);
  fftw_free(real);
  fftw_free(cplx);
  return cache.emplace(std::pair{dim, n}, p).first->second;
}

std::size_t half_size(const TorusGrid& grid) {
  const auto n = static_cast<std::size_t>(grid.n_axis());
  return grid.size() / n * (n / 2 + 1);
}

}  // namespace

void forward_real(const TorusGrid& grid, std::span<const double> phys, std::span<Complex> coeffs) {
  const int n = grid.n_axis();
  const auto nh = static_cast<std::size_t>(n / 2 + 1);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Complex> half(half_size(grid));
  const auto& p = plans_for(grid.dim(), n);
  // r2c never writes its input
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(phys.data()), reinterpret_cast<fftw_complex*>(half.data()));

  const double scale = 1.0 / static_cast<double>(grid.size());
  const std::size_t rows = grid.size() / un;
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t j = 0; j < nh; ++j) coeffs[row * un + j] = half[row * nh + j] * scale;
  }
  // Fill the upper half of the last axis from the mirror modes.
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t j = nh; j < un; ++j) {
      const std::size_t lin = row * un + j;
      coeffs[lin] = std::conj(coeffs[grid.mirror_index(lin)]);
    }
  }
  // The j = 0 and j = N/2 planes are their own mirror sets; symmetrize them.
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t j : {std::size_t{0}, un / 2}) {
      const std::size_t lin = row * un + j;
      const std::size_t mir = grid.mirror_index(lin);
      if (mir < lin) continue;
      if (mir == lin) {
        coeffs[lin] = Complex(coeffs[lin].real(), 0.0);
      } else {
        const Complex avg = 0.5 * (coeffs[lin] + std::conj(coeffs[mir]));
        coeffs[lin] = avg;
        coeffs[mir] = std::conj(avg);
      }
    }
  }
}

void inverse_real(const TorusGrid& grid, std::span<const Complex> coeffs, std::span<double> phys) {
  const int n = grid.n_axis();
  const auto nh = static_cast<std::size_t>(n / 2 + 1);
  const auto un = static_cast<std::size_t>(n);
  const std::size_t rows = grid.size() / un;
  std::vector<Complex> half(half_size(grid));
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::size_t j = 0; j < nh; ++j) half[row * nh + j] = coeffs[row * un + j];
  }
  const auto& p = plans_for(grid.dim(), n);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(half.data()), phys.data());
}

const char* fft_library_version() { return fftw_version; }

}  // namespace fgns
