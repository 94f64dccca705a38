#include "fgns/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fgns/errors.hpp"

namespace fgns {

double weak_norm(std::span<const double> values, std::span<const double> weights, double q) {
  if (values.size() != weights.size()) throw ConfigError("weak_norm: values and weights differ in length");
  if (!(q > 0.0)) throw ConfigError("weak_norm: exponent must be positive");
  if (values.empty()) return 0.0;
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  double measure = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    measure += weights[order[k]];
    best = std::max(best, std::abs(values[order[k]]) * std::pow(measure, 1.0 / q));
  }
  return best;
}

double weak_norm_uniform(std::span<const double> values, double cell, double q) {
  if (!(q > 0.0)) throw ConfigError("weak_norm: exponent must be positive");
  if (values.empty()) return 0.0;
  std::vector<double> mags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
  if (std::isinf(q)) return *std::max_element(mags.begin(), mags.end());
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    best = std::max(best, mags[k] * std::pow(static_cast<double>(k + 1) * cell, 1.0 / q));
  }
  return best;
}

}  // namespace fgns
