#pragma once

#include <span>

namespace fgns {

// Weak L^q (quasi-)norm of a step function taking |values[i]| on a cell of
// measure weights[i]:  sup_k f*_k (w_1 + ... + w_k)^{1/q}  over the decreasing
// rearrangement. q = infinity returns the max. Requires q > 0.
double weak_norm(std::span<const double> values, std::span<const double> weights, double q);

// Same with every cell of measure `cell`.
double weak_norm_uniform(std::span<const double> values, double cell, double q);

}  // namespace fgns
