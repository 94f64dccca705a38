#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "fgns/field.hpp"
#include "fgns/grid.hpp"

namespace fgns {

// Generators return divergence-free fields whose largest speed on the grid
// equals `amplitude` (the zero field stays zero).
//
//   taylor_green        (sin x cos y, -cos x sin y)[ * cos z, 0 in 3D]
//   taylor_green_mixed  taylor_green + 1/2 taylor_green at wavenumber 2
//   random_bandlimited  Leray-projected random modes with |k|_inf <= band
//   curl_bump           curl of a bump stream function supported in
//                       |x - c| < 0.8 L/4 around the box center c
SpectralVectorField taylor_green(const TorusGrid& grid, double amplitude, int wavenumber = 1);
SpectralVectorField taylor_green_mixed(const TorusGrid& grid, double amplitude);
SpectralVectorField random_bandlimited(const TorusGrid& grid, double amplitude, std::mt19937_64& rng, int band = 4);
SpectralVectorField curl_bump(const TorusGrid& grid, double amplitude);
// Same with an explicit support radius in (0, L/2).
SpectralVectorField curl_bump(const TorusGrid& grid, double amplitude, double radius);

// Support radius of curl_bump's stream function.
double curl_bump_radius(const TorusGrid& grid);

// Dispatch by name; throws ConfigError for unknown kinds.
SpectralVectorField generate_initial_data(const std::string& kind, double amplitude, std::uint64_t seed,
                                          const TorusGrid& grid);

// Scales u so that max |u| on the grid equals amplitude.
void normalize_max_speed(SpectralVectorField& u, double amplitude);

}  // namespace fgns
