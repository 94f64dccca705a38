#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fgns/field.hpp"
#include "fgns/time_mesh.hpp"

namespace fgns {

// Binary field record:
//   "FGNS" | u32 version | u8 dim | u64 N | f64 L | f64 time | u8 components
//   | components * N^dim (re, im) little-endian f64 pairs
// Within a component, wavevectors run row-major over ascending k = -N/2 ..
// N/2 - 1 per axis, axis 0 slowest. A trajectory file is the concatenation of
// one record per mesh node.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  SpectralVectorField field;
  double time = 0.0;
};

void write_snapshot(const std::string& path, const SpectralVectorField& field, double time);
Snapshot read_snapshot(const std::string& path);

void write_trajectory(const std::string& path, const TrajectoryField& traj);
// Reads every record; the mesh is rebuilt from the record times.
TrajectoryField read_trajectory(const std::string& path);
std::vector<Snapshot> read_records(const std::string& path);

// Byte image of one record (used by the writers).
std::vector<unsigned char> encode_snapshot(const SpectralVectorField& field, double time);

}  // namespace fgns
