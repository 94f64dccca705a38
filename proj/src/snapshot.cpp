#include "fgns/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fgns/errors.hpp"

namespace fgns {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 8 + 8 + 8 + 1;

void put_le(std::vector<unsigned char>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

// File position j on an axis holds k = j - N/2, i.e. FFT index (j + N/2) mod N.
std::size_t fft_index_of_file(const TorusGrid& grid, std::size_t file_lin) {
  const int n = grid.n_axis();
  MultiIndex idx = grid.multi_index(file_lin);
  for (int d = 0; d < grid.dim(); ++d) {
    auto& i = idx[static_cast<std::size_t>(d)];
    i = (i + n / 2) % n;
  }
  return grid.linear_index(idx);
}

}  // namespace

std::vector<unsigned char> encode_snapshot(const SpectralVectorField& field, double time) {
  const TorusGrid& grid = field.grid();
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + static_cast<std::size_t>(field.components()) * grid.size() * 16);
  for (char c : {'F', 'G', 'N', 'S'}) out.push_back(static_cast<unsigned char>(c));
  put_le(out, kSnapshotVersion, 4);
  put_le(out, static_cast<std::uint64_t>(grid.dim()), 1);
  put_le(out, static_cast<std::uint64_t>(grid.n_axis()), 8);
  put_le(out, std::bit_cast<std::uint64_t>(grid.box_len()), 8);
  put_le(out, std::bit_cast<std::uint64_t>(time), 8);
  put_le(out, static_cast<std::uint64_t>(field.components()), 1);
  for (int c = 0; c < field.components(); ++c) {
    const CoeffArray& co = field.component(c);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Complex z = co[fft_index_of_file(grid, j)];
      put_le(out, std::bit_cast<std::uint64_t>(z.real()), 8);
      put_le(out, std::bit_cast<std::uint64_t>(z.imag()), 8);
    }
  }
  return out;
}

namespace {

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes, bool append) {
  std::ofstream os(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
  if (!os) throw ConfigError("cannot open snapshot file for writing: " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw InvariantViolation("failed writing snapshot: " + path);
}

Snapshot decode_one(const std::vector<unsigned char>& buf, std::size_t& pos, const std::string& path) {
  if (buf.size() - pos < kHeaderBytes) throw ConfigError("truncated snapshot header in " + path);
  const unsigned char* p = buf.data() + pos;
  if (std::memcmp(p, "FGNS", 4) != 0) throw ConfigError("bad snapshot magic in " + path);
  const auto version = static_cast<std::uint32_t>(get_le(p + 4, 4));
  if (version != kSnapshotVersion) throw ConfigError("unsupported snapshot version " + std::to_string(version));
  const int dim = static_cast<int>(get_le(p + 8, 1));
  const std::uint64_t n = get_le(p + 9, 8);
  const double len = std::bit_cast<double>(get_le(p + 17, 8));
  const double time = std::bit_cast<double>(get_le(p + 25, 8));
  const int comps = static_cast<int>(get_le(p + 33, 1));
  if (n > (1u << 16)) throw ConfigError("snapshot grid size out of range in " + path);
  const TorusGrid grid(dim, len, static_cast<int>(n));
  if (comps < 1) throw ConfigError("snapshot has no components: " + path);
  const std::size_t payload = static_cast<std::size_t>(comps) * grid.size() * 16;
  pos += kHeaderBytes;
  if (buf.size() - pos < payload) throw ConfigError("truncated snapshot payload in " + path);
  SpectralVectorField f(grid, comps);
  const unsigned char* q = buf.data() + pos;
  for (int c = 0; c < comps; ++c) {
    CoeffArray& co = f.component(c);
    for (std::size_t j = 0; j < grid.size(); ++j, q += 16) {
      co[fft_index_of_file(grid, j)] =
          Complex(std::bit_cast<double>(get_le(q, 8)), std::bit_cast<double>(get_le(q + 8, 8)));
    }
  }
  pos += payload;
  // The flag is not stored; re-derive it.
  f.set_divergence_free(f.divergence_defect() <= 1e-10, 1e-10);
  return {std::move(f), time};
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open snapshot: " + path);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralVectorField& field, double time) {
  write_bytes(path, encode_snapshot(field, time), false);
}

Snapshot read_snapshot(const std::string& path) {
  const auto buf = slurp(path);
  std::size_t pos = 0;
  Snapshot s = decode_one(buf, pos, path);
  if (pos != buf.size()) throw ConfigError("trailing bytes after snapshot record in " + path);
  return s;
}

void write_trajectory(const std::string& path, const TrajectoryField& traj) {
  std::vector<unsigned char> all;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto rec = encode_snapshot(traj[i], traj.mesh()[i]);
    all.insert(all.end(), rec.begin(), rec.end());
  }
  write_bytes(path, all, false);
}

std::vector<Snapshot> read_records(const std::string& path) {
  const auto buf = slurp(path);
  std::vector<Snapshot> out;
  std::size_t pos = 0;
  while (pos < buf.size()) out.push_back(decode_one(buf, pos, path));
  if (out.empty()) throw ConfigError("empty snapshot file: " + path);
  return out;
}

TrajectoryField read_trajectory(const std::string& path) {
  auto recs = read_records(path);
  if (recs.size() < 2) throw ConfigError("trajectory file needs at least two records: " + path);
  std::vector<double> times;
  std::vector<SpectralVectorField> states;
  for (auto& r : recs) {
    times.push_back(r.time);
    states.push_back(std::move(r.field));
  }
  return TrajectoryField(TimeMesh(std::move(times)), std::move(states));
}

}  // namespace fgns
