#include "fgns/time_mesh.hpp"

#include <algorithm>
#include <cmath>

#include "fgns/errors.hpp"
#include "fgns/spectral_ops.hpp"

namespace fgns {

TimeMesh TimeMesh::graded(double horizon, int intervals, double grading) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("time horizon must be positive");
  if (intervals < 1) throw ConfigError("time mesh needs at least one interval");
  if (!(grading >= 1.0)) throw ConfigError("mesh grading must be >= 1");
  std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    nodes[static_cast<std::size_t>(i)] = horizon * std::pow(static_cast<double>(i) / intervals, grading);
  }
  nodes.back() = horizon;
  return TimeMesh(std::move(nodes), grading);
}

TimeMesh::TimeMesh(std::vector<double> nodes, double grading) : nodes_(std::move(nodes)), grading_(grading) {
  if (nodes_.size() < 2) throw ConfigError("time mesh needs at least two nodes");
  if (nodes_.front() != 0.0) throw ConfigError("time mesh must start at 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw ConfigError("time mesh nodes must be strictly increasing");
  }
}

std::size_t TimeMesh::interval_of(double t) const {
  if (t <= 0.0) return 0;
  if (t >= nodes_.back()) return nodes_.size() - 2;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

TrajectoryField::TrajectoryField(TimeMesh mesh, std::vector<SpectralVectorField> states)
    : mesh_(std::move(mesh)), states_(std::move(states)) {
  if (states_.size() != mesh_.size()) throw ConfigError("trajectory needs one state per mesh node");
  for (const auto& s : states_) {
    if (!(s.grid() == states_.front().grid()) || s.components() != states_.front().components()) {
      throw ConfigError("trajectory states must share one grid");
    }
  }
}

TrajectoryField::TrajectoryField(TimeMesh mesh, const TorusGrid& grid) : mesh_(std::move(mesh)) {
  SpectralVectorField zero(grid);
  zero.set_divergence_free(true, 1e-10);
  states_.assign(mesh_.size(), zero);
}

SpectralVectorField TrajectoryField::at(double t) const {
  const std::size_t i = mesh_.interval_of(t);
  const double a = mesh_[i];
  const double b = mesh_[i + 1];
  const double w = std::clamp((t - a) / (b - a), 0.0, 1.0);
  if (w == 0.0) return states_[i];
  if (w == 1.0) return states_[i + 1];
  return SpectralVectorField::lerp(states_[i], states_[i + 1], w);
}

bool TrajectoryField::divergence_free() const {
  return std::all_of(states_.begin(), states_.end(), [](const auto& s) { return s.divergence_free(); });
}

TrajectoryField& TrajectoryField::operator+=(const TrajectoryField& other) {
  if (!(mesh_ == other.mesh_)) throw ConfigError("trajectory meshes differ");
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] += other.states_[i];
  return *this;
}

TrajectoryField& TrajectoryField::operator-=(const TrajectoryField& other) {
  if (!(mesh_ == other.mesh_)) throw ConfigError("trajectory meshes differ");
  for (std::size_t i = 0; i < states_.size(); ++i) states_[i] -= other.states_[i];
  return *this;
}

TrajectoryField& TrajectoryField::operator*=(double s) {
  for (auto& st : states_) st *= s;
  return *this;
}

TrajectoryField caloric_extension(const SpectralVectorField& u0, const TimeMesh& mesh, double beta) {
  std::vector<SpectralVectorField> states;
  states.reserve(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) states.push_back(fractional_semigroup(u0, mesh[i], beta));
  return TrajectoryField(mesh, std::move(states));
}

}  // namespace fgns
