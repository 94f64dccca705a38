#pragma once

#include <cstddef>
#include <vector>

#include "fgns/field.hpp"

namespace fgns {

// Nodes 0 = t_0 < t_1 < ... < t_M = T.
class TimeMesh {
 public:
  // t_i = T (i / M)^gamma, clustering nodes near 0 for gamma > 1.
  static TimeMesh graded(double horizon, int intervals, double grading = 2.0);
  // Explicit nodes; validated.
  explicit TimeMesh(std::vector<double> nodes, double grading = 1.0);

  double horizon() const { return nodes_.back(); }
  double grading() const { return grading_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  // Index i with nodes[i] <= t <= nodes[i+1]; t is clamped to [0, T].
  std::size_t interval_of(double t) const;

  friend bool operator==(const TimeMesh&, const TimeMesh&) = default;

 private:
  std::vector<double> nodes_;
  double grading_ = 1.0;
};

// One field per mesh node, all on the same grid.
class TrajectoryField {
 public:
  TrajectoryField(TimeMesh mesh, std::vector<SpectralVectorField> states);
  // All-zero trajectory.
  TrajectoryField(TimeMesh mesh, const TorusGrid& grid);

  const TimeMesh& mesh() const { return mesh_; }
  const TorusGrid& grid() const { return states_.front().grid(); }
  std::size_t size() const { return states_.size(); }
  const SpectralVectorField& operator[](std::size_t i) const { return states_[i]; }
  SpectralVectorField& operator[](std::size_t i) { return states_[i]; }
  const std::vector<SpectralVectorField>& states() const { return states_; }

  // Linear interpolation of coefficients between nodes.
  SpectralVectorField at(double t) const;

  bool divergence_free() const;

  TrajectoryField& operator+=(const TrajectoryField& other);
  TrajectoryField& operator-=(const TrajectoryField& other);
  TrajectoryField& operator*=(double s);
  friend TrajectoryField operator+(TrajectoryField a, const TrajectoryField& b) { return a += b; }
  friend TrajectoryField operator-(TrajectoryField a, const TrajectoryField& b) { return a -= b; }
  friend TrajectoryField operator*(double s, TrajectoryField a) { return a *= s; }

  friend bool operator==(const TrajectoryField&, const TrajectoryField&) = default;

 private:
  TimeMesh mesh_;
  std::vector<SpectralVectorField> states_;
};

// State at node t equal to exp(-t(-Delta)^beta) u0.
TrajectoryField caloric_extension(const SpectralVectorField& u0, const TimeMesh& mesh, double beta);

}  // namespace fgns
