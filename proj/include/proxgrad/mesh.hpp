#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <vector>

#include "proxgrad/penalty.hpp"

namespace proxgrad {

/// Piecewise-constant control: one value per triangle.
struct ControlField {
  Eigen::VectorXd values;
};

/// Piecewise-linear state: one value per mesh node, zero on the boundary
/// for solutions of the Dirichlet problems.
struct StateField {
  Eigen::VectorXd values;
};

/// Uniform Friedrichs-Keller triangulation of the unit square: n x n squares,
/// each split along the diagonal from its lower-left to its upper-right corner.
/// Node (i, j) sits at (i/n, j/n) with index j (n + 1) + i.
class Mesh {
 public:
  explicit Mesh(int n);

  [[nodiscard]] int cells_per_side() const { return n_; }
  /// Longest edge, sqrt(2)/n.
  [[nodiscard]] double h() const;
  [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int num_interior() const { return static_cast<int>(interior_.size()); }

  [[nodiscard]] const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  /// Node indices of the interior (free) nodes, ascending.
  [[nodiscard]] const std::vector<int>& interior_nodes() const { return interior_; }
  /// Position of a node among interior nodes, -1 on the boundary.
  [[nodiscard]] int interior_index(int node) const { return interior_index_[node]; }
  [[nodiscard]] bool is_boundary(int node) const { return interior_index_[node] < 0; }
  /// All triangles have area 1/(2 n^2).
  [[nodiscard]] double triangle_area() const { return area_; }
  [[nodiscard]] Eigen::Vector2d centroid(int t) const;

  [[nodiscard]] ControlField zero_control() const;
  [[nodiscard]] ControlField constant_control(double v) const;
  [[nodiscard]] StateField zero_state() const;

 private:
  int n_;
  double area_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> interior_;
  std::vector<int> interior_index_;
};

/// Throws ParameterError for n < 2.
[[nodiscard]] Mesh build_mesh(int n);

// Piecewise-constant quadrature: sum over triangles of area * integrand.
[[nodiscard]] double control_l2_sq(const Mesh& mesh, const ControlField& u);
[[nodiscard]] double control_l1(const Mesh& mesh, const ControlField& u);
/// Integral of |u|^p over the domain.
[[nodiscard]] double control_lp_pow(const Mesh& mesh, const ControlField& u, double p);
/// Integral of g(u); returns +inf (never an overflowed finite value) when any
/// cell is infeasible for the penalty.
[[nodiscard]] double penalty_integral(const Mesh& mesh, const ControlField& u, const PenaltySpec& pen);
/// Measure of {u != 0}.
[[nodiscard]] double support_measure(const Mesh& mesh, const ControlField& u);
/// Measure of the symmetric difference of the supports.
[[nodiscard]] double support_change(const Mesh& mesh, const ControlField& u1, const ControlField& u2);

/// CSV columns: triangle_index,centroid_x,centroid_y,value
void write_control_csv(std::ostream& out, const Mesh& mesh, const ControlField& u);
/// CSV columns: node_x,node_y,value
void write_state_csv(std::ostream& out, const Mesh& mesh, const StateField& y);

}  // namespace proxgrad
