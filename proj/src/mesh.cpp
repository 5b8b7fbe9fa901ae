#include "proxgrad/mesh.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "proxgrad/errors.hpp"

namespace proxgrad {

namespace {

void check_size(const Mesh& mesh, const ControlField& u) {
  if (u.values.size() != mesh.num_triangles())
    throw ParameterError("control field has " + std::to_string(u.values.size()) +
                         " cells, mesh has " + std::to_string(mesh.num_triangles()));
}

}  // namespace

Mesh::Mesh(int n) : n_(n) {
  if (n < 2) throw ParameterError("mesh needs at least 2 cells per side");
  area_ = 0.5 / (static_cast<double>(n) * n);
  const int side = n + 1;
  nodes_.reserve(side * side);
  interior_index_.assign(side * side, -1);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      nodes_.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
      if (i > 0 && i < n && j > 0 && j < n) {
        interior_index_[j * side + i] = static_cast<int>(interior_.size());
        interior_.push_back(j * side + i);
      }
    }
  }
  triangles_.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = j * side + i, b = a + 1, c = a + side + 1, d = a + side;
      triangles_.push_back({a, b, c});
      triangles_.push_back({a, c, d});
    }
  }
}

double Mesh::h() const { return std::sqrt(2.0) / n_; }

Eigen::Vector2d Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (nodes_[tri[0]] + nodes_[tri[1]] + nodes_[tri[2]]) / 3.0;
}

ControlField Mesh::zero_control() const { return {Eigen::VectorXd::Zero(num_triangles())}; }
ControlField Mesh::constant_control(double v) const {
  return {Eigen::VectorXd::Constant(num_triangles(), v)};
}
StateField Mesh::zero_state() const { return {Eigen::VectorXd::Zero(num_nodes())}; }

Mesh build_mesh(int n) { return Mesh(n); }

double control_l2_sq(const Mesh& mesh, const ControlField& u) {
  check_size(mesh, u);
  return mesh.triangle_area() * u.values.squaredNorm();
}

double control_l1(const Mesh& mesh, const ControlField& u) {
  check_size(mesh, u);
  return mesh.triangle_area() * u.values.lpNorm<1>();
}

double control_lp_pow(const Mesh& mesh, const ControlField& u, double p) {
  check_size(mesh, u);
  double sum = 0.0;
  for (double v : u.values) {
    if (v != 0.0) sum += std::pow(std::abs(v), p);
  }
  return mesh.triangle_area() * sum;
}

double penalty_integral(const Mesh& mesh, const ControlField& u, const PenaltySpec& pen) {
  check_size(mesh, u);
  double sum = 0.0;
  for (double v : u.values) {
    const double g = pen.eval(v);
    if (!std::isfinite(g)) return kInf;
    sum += g;
  }
  return mesh.triangle_area() * sum;
}

double support_measure(const Mesh& mesh, const ControlField& u) {
  check_size(mesh, u);
  return mesh.triangle_area() * static_cast<double>((u.values.array() != 0.0).count());
}

double support_change(const Mesh& mesh, const ControlField& u1, const ControlField& u2) {
  check_size(mesh, u1);
  check_size(mesh, u2);
  const auto flips = ((u1.values.array() != 0.0) != (u2.values.array() != 0.0)).count();
  return mesh.triangle_area() * static_cast<double>(flips);
}

void write_control_csv(std::ostream& out, const Mesh& mesh, const ControlField& u) {
  check_size(mesh, u);
  out << "triangle_index,centroid_x,centroid_y,value\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.centroid(t);
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g}\n", t, c.x(), c.y(), u.values[t]);
  }
}

void write_state_csv(std::ostream& out, const Mesh& mesh, const StateField& y) {
  if (y.values.size() != mesh.num_nodes()) throw ParameterError("state field does not match mesh");
  out << "node_x,node_y,value\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& x = mesh.nodes()[i];
    fmt::print(out, "{:.17g},{:.17g},{:.17g}\n", x.x(), x.y(), y.values[i]);
  }
}

}  // namespace proxgrad
