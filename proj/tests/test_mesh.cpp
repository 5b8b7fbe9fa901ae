#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "proxgrad/errors.hpp"
#include "proxgrad/mesh.hpp"

using namespace proxgrad;

TEST_CASE("mesh counts and geometry") {
  for (int n : {2, 3, 8, 20}) {
    const Mesh mesh(n);
    CHECK(mesh.num_nodes() == (n + 1) * (n + 1));
    CHECK(mesh.num_triangles() == 2 * n * n);
    CHECK(mesh.num_interior() == (n - 1) * (n - 1));
    CHECK(mesh.h() == doctest::Approx(std::sqrt(2.0) / n));
    CHECK(mesh.triangle_area() == doctest::Approx(0.5 / (n * n)));

    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles()[t];
      const Eigen::Vector2d e1 = mesh.nodes()[tri[1]] - mesh.nodes()[tri[0]];
      const Eigen::Vector2d e2 = mesh.nodes()[tri[2]] - mesh.nodes()[tri[0]];
      const double signed_area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
      CHECK(signed_area == doctest::Approx(mesh.triangle_area()));  // counter-clockwise
      total += signed_area;
      const Eigen::Vector2d c = mesh.centroid(t);
      CHECK(c.x() > 0.0);
      CHECK(c.x() < 1.0);
    }
    CHECK(total == doctest::Approx(1.0));
  }
}

TEST_CASE("node numbering and boundary flags") {
  const Mesh mesh(4);
  CHECK(mesh.nodes()[7].x() == doctest::Approx(0.5));  // (i, j) = (2, 1)
  CHECK(mesh.nodes()[7].y() == doctest::Approx(0.25));
  int boundary = 0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& x = mesh.nodes()[i];
    const bool on_edge = x.x() == 0.0 || x.y() == 0.0 || x.x() == 1.0 || x.y() == 1.0;
    CHECK(mesh.is_boundary(i) == on_edge);
    if (on_edge) ++boundary;
  }
  CHECK(boundary == 16);
  for (int k = 0; k < mesh.num_interior(); ++k) CHECK(mesh.interior_index(mesh.interior_nodes()[k]) == k);
}

TEST_CASE("each interior edge is shared by exactly two triangles") {
  const Mesh mesh(5);
  std::multiset<std::pair<int, int>> edges;
  for (const auto& tri : mesh.triangles())
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  // Euler: V - E + F = 1 for a triangulated disk
  std::set<std::pair<int, int>> unique(edges.begin(), edges.end());
  CHECK(mesh.num_nodes() - static_cast<int>(unique.size()) + mesh.num_triangles() == 1);
  for (const auto& e : unique) {
    const auto c = edges.count(e);
    const auto& p = mesh.nodes()[e.first];
    const auto& q = mesh.nodes()[e.second];
    auto side = [](double x, double y) { return x == y && (x == 0.0 || x == 1.0); };
    const bool bnd = side(p.x(), q.x()) || side(p.y(), q.y());
    CHECK(c == (bnd ? 1u : 2u));
  }
}

TEST_CASE("piecewise-constant integrals") {
  const Mesh mesh(10);
  const ControlField one = mesh.constant_control(1.0);
  CHECK(control_l2_sq(mesh, one) == doctest::Approx(1.0));
  CHECK(control_l1(mesh, mesh.constant_control(-2.0)) == doctest::Approx(2.0));
  CHECK(control_lp_pow(mesh, mesh.constant_control(4.0), 0.5) == doctest::Approx(2.0));
  CHECK(support_measure(mesh, mesh.zero_control()) == 0.0);
  CHECK(support_measure(mesh, one) == doctest::Approx(1.0));

  ControlField half = mesh.zero_control();
  for (int t = 0; t < mesh.num_triangles() / 2; ++t) half.values[t] = 3.0;
  CHECK(support_measure(mesh, half) == doctest::Approx(0.5));
  CHECK(support_change(mesh, half, one) == doctest::Approx(0.5));
  CHECK(support_change(mesh, half, half) == 0.0);
}

TEST_CASE("penalty integral is infinite when infeasible") {
  const Mesh mesh(4);
  PenaltySpec integer;
  integer.kind = PenaltyKind::IntegerIndicator;
  integer.box_bound = 2.0;
  ControlField u = mesh.constant_control(1.0);
  CHECK(penalty_integral(mesh, u, integer) == 0.0);
  u.values[3] = 0.5;
  CHECK(std::isinf(penalty_integral(mesh, u, integer)));
  u.values[3] = 3.0;
  CHECK(std::isinf(penalty_integral(mesh, u, integer)));

  PenaltySpec l0;
  l0.kind = PenaltyKind::L0;
  ControlField v = mesh.zero_control();
  v.values[0] = -0.3;
  v.values[1] = 5.0;
  CHECK(penalty_integral(mesh, v, l0) == doctest::Approx(2.0 * mesh.triangle_area()));
}

TEST_CASE("errors and CSV output") {
  CHECK_THROWS_AS((void)build_mesh(1), ParameterError);
  const Mesh a(3), b(4);
  CHECK_THROWS_AS((void)support_change(a, a.zero_control(), b.zero_control()), ParameterError);

  std::ostringstream out;
  write_control_csv(out, a, a.constant_control(1.5));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "triangle_index,centroid_x,centroid_y,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == a.num_triangles());

  std::ostringstream st;
  write_state_csv(st, a, a.zero_state());
  CHECK(st.str().rfind("node_x,node_y,value\n", 0) == 0);
}
