#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rdg/patch.hpp"

using namespace rdg;

namespace {

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
  const std::set<int> b(big.begin(), big.end());
  return std::all_of(small.begin(), small.end(), [&](int c) { return b.count(c) > 0; });
}

// 3x3 block of unit squares
PolyMesh unit_block(int n) {
  std::vector<Vec2> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i), double(j));
  std::vector<std::vector<int>> cells;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolyMesh(std::move(verts), std::move(cells));
}

}  // namespace

TEST_CASE("build_patch: depth zero is the cell itself") {
  const PolyMesh mesh = make_triangular_mesh(4);
  const Patch p = build_patch(mesh, 5, 0, NeighborRule::VonNeumann);
  CHECK(p.members == std::vector<int>{5});
  CHECK(p.nodes.size() == 1);
  CHECK(p.nodes[0] == mesh.cell_centroid(5));
}

TEST_CASE("build_patch: neighbor counts on structured meshes") {
  // interior triangle, Von Neumann, t=1: K + its 3 edge neighbours
  const PolyMesh tri = make_triangular_mesh(6);
  int interior = -1;
  for (int k = 0; k < tri.num_cells(); ++k)
    if (tri.edge_neighbors(k).size() == 3 &&
        (tri.cell_centroid(k) - Vec2(0.5, 0.5)).norm() < 0.2)
      interior = k;
  REQUIRE(interior >= 0);
  CHECK(build_patch(tri, interior, 1, NeighborRule::VonNeumann).size() == 4);

  // interior quad, Moore, t=1: the 3x3 block
  const PolyMesh quad = make_quad_mesh(5);
  const int center = 2 * 5 + 2;
  CHECK(build_patch(quad, center, 1, NeighborRule::Moore).size() == 9);
}

TEST_CASE("build_patch: monotone in depth, Von Neumann within Moore") {
  const PolyMesh mesh = make_builtin_mesh("voronoi:6");
  for (int cell : {0, 7, mesh.num_cells() / 2, mesh.num_cells() - 1}) {
    for (const auto rule : {NeighborRule::Moore, NeighborRule::VonNeumann}) {
      for (int t = 0; t < 3; ++t) {
        const Patch a = build_patch(mesh, cell, t, rule);
        const Patch b = build_patch(mesh, cell, t + 1, rule);
        CHECK(is_subset(a.members, b.members));
      }
    }
    for (int t = 0; t <= 3; ++t) {
      const Patch vn = build_patch(mesh, cell, t, NeighborRule::VonNeumann);
      const Patch mo = build_patch(mesh, cell, t, NeighborRule::Moore);
      CHECK(is_subset(vn.members, mo.members));
    }
  }
}

TEST_CASE("auto_depth: reaches the cardinality target") {
  const PolyMesh quad = make_quad_mesh(6);
  const int center = 2 * 6 + 2;
  const Patch p = auto_depth(quad, center, 1, NeighborRule::Moore, 2.0);
  CHECK(p.depth == 1);
  CHECK(p.size() == 9);  // 9 >= 2 * dim P_1 = 6

  // minimality on a triangular mesh with m = 2 (needs >= 12 nodes)
  const PolyMesh tri = make_triangular_mesh(10);
  const int cell = tri.num_cells() / 2 + 5;
  const Patch q = auto_depth(tri, cell, 2, NeighborRule::VonNeumann, 2.0);
  CHECK(q.size() >= 12);
  if (q.depth > 0)
    CHECK(build_patch(tri, cell, q.depth - 1, NeighborRule::VonNeumann).size() < 12);
}

TEST_CASE("auto_depth: mesh too coarse") {
  const PolyMesh quad = make_quad_mesh(2);  // 4 cells < dim P_6 = 28
  CHECK_THROWS_WITH_AS(auto_depth(quad, 0, 6, NeighborRule::Moore, 2.0),
                       doctest::Contains("mesh too coarse"), AssumptionBViolation);
}

TEST_CASE("perturb_nodes: magnitude zero is the identity") {
  const PolyMesh mesh = make_quad_mesh(3);
  const Patch p = build_patch(mesh, 4, 1, NeighborRule::Moore);
  const Patch q = perturb_nodes(mesh, p, 0.0, 17);
  for (int i = 0; i < p.size(); ++i) CHECK(p.nodes[i] == q.nodes[i]);
}

TEST_CASE("perturb_nodes: exact displacement, stays inside, deterministic") {
  const PolyMesh mesh = make_quad_mesh(1);  // one unit square, h_K = sqrt(2)
  const Patch p = build_patch(mesh, 0, 0, NeighborRule::VonNeumann);
  const Patch q = perturb_nodes(mesh, p, 0.1, 99);
  const double dist = (q.nodes[0] - mesh.cell_centroid(0)).norm();
  CHECK(dist == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(point_in_polygon(q.nodes[0], mesh.cell_polygon(0), /*strict=*/true));

  const Patch q2 = perturb_nodes(mesh, p, 0.1, 99);
  CHECK(q.nodes[0].x() == q2.nodes[0].x());
  CHECK(q.nodes[0].y() == q2.nodes[0].y());

  const Patch q3 = perturb_nodes(mesh, p, 0.1, 100);
  CHECK(q.nodes[0] != q3.nodes[0]);
}

TEST_CASE("perturb_nodes: a cell sees the same node from every patch") {
  const PolyMesh mesh = make_triangular_mesh(5);
  const Patch a = perturb_nodes(mesh, build_patch(mesh, 12, 2, NeighborRule::VonNeumann), 0.1, 3);
  const Patch b = perturb_nodes(mesh, build_patch(mesh, 13, 2, NeighborRule::VonNeumann), 0.1, 3);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j)
      if (a.members[i] == b.members[j]) {
        CHECK(a.nodes[i].x() == b.nodes[j].x());
        CHECK(a.nodes[i].y() == b.nodes[j].y());
      }
}

TEST_CASE("perturb_nodes: all nodes strictly inside their cells") {
  for (const char* spec : {"tri:6", "quad:5", "mixed:5", "voronoi:6"}) {
    const PolyMesh mesh = make_builtin_mesh(spec);
    CAPTURE(spec);
    for (int cell = 0; cell < mesh.num_cells(); cell += 3) {
      const Patch p = perturb_nodes(mesh, build_patch(mesh, cell, 1, NeighborRule::Moore),
                                    0.1, 2024);
      for (int i = 0; i < p.size(); ++i)
        CHECK(point_in_polygon(p.nodes[i], mesh.cell_polygon(p.members[i]), /*strict=*/true));
    }
  }
}

TEST_CASE("geometry_report: single unit square") {
  const PolyMesh mesh = make_quad_mesh(1);
  const auto geom = geometry_report(mesh, build_patch(mesh, 0, 0, NeighborRule::Moore));
  CHECK(geom.R == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(geom.r == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(geom.gamma == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(geom.d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(geom.width_estimate == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("geometry_report: 3x3 block of unit squares") {
  const PolyMesh mesh = unit_block(3);
  const Patch p = build_patch(mesh, 4, 1, NeighborRule::Moore);  // all 9 cells
  REQUIRE(p.size() == 9);
  const auto geom = geometry_report(mesh, p);
  CHECK(geom.R == doctest::Approx(3.0 * std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(geom.r == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("geometry_report: r <= R and d <= 2R across meshes") {
  for (const char* spec : {"tri:5", "quad:4", "mixed:4", "voronoi:5"}) {
    const PolyMesh mesh = make_builtin_mesh(spec);
    CAPTURE(spec);
    for (int cell = 0; cell < mesh.num_cells(); ++cell)
      for (int t : {0, 1, 2}) {
        const auto geom = geometry_report(mesh, build_patch(mesh, cell, t, NeighborRule::VonNeumann));
        CHECK(geom.r <= geom.R + 1e-12);
        CHECK(geom.d <= 2.0 * geom.R + 1e-12);
        CHECK(geom.theta > 0.0);
        CHECK(geom.theta <= M_PI);
        CHECK(geom.gamma >= 1.0);
      }
  }
}

TEST_CASE("lambda_bound_check") {
  PatchGeometry geom;
  geom.R = 2.0;
  geom.r = 1.0;
  // 2 m sqrt(R h_K) = 6 sqrt(0.02) ~ 0.849 < 1
  auto lam = lambda_bound_check(geom, 3, 0.01);
  REQUIRE(lam.has_value());
  CHECK(*lam == 2.0);

  geom.r = 0.1;
  CHECK(!lambda_bound_check(geom, 3, 0.01).has_value());

  // epsilon = 1 reduces to the same threshold as the lambda = 2 rule
  geom.r = 1.0;
  const double threshold = 3.0 * std::sqrt(2.0 * geom.R * 0.01 * 2.0);
  geom.r = threshold * 1.0001;
  auto lam2 = lambda_bound_check(geom, 3, 0.01, 1.0);
  REQUIRE(lam2.has_value());
  CHECK(*lam2 == 2.0);  // 1 + epsilon
}

TEST_CASE("lebesgue_estimate: constants give exactly 1") {
  const PolyMesh mesh = make_quad_mesh(3);
  for (int cell : {0, 4}) {
    const Patch p = build_patch(mesh, cell, 1, NeighborRule::Moore);
    CHECK(lebesgue_estimate(mesh, p, 0, 3) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("lebesgue_estimate: at least 1, rotation invariant") {
  const PolyMesh mesh = unit_block(3);
  const Patch p = build_patch(mesh, 4, 1, NeighborRule::Moore);
  std::vector<Vec2> pts;
  for (int c : p.members) {
    pts.push_back(mesh.cell_centroid(c));
    for (int v : mesh.cells()[c]) pts.push_back(mesh.vertices()[v]);
  }
  const double est = lebesgue_estimate_at(mesh, p, 1, pts);
  CHECK(est >= 1.0 - 1e-13);

  // rigid rotation of the whole configuration leaves the estimate unchanged
  const double ang = 0.73;
  Eigen::Rotation2D<double> rot(ang);
  std::vector<Vec2> rverts;
  for (const Vec2& v : mesh.vertices()) rverts.push_back(rot * v);
  const PolyMesh rmesh(rverts, mesh.cells());
  const Patch rp = build_patch(rmesh, 4, 1, NeighborRule::Moore);
  std::vector<Vec2> rpts;
  for (const Vec2& q : pts) rpts.push_back(rot * q);
  const double rest = lebesgue_estimate_at(rmesh, rp, 1, rpts);
  CHECK(rest == doctest::Approx(est).epsilon(1e-9));
}

TEST_CASE("lebesgue_estimate: collinear nodes violate unisolvence") {
  const PolyMesh mesh = make_quad_mesh(3);
  Patch p;
  p.owner_cell = 1;
  p.members = {0, 1, 2};  // bottom row, centroids on a line
  for (int c : p.members) p.nodes.push_back(mesh.cell_centroid(c));
  p.depth = 1;
  CHECK_THROWS_AS(lebesgue_estimate(mesh, p, 1, 2), AssumptionBViolation);
}

TEST_CASE("cardinality bound: structured quad patches grow like t^2") {
  const PolyMesh mesh = make_quad_mesh(12);
  const auto sub = subtriangulate(mesh);
  const auto reg = validate_regularity(mesh, sub);
  const int center = 6 * 12 + 6;
  for (int t = 1; t <= 4; ++t) {
    const Patch p = build_patch(mesh, center, t, NeighborRule::Moore);
    CHECK(p.size() == (2 * t + 1) * (2 * t + 1));
    const auto geom = geometry_report(mesh, p);
    const auto check = cardinality_bound_check(mesh, reg, p, geom);
    CHECK(check.actual == p.size());
    CHECK(check.satisfied);
  }

  // single-cell patch
  const Patch solo = build_patch(mesh, 0, 0, NeighborRule::Moore);
  const auto check = cardinality_bound_check(mesh, reg, solo, geometry_report(mesh, solo));
  CHECK(check.actual == 1);
  CHECK(check.satisfied);
}

TEST_CASE("theta formula") {
  PatchGeometry geom;
  geom.r = 1.0;
  geom.R = 2.0;
  geom.theta = 2.0 * std::asin(geom.r / (2.0 * geom.R));
  CHECK(geom.theta == doctest::Approx(0.5053605102841573).epsilon(1e-12));
}
