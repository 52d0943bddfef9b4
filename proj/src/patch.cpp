#include "rdg/patch.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace rdg {

// --- PolyBasis --------------------------------------------------------------

PolyBasis::PolyBasis(int degree, const Vec2& center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("PolyBasis: degree must be >= 0");
  if (scale <= 0.0) throw std::invalid_argument("PolyBasis: scale must be positive");
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exponents_.emplace_back(a, d - a);
}

Eigen::RowVectorXd PolyBasis::row(const Vec2& p) const {
  const double X = (p.x() - center_.x()) / scale_;
  const double Y = (p.y() - center_.y()) / scale_;
  // powers up to degree, then one product per term
  std::vector<double> px(degree_ + 1, 1.0), py(degree_ + 1, 1.0);
  for (int i = 1; i <= degree_; ++i) {
    px[i] = px[i - 1] * X;
    py[i] = py[i - 1] * Y;
  }
  Eigen::RowVectorXd out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = px[exponents_[k].first] * py[exponents_[k].second];
  return out;
}

Eigen::Matrix2Xd PolyBasis::gradient_rows(const Vec2& p) const {
  const double X = (p.x() - center_.x()) / scale_;
  const double Y = (p.y() - center_.y()) / scale_;
  std::vector<double> px(degree_ + 1, 1.0), py(degree_ + 1, 1.0);
  for (int i = 1; i <= degree_; ++i) {
    px[i] = px[i - 1] * X;
    py[i] = py[i - 1] * Y;
  }
  Eigen::Matrix2Xd out(2, dim());
  for (int k = 0; k < dim(); ++k) {
    const auto [a, b] = exponents_[k];
    out(0, k) = a > 0 ? a * px[a - 1] * py[b] / scale_ : 0.0;
    out(1, k) = b > 0 ? b * px[a] * py[b - 1] / scale_ : 0.0;
  }
  return out;
}

// --- patch construction -------------------------------------------------------

Patch build_patch(const PolyMesh& mesh, int cell, int depth, NeighborRule rule) {
  if (depth < 0) throw std::invalid_argument("build_patch: depth must be >= 0");
  Patch patch;
  patch.owner_cell = cell;
  patch.depth = depth;
  patch.rule = rule;

  std::unordered_set<int> seen{cell};
  patch.members.push_back(cell);
  std::vector<int> ring{cell};
  for (int t = 0; t < depth; ++t) {
    std::vector<int> next;
    for (int c : ring) {
      const auto neighbors = rule == NeighborRule::Moore ? mesh.vertex_neighbors(c)
                                                         : mesh.edge_neighbors(c);
      for (int nb : neighbors)
        if (seen.insert(nb).second) next.push_back(nb);
    }
    std::sort(next.begin(), next.end());
    patch.members.insert(patch.members.end(), next.begin(), next.end());
    ring = std::move(next);
    if (ring.empty()) break;
  }
  patch.nodes.reserve(patch.members.size());
  for (int c : patch.members) patch.nodes.push_back(mesh.cell_centroid(c));
  return patch;
}

PolyBasis patch_basis(const PolyMesh& mesh, const Patch& patch, int m) {
  double d = mesh.cell_diameter(patch.owner_cell);
  for (std::size_t i = 0; i < patch.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < patch.nodes.size(); ++j)
      d = std::max(d, (patch.nodes[i] - patch.nodes[j]).norm());
  return PolyBasis(m, mesh.cell_centroid(patch.owner_cell), d);
}

Eigen::MatrixXd patch_design_matrix(const PolyMesh& mesh, const Patch& patch, int m) {
  const PolyBasis basis = patch_basis(mesh, patch, m);
  Eigen::MatrixXd B(patch.size(), basis.dim());
  for (int i = 0; i < patch.size(); ++i) B.row(i) = basis.row(patch.nodes[i]);
  return B;
}

namespace {

bool design_full_rank(const Eigen::MatrixXd& B) {
  if (B.rows() < B.cols()) return false;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(1e-10);
  return qr.rank() == B.cols();
}

}  // namespace

Patch auto_depth(const PolyMesh& mesh, int cell, int m, NeighborRule rule, double safety) {
  if (m < 0) throw std::invalid_argument("auto_depth: m must be >= 0");
  if (safety < 1.0) throw std::invalid_argument("auto_depth: safety must be >= 1");
  const int target = static_cast<int>(std::ceil(safety * PolyBasis::dimension(m)));
  for (int t = 0;; ++t) {
    Patch patch = build_patch(mesh, cell, t, rule);
    if (patch.size() >= target && design_full_rank(patch_design_matrix(mesh, patch, m)))
      return patch;
    if (patch.size() == mesh.num_cells())
      throw AssumptionBViolation("mesh too coarse for order " + std::to_string(m) +
                                 " (patch of cell " + std::to_string(cell) +
                                 " exhausted the mesh with " + std::to_string(patch.size()) +
                                 " cells, need " + std::to_string(target) + ")");
  }
}

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(uint64_t& state) { return double(splitmix64(state) >> 11) * 0x1.0p-53; }

}  // namespace

Patch perturb_nodes(const PolyMesh& mesh, const Patch& patch, double magnitude,
                    std::uint64_t seed) {
  if (magnitude < 0.0 || magnitude >= 1.0)
    throw std::invalid_argument("perturb_nodes: magnitude must be in [0, 1)");
  Patch out = patch;
  if (magnitude == 0.0) return out;

  for (int i = 0; i < patch.size(); ++i) {
    const int cell = patch.members[i];
    const auto poly = mesh.cell_polygon(cell);
    const Vec2 center = mesh.cell_centroid(cell);
    const double radius = magnitude * mesh.cell_diameter(cell);

    // keyed by (seed, cell) so every patch sees the same node for a cell
    uint64_t state = (seed + 0x9e3779b97f4a7c15ull) ^ (uint64_t(cell) * 0xff51afd7ed558ccdull);
    splitmix64(state);

    Vec2 node = center;
    bool placed = false;
    Vec2 dir(1.0, 0.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double angle = 2.0 * M_PI * unit_double(state);
      dir = Vec2(std::cos(angle), std::sin(angle));
      const Vec2 candidate = center + radius * dir;
      if (point_in_polygon(candidate, poly, /*strict=*/true)) {
        node = candidate;
        placed = true;
        break;
      }
    }
    if (!placed) {
      // shrink toward the barycenter along the last direction
      double rshrunk = radius;
      for (int k = 0; k < 64 && !placed; ++k) {
        rshrunk *= 0.5;
        const Vec2 candidate = center + rshrunk * dir;
        if (point_in_polygon(candidate, poly, /*strict=*/true)) {
          node = candidate;
          placed = true;
        }
      }
    }
    out.nodes[i] = node;
  }
  return out;
}

PatchGeometry geometry_report(const PolyMesh& mesh, const Patch& patch) {
  PatchGeometry geom;

  std::vector<Vec2> verts;
  double area = 0.0;
  Vec2 weighted = Vec2::Zero();
  std::unordered_set<int> vertex_ids;
  for (int c : patch.members) {
    area += mesh.cell_area(c);
    weighted += mesh.cell_area(c) * mesh.cell_centroid(c);
    for (int v : mesh.cells()[c])
      if (vertex_ids.insert(v).second) verts.push_back(mesh.vertices()[v]);
  }
  const Vec2 centroid = weighted / area;

  geom.d = polygon_diameter(verts);
  for (const Vec2& v : verts) geom.R = std::max(geom.R, (v - centroid).norm());

  // patch boundary = edges with exactly one incident member cell
  std::unordered_set<int> member_set(patch.members.begin(), patch.members.end());
  const Vec2 x0 = mesh.cell_centroid(patch.owner_cell);
  geom.r = std::numeric_limits<double>::max();
  for (int c : patch.members)
    for (int e : mesh.edges_of_cell(c)) {
      const Edge& edge = mesh.edges()[e];
      const int inside = (member_set.count(edge.cell0) ? 1 : 0) +
                         (edge.cell1 >= 0 && member_set.count(edge.cell1) ? 1 : 0);
      if (inside != 1) continue;
      geom.r = std::min(geom.r, point_segment_distance(x0, mesh.vertices()[edge.v0],
                                                       mesh.vertices()[edge.v1]));
    }
  if (!std::isfinite(geom.r)) geom.r = 0.0;

  geom.gamma = geom.r > 0.0 ? geom.d / geom.r : std::numeric_limits<double>::infinity();
  const double s = geom.R > 0.0 ? std::clamp(geom.r / (2.0 * geom.R), 0.0, 1.0) : 0.0;
  geom.theta = 2.0 * std::asin(s);
  geom.width_estimate = convex_polygon_width(convex_hull(verts));
  return geom;
}

std::optional<double> lambda_bound_check(const PatchGeometry& geom, int m, double h_K,
                                         std::optional<double> epsilon) {
  if (geom.r > 2.0 * m * std::sqrt(geom.R * h_K)) return 2.0;
  if (epsilon && *epsilon > 0.0 &&
      geom.r > m * std::sqrt(2.0 * geom.R * h_K * (1.0 + 1.0 / *epsilon)))
    return 1.0 + *epsilon;
  return std::nullopt;
}

double lebesgue_estimate_at(const PolyMesh& mesh, const Patch& patch, int m,
                            const std::vector<Vec2>& points) {
  const Eigen::MatrixXd B = patch_design_matrix(mesh, patch, m);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
  cod.setThreshold(1e-10);
  if (cod.rank() < B.cols())
    throw AssumptionBViolation("patch of cell " + std::to_string(patch.owner_cell) +
                               ": design matrix rank " + std::to_string(cod.rank()) + " < " +
                               std::to_string(B.cols()));
  const Eigen::MatrixXd pinv = cod.pseudoInverse();  // dim x n
  const PolyBasis basis = patch_basis(mesh, patch, m);
  double worst = 0.0;
  for (const Vec2& y : points) worst = std::max(worst, (basis.row(y) * pinv).cwiseAbs().sum());
  return worst;
}

double lebesgue_estimate(const PolyMesh& mesh, const Patch& patch, int m, int sample_density) {
  std::vector<Vec2> points;
  for (int c : patch.members) {
    const auto poly = mesh.cell_polygon(c);
    points.insert(points.end(), poly.begin(), poly.end());
    Vec2 lo = poly[0], hi = poly[0];
    for (const Vec2& p : poly) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    for (int i = 0; i <= sample_density; ++i)
      for (int j = 0; j <= sample_density; ++j) {
        const Vec2 p(lo.x() + (hi.x() - lo.x()) * i / sample_density,
                     lo.y() + (hi.y() - lo.y()) * j / sample_density);
        if (point_in_polygon(p, poly)) points.push_back(p);
      }
  }
  return lebesgue_estimate_at(mesh, patch, m, points);
}

CardinalityCheck cardinality_bound_check(const PolyMesh& mesh, const RegularityReport& reg,
                                         const Patch& patch, const PatchGeometry& geom) {
  CardinalityCheck check;
  const double h_K = mesh.cell_diameter(patch.owner_cell);
  check.bound = reg.sigma * reg.sigma * reg.rho1 * reg.rho1 /
                std::max(1, reg.max_triangles_per_cell) * geom.R * geom.R / (h_K * h_K);
  check.actual = patch.size();
  check.satisfied = check.actual <= check.bound;
  return check;
}

}  // namespace rdg
