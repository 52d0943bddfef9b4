#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdg/geometry.hpp"
#include "rdg/quadrature.hpp"

namespace rdg {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrientationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int v0 = -1, v1 = -1;          // endpoint vertex ids
  int cell0 = -1, cell1 = -1;    // incident cells; cell1 == -1 on the boundary
  int marker = 0;                // boundary marker (boundary edges only)

  bool is_boundary() const { return cell1 < 0; }
};

/// Polygonal mesh: vertices, CCW cells, derived edge topology.
/// Immutable after construction; safe for concurrent reads.
class PolyMesh {
 public:
  /// Builds edge topology and validates the mesh invariants:
  /// simple CCW cells with positive area, manifold edges, and cell
  /// areas summing to the area enclosed by the boundary (1e-10 relative).
  PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells,
           bool auto_fix_orientation = false);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<Vec2> cell_polygon(int cell) const;
  double cell_area(int cell) const { return cell_areas_[cell]; }
  double cell_diameter(int cell) const { return cell_diameters_[cell]; }
  Vec2 cell_centroid(int cell) const { return cell_centroids_[cell]; }
  double total_area() const { return total_area_; }
  double max_cell_diameter() const;  // h

  const std::vector<int>& edges_of_cell(int cell) const { return cell_edges_[cell]; }
  const std::vector<int>& cells_of_vertex(int v) const { return vertex_cells_[v]; }

  /// Edge-sharing cell neighbours.
  std::vector<int> edge_neighbors(int cell) const;
  /// Cells whose closure touches the closure of `cell` (shares >= 1 vertex).
  std::vector<int> vertex_neighbors(int cell) const;

  /// Outward unit normal of `edge` as seen from `cell`.
  Vec2 outward_normal(int edge, int cell) const;
  double edge_length(int edge) const;
  Vec2 edge_midpoint(int edge) const;

  /// Assigns a boundary marker; throws if (v0, v1) is not a boundary edge.
  void set_boundary_marker(int v0, int v1, int marker);

 private:
  void build_edges();
  void validate(bool auto_fix_orientation);

  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<std::vector<int>> vertex_cells_;
  std::vector<double> cell_areas_;
  std::vector<double> cell_diameters_;
  std::vector<Vec2> cell_centroids_;
  double total_area_ = 0.0;
};

/// Per-cell triangulation compatible with the mesh. Triangles of each
/// cell partition the cell; convex cells use a centroid fan, non-convex
/// ones ear clipping, plain triangles are kept as-is.
struct SubTriangulation {
  std::vector<std::vector<Triangle>> cell_triangles;
  int max_triangles_per_cell = 0;       // N
  double worst_shape_ratio = 0.0;       // max h_T / rho_T

  const std::vector<Triangle>& triangles(int cell) const { return cell_triangles[cell]; }
};

struct RegularityReport {
  int max_triangles_per_cell = 0;  // N
  double sigma = 0.0;              // max h_T / rho_T
  double rho1 = 0.0;               // max h_K / h_T
  double h = 0.0;                  // max h_K
  bool shape_warning = false;
  double warn_threshold = 20.0;
};

// --- loading / writing ---------------------------------------------------

/// POLYMESH text format:
///   polymesh 1
///   <nv>  then nv lines "x y"
///   <nc>  then nc lines "k i1 ... ik"   (0-based, CCW)
///   [<nb> then nb lines "i j marker"]
/// '#' starts a comment; blank lines are ignored.
PolyMesh load_polymesh(const std::string& text, bool auto_fix_orientation = false);
std::string write_polymesh(const PolyMesh& mesh);

/// Gmsh MSH 2.2 ASCII, element types 1 (line, becomes a boundary marker),
/// 2 (triangle) and 3 (quadrangle).
PolyMesh load_msh2(const std::string& text, bool auto_fix_orientation = false);

PolyMesh load_mesh_file(const std::string& path, bool auto_fix_orientation = false);

// --- operations -----------------------------------------------------------

SubTriangulation subtriangulate(const PolyMesh& mesh);

/// Composite Gauss rule over the cell's sub-triangles, exact for total
/// degree <= `degree`.
QuadratureRule cell_quadrature(const PolyMesh& mesh, const SubTriangulation& sub,
                               int cell, int degree);

/// Gauss-Legendre rule on an edge, exact to `degree`.
QuadratureRule edge_quadrature(const PolyMesh& mesh, int edge, int degree);

RegularityReport validate_regularity(const PolyMesh& mesh, const SubTriangulation& sub,
                                     double warn_threshold = 20.0);

// --- built-in generators (structured test meshes) --------------------------

/// n x n squares on [0,1]^2, each split into two triangles. jitter > 0
/// displaces interior grid vertices by jitter/n (deterministic in seed),
/// giving a quasi-uniform family instead of a symmetric lattice.
PolyMesh make_triangular_mesh(int n, double jitter = 0.0, std::uint64_t seed = 0);
/// n x n squares on [0,1]^2; jitter as in make_triangular_mesh.
PolyMesh make_quad_mesh(int n, double jitter = 0.0, std::uint64_t seed = 0);
/// Checkerboard of quads and pairs of triangles on [0,1]^2.
PolyMesh make_mixed_mesh(int n, double jitter = 0.0, std::uint64_t seed = 0);
/// Voronoi tessellation of [0,1]^2 from a triangular seed lattice with
/// spacing ~1/n; jitter > 0 displaces seeds by jitter/n (uniform square,
/// deterministic in `seed`). Interior cells are hexagons; clipped boundary
/// cells come out as pentagons and quadrilaterals.
PolyMesh make_voronoi_mesh(int n, double jitter = 0.0, std::uint64_t seed = 0);

/// Parses "tri:16", "quad:10", "mixed:8", "voronoi:12" or, with options,
/// "tri:16:jitter=0.3,seed=7" into a generated mesh.
PolyMesh make_builtin_mesh(const std::string& spec);

}  // namespace rdg
