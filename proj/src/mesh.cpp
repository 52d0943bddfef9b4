#include "rdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace rdg {

// --- PolyMesh ---------------------------------------------------------------

PolyMesh::PolyMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells,
                   bool auto_fix_orientation)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  validate(auto_fix_orientation);
  build_edges();

  cell_areas_.resize(cells_.size());
  cell_diameters_.resize(cells_.size());
  cell_centroids_.resize(cells_.size());
  total_area_ = 0.0;
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const auto poly = cell_polygon(static_cast<int>(k));
    cell_areas_[k] = polygon_signed_area(poly);
    cell_diameters_[k] = polygon_diameter(poly);
    cell_centroids_[k] = polygon_centroid(poly);
    total_area_ += cell_areas_[k];
  }

  // Green's theorem over the boundary edges (traversed in cell-CCW order)
  // gives the area enclosed by the mesh boundary; compare with the cell sum.
  double boundary_area = 0.0;
  for (const Edge& e : edges_) {
    if (!e.is_boundary()) continue;
    const auto& cell = cells_[e.cell0];
    const int n = static_cast<int>(cell.size());
    for (int i = 0; i < n; ++i) {
      if (cell[i] == e.v0 && cell[(i + 1) % n] == e.v1) {
        const Vec2& p = vertices_[e.v0];
        const Vec2& q = vertices_[e.v1];
        boundary_area += 0.5 * (p.x() * q.y() - q.x() * p.y());
        break;
      }
      if (cell[i] == e.v1 && cell[(i + 1) % n] == e.v0) {
        const Vec2& p = vertices_[e.v1];
        const Vec2& q = vertices_[e.v0];
        boundary_area += 0.5 * (p.x() * q.y() - q.x() * p.y());
        break;
      }
    }
  }
  if (std::abs(total_area_ - boundary_area) > 1e-10 * std::abs(boundary_area))
    throw TopologyError("cell areas sum to " + std::to_string(total_area_) +
                        " but the boundary encloses " + std::to_string(boundary_area) +
                        " (overlapping cells or gaps)");
}

void PolyMesh::validate(bool auto_fix_orientation) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    auto& cell = cells_[k];
    if (cell.size() < 3)
      throw TopologyError("cell " + std::to_string(k) + " has fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= nv)
        throw TopologyError("cell " + std::to_string(k) + " references vertex " +
                            std::to_string(v) + " out of range");
    std::vector<int> sorted = cell;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw TopologyError("cell " + std::to_string(k) + " repeats a vertex");

    const auto poly = cell_polygon(static_cast<int>(k));
    const double area = polygon_signed_area(poly);
    if (area < 0.0) {
      if (!auto_fix_orientation)
        throw OrientationError("cell " + std::to_string(k) +
                               " is clockwise (signed area " + std::to_string(area) + ")");
      std::reverse(cell.begin(), cell.end());
    } else if (area == 0.0) {
      throw TopologyError("cell " + std::to_string(k) + " has zero area");
    }
  }
}

void PolyMesh::build_edges() {
  std::map<std::pair<int, int>, int> edge_ids;
  cell_edges_.assign(cells_.size(), {});
  vertex_cells_.assign(vertices_.size(), {});

  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const auto& cell = cells_[k];
    const int n = static_cast<int>(cell.size());
    for (int i = 0; i < n; ++i) {
      const int a = cell[i];
      const int b = cell[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.cell0 = static_cast<int>(k);
        it = edge_ids.emplace(key, static_cast<int>(edges_.size())).first;
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.cell1 >= 0)
          throw TopologyError("edge (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ") has more than two incident cells");
        e.cell1 = static_cast<int>(k);
      }
      cell_edges_[k].push_back(it->second);
    }
    for (int v : cell) vertex_cells_[v].push_back(static_cast<int>(k));
  }
}

std::vector<Vec2> PolyMesh::cell_polygon(int cell) const {
  std::vector<Vec2> poly;
  poly.reserve(cells_[cell].size());
  for (int v : cells_[cell]) poly.push_back(vertices_[v]);
  return poly;
}

double PolyMesh::max_cell_diameter() const {
  double h = 0.0;
  for (double d : cell_diameters_) h = std::max(h, d);
  return h;
}

std::vector<int> PolyMesh::edge_neighbors(int cell) const {
  std::vector<int> out;
  for (int e : cell_edges_[cell]) {
    const Edge& edge = edges_[e];
    const int other = edge.cell0 == cell ? edge.cell1 : edge.cell0;
    if (other >= 0) out.push_back(other);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> PolyMesh::vertex_neighbors(int cell) const {
  std::vector<int> out;
  for (int v : cells_[cell])
    for (int c : vertex_cells_[v])
      if (c != cell) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Vec2 PolyMesh::outward_normal(int edge, int cell) const {
  const Edge& e = edges_[edge];
  const auto& cv = cells_[cell];
  const int n = static_cast<int>(cv.size());
  for (int i = 0; i < n; ++i) {
    int a = cv[i], b = cv[(i + 1) % n];
    if ((a == e.v0 && b == e.v1) || (a == e.v1 && b == e.v0)) {
      // (a -> b) runs CCW around the cell, so the outward normal is the
      // right-hand rotation of the edge tangent.
      Vec2 t = vertices_[b] - vertices_[a];
      Vec2 nrm(t.y(), -t.x());
      return nrm.normalized();
    }
  }
  throw std::logic_error("outward_normal: edge not on cell");
}

double PolyMesh::edge_length(int edge) const {
  const Edge& e = edges_[edge];
  return (vertices_[e.v1] - vertices_[e.v0]).norm();
}

Vec2 PolyMesh::edge_midpoint(int edge) const {
  const Edge& e = edges_[edge];
  return 0.5 * (vertices_[e.v0] + vertices_[e.v1]);
}

void PolyMesh::set_boundary_marker(int v0, int v1, int marker) {
  const auto key = std::minmax(v0, v1);
  for (Edge& e : edges_) {
    if (e.v0 == key.first && e.v1 == key.second) {
      if (!e.is_boundary())
        throw TopologyError("edge (" + std::to_string(v0) + ", " + std::to_string(v1) +
                            ") is interior, cannot carry a boundary marker");
      e.marker = marker;
      return;
    }
  }
  throw TopologyError("no edge (" + std::to_string(v0) + ", " + std::to_string(v1) + ") in mesh");
}

// --- text formats -----------------------------------------------------------

namespace {

// strips comments/blanks and reports 1-based source line numbers
class LineReader {
 public:
  explicit LineReader(const std::string& text) : stream_(text) {}

  bool next(std::string& out) {
    std::string raw;
    while (std::getline(stream_, raw)) {
      ++lineno_;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const auto first = raw.find_first_not_of(" \t\r\n");
      if (first == std::string::npos) continue;
      out = raw.substr(first, raw.find_last_not_of(" \t\r\n") - first + 1);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::istringstream stream_;
  int lineno_ = 0;
};

}  // namespace

PolyMesh load_polymesh(const std::string& text, bool auto_fix_orientation) {
  LineReader reader(text);
  std::string line;

  if (!reader.next(line)) throw ParseError("empty POLYMESH file");
  {
    std::istringstream ss(line);
    std::string tag;
    int version = 0;
    if (!(ss >> tag >> version) || tag != "polymesh") reader.fail("expected 'polymesh <version>'");
    if (version != 1) reader.fail("unsupported POLYMESH version " + std::to_string(version));
  }

  auto read_count = [&](const char* what) {
    if (!reader.next(line)) reader.fail(std::string("expected ") + what);
    std::istringstream ss(line);
    long n = -1;
    if (!(ss >> n) || n < 0) reader.fail(std::string("bad ") + what);
    return static_cast<int>(n);
  };

  const int nv = read_count("vertex count");
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in vertex list");
    std::istringstream ss(line);
    if (!(ss >> vertices[i].x() >> vertices[i].y())) reader.fail("bad vertex coordinates");
  }

  const int nc = read_count("cell count");
  std::vector<std::vector<int>> cells(nc);
  for (int i = 0; i < nc; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in cell list");
    std::istringstream ss(line);
    int k = 0;
    if (!(ss >> k) || k < 3) reader.fail("bad cell vertex count");
    cells[i].resize(k);
    for (int j = 0; j < k; ++j)
      if (!(ss >> cells[i][j])) reader.fail("bad cell vertex index");
  }

  PolyMesh mesh(std::move(vertices), std::move(cells), auto_fix_orientation);

  if (reader.next(line)) {
    std::istringstream ss(line);
    int nb = 0;
    if (!(ss >> nb) || nb < 0) reader.fail("bad boundary-marker count");
    for (int i = 0; i < nb; ++i) {
      if (!reader.next(line)) reader.fail("unexpected end of file in boundary markers");
      std::istringstream ms(line);
      int a, b, marker;
      if (!(ms >> a >> b >> marker)) reader.fail("bad boundary marker line");
      mesh.set_boundary_marker(a, b, marker);
    }
  }
  return mesh;
}

std::string write_polymesh(const PolyMesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "polymesh 1\n" << mesh.num_vertices() << "\n";
  for (const Vec2& v : mesh.vertices()) out << v.x() << " " << v.y() << "\n";
  out << mesh.num_cells() << "\n";
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (int v : cell) out << " " << v;
    out << "\n";
  }
  std::vector<const Edge*> marked;
  for (const Edge& e : mesh.edges())
    if (e.is_boundary() && e.marker != 0) marked.push_back(&e);
  if (!marked.empty()) {
    out << marked.size() << "\n";
    for (const Edge* e : marked) out << e->v0 << " " << e->v1 << " " << e->marker << "\n";
  }
  return out.str();
}

PolyMesh load_msh2(const std::string& text, bool auto_fix_orientation) {
  LineReader reader(text);
  std::string line;

  std::unordered_map<long, int> node_index;
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;
  struct BoundaryLine {
    int a, b, marker;
  };
  std::vector<BoundaryLine> boundary_lines;
  bool format_seen = false;

  while (reader.next(line)) {
    if (line == "$MeshFormat") {
      if (!reader.next(line)) reader.fail("truncated $MeshFormat");
      std::istringstream ss(line);
      double version = 0.0;
      int file_type = 0, data_size = 0;
      if (!(ss >> version >> file_type >> data_size)) reader.fail("bad $MeshFormat line");
      if (std::abs(version - 2.2) > 1e-9)
        reader.fail("unsupported MSH version " + std::to_string(version) + " (need 2.2 ASCII)");
      if (file_type != 0) reader.fail("binary MSH files are not supported");
      format_seen = true;
      if (!reader.next(line) || line != "$EndMeshFormat") reader.fail("missing $EndMeshFormat");
    } else if (line == "$Nodes") {
      if (!reader.next(line)) reader.fail("truncated $Nodes");
      const int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of node list");
        std::istringstream ss(line);
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) reader.fail("bad node line");
        node_index[id] = static_cast<int>(vertices.size());
        vertices.emplace_back(x, y);
      }
      if (!reader.next(line) || line != "$EndNodes") reader.fail("missing $EndNodes");
    } else if (line == "$Elements") {
      if (!reader.next(line)) reader.fail("truncated $Elements");
      const int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!reader.next(line)) reader.fail("unexpected end of element list");
        std::istringstream ss(line);
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags)) reader.fail("bad element line");
        std::vector<int> tags(ntags);
        for (int t = 0; t < ntags; ++t)
          if (!(ss >> tags[t])) reader.fail("bad element tag");
        auto read_node = [&]() {
          long nid;
          if (!(ss >> nid)) reader.fail("bad element node id");
          auto it = node_index.find(nid);
          if (it == node_index.end()) reader.fail("element references unknown node");
          return it->second;
        };
        switch (type) {
          case 15:  // point, ignored
            break;
          case 1: {
            const int a = read_node(), b = read_node();
            boundary_lines.push_back({a, b, ntags > 0 ? tags[0] : 0});
            break;
          }
          case 2: {
            std::vector<int> tri{read_node(), read_node(), read_node()};
            cells.push_back(std::move(tri));
            break;
          }
          case 3: {
            std::vector<int> quad{read_node(), read_node(), read_node(), read_node()};
            cells.push_back(std::move(quad));
            break;
          }
          default:
            reader.fail("unsupported element type " + std::to_string(type) +
                        " (only 2D line/triangle/quad meshes are supported)");
        }
      }
      if (!reader.next(line) || line != "$EndElements") reader.fail("missing $EndElements");
    } else if (!line.empty() && line[0] == '$') {
      // skip unknown section
      const std::string end = "$End" + line.substr(1);
      while (reader.next(line) && line != end) {
      }
    }
  }

  if (!format_seen) throw ParseError("not an MSH file (missing $MeshFormat)");
  if (cells.empty()) throw ParseError("MSH file contains no 2D elements");

  // drop vertices not used by any cell (gmsh may emit isolated points)
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec2> used;
  for (auto& cell : cells)
    for (int& v : cell) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(vertices[v]);
      }
      v = remap[v];
    }

  PolyMesh mesh(std::move(used), std::move(cells), auto_fix_orientation);
  for (const auto& bl : boundary_lines) {
    if (remap[bl.a] < 0 || remap[bl.b] < 0) continue;
    mesh.set_boundary_marker(remap[bl.a], remap[bl.b], bl.marker);
  }
  return mesh;
}

PolyMesh load_mesh_file(const std::string& path, bool auto_fix_orientation) {
  if (path.rfind("builtin:", 0) == 0) return make_builtin_mesh(path.substr(8));
  std::ifstream in(path);
  if (!in) throw ParseError("mesh: file not found: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".msh")
    return load_msh2(text, auto_fix_orientation);
  return load_polymesh(text, auto_fix_orientation);
}

// --- sub-triangulation and quadrature ---------------------------------------

SubTriangulation subtriangulate(const PolyMesh& mesh) {
  SubTriangulation sub;
  sub.cell_triangles.resize(mesh.num_cells());
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const auto poly = mesh.cell_polygon(k);
    if (polygon_signed_area(poly) <= 0.0)
      throw TopologyError("subtriangulate: cell " + std::to_string(k) + " is degenerate");
    std::vector<Triangle> tris;
    if (poly.size() == 3) {
      tris.push_back({poly[0], poly[1], poly[2]});
    } else if (polygon_is_convex(poly)) {
      tris = fan_triangulate(poly);
    } else {
      try {
        tris = ear_clip(poly);
      } catch (const std::exception& e) {
        throw TopologyError("subtriangulate: cell " + std::to_string(k) + ": " + e.what());
      }
    }
    double area = 0.0;
    for (const Triangle& t : tris) {
      area += t.area();
      sub.worst_shape_ratio = std::max(sub.worst_shape_ratio, t.diameter() / t.inradius());
    }
    if (std::abs(area - mesh.cell_area(k)) > 1e-12 * mesh.cell_area(k))
      throw TopologyError("subtriangulate: cell " + std::to_string(k) +
                          " triangle areas do not sum to the cell area");
    sub.max_triangles_per_cell =
        std::max(sub.max_triangles_per_cell, static_cast<int>(tris.size()));
    sub.cell_triangles[k] = std::move(tris);
  }
  return sub;
}

QuadratureRule cell_quadrature(const PolyMesh& mesh, const SubTriangulation& sub, int cell,
                               int degree) {
  if (degree < 0) throw std::invalid_argument("cell_quadrature: degree must be >= 0");
  QuadratureRule rule;
  for (const Triangle& t : sub.triangles(cell)) {
    QuadratureRule tr = triangle_rule(t, degree);
    rule.points.insert(rule.points.end(), tr.points.begin(), tr.points.end());
    rule.weights.insert(rule.weights.end(), tr.weights.begin(), tr.weights.end());
  }
  (void)mesh;
  return rule;
}

QuadratureRule edge_quadrature(const PolyMesh& mesh, int edge, int degree) {
  const Edge& e = mesh.edges()[edge];
  return segment_rule(mesh.vertices()[e.v0], mesh.vertices()[e.v1], degree);
}

RegularityReport validate_regularity(const PolyMesh& mesh, const SubTriangulation& sub,
                                     double warn_threshold) {
  RegularityReport rep;
  rep.warn_threshold = warn_threshold;
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const double hk = mesh.cell_diameter(k);
    rep.h = std::max(rep.h, hk);
    rep.max_triangles_per_cell =
        std::max(rep.max_triangles_per_cell, static_cast<int>(sub.triangles(k).size()));
    for (const Triangle& t : sub.triangles(k)) {
      rep.sigma = std::max(rep.sigma, t.diameter() / t.inradius());
      rep.rho1 = std::max(rep.rho1, hk / t.diameter());
    }
  }
  rep.shape_warning = rep.sigma > warn_threshold;
  return rep;
}

// --- built-in generators ------------------------------------------------------

namespace {

uint64_t grid_mix64(uint64_t state) {
  state += 0x9e3779b97f4a7c15ull;
  state = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9ull;
  state = (state ^ (state >> 27)) * 0x94d049bb133111ebull;
  return state ^ (state >> 31);
}

// n x n grid of vertices on [0,1]^2; interior vertices displaced by
// jitter/n in each direction (deterministic in seed). Jittered grids
// emulate quasi-uniform unstructured meshes: the perfectly symmetric
// lattice makes the centered reconstruction superconvergent, which hides
// the generic rate.
std::vector<Vec2> grid_vertices(int n, double jitter, std::uint64_t seed) {
  if (jitter < 0.0 || jitter > 0.45)
    throw std::invalid_argument("mesh jitter must lie in [0, 0.45]");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      Vec2 v(double(i) / n, double(j) / n);
      if (jitter > 0.0 && i > 0 && i < n && j > 0 && j < n) {
        const uint64_t key = grid_mix64(seed * 0x100000001b3ull + uint64_t(j) * 65536u + i);
        const double dx = (double(key >> 32) / 4294967296.0 - 0.5) * 2.0;
        const double dy = (double(key & 0xffffffffull) / 4294967296.0 - 0.5) * 2.0;
        v += (jitter / n) * Vec2(dx, dy);
      }
      verts.push_back(v);
    }
  return verts;
}

}  // namespace

PolyMesh make_triangular_mesh(int n, double jitter, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_triangular_mesh: n must be >= 1");
  std::vector<Vec2> verts = grid_vertices(n, jitter, seed);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2u * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // alternate the split diagonal so jittered quads stay well shaped
      if ((i + j) % 2 == 0) {
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      } else {
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
        cells.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    }
  return PolyMesh(std::move(verts), std::move(cells));
}

PolyMesh make_quad_mesh(int n, double jitter, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_quad_mesh: n must be >= 1");
  std::vector<Vec2> verts = grid_vertices(n, jitter, seed);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolyMesh(std::move(verts), std::move(cells));
}

PolyMesh make_mixed_mesh(int n, double jitter, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_mixed_mesh: n must be >= 1");
  std::vector<Vec2> verts = grid_vertices(n, jitter, seed);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if ((i + j) % 2 == 0) {
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      } else {
        cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    }
  return PolyMesh(std::move(verts), std::move(cells));
}

namespace {

// Clips `poly` to the half-plane { x : (x - p) . d <= 0 }.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& p, const Vec2& d) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = (a - p).dot(d);
    const double db = (b - p).dot(d);
    if (da <= 0.0) {
      out.push_back(a);
      if (db > 0.0) out.push_back(a + (da / (da - db)) * (b - a));
    } else if (db <= 0.0) {
      out.push_back(a + (da / (da - db)) * (b - a));
    }
  }
  return out;
}

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double unit_double(uint64_t& state) {
  return double(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

PolyMesh make_voronoi_mesh(int n, double jitter, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_voronoi_mesh: n must be >= 2");
  // Triangular seed lattice: its Voronoi diagram is the honeycomb.
  const double dx = 1.0 / n;
  const double dy = dx * std::sqrt(3.0) / 2.0;
  std::vector<Vec2> seeds;
  const int rows = static_cast<int>(std::ceil(1.0 / dy)) + 2;
  for (int j = -1; j <= rows; ++j) {
    const double y = j * dy;
    const double offset = (j % 2 == 0) ? 0.0 : 0.5 * dx;
    for (int i = -2; i <= n + 1; ++i) {
      Vec2 s(offset + i * dx, y);
      if (jitter > 0.0) {
        uint64_t state = seed * 0x9e3779b97f4a7c15ull + 0x51ed270b9ull +
                         uint64_t(i + 1000) * 0x100000001b3ull + uint64_t(j + 1000);
        s.x() += (unit_double(state) - 0.5) * jitter * dx;
        s.y() += (unit_double(state) - 0.5) * jitter * dx;
      }
      seeds.push_back(s);
    }
  }

  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const double reach = 3.0 * dx;  // only nearby seeds can contribute a bisector

  std::vector<std::vector<Vec2>> polys;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Vec2& si = seeds[i];
    if (si.x() < -2.0 * dx || si.x() > 1.0 + 2.0 * dx || si.y() < -2.0 * dy ||
        si.y() > 1.0 + 2.0 * dy)
      continue;
    std::vector<Vec2> poly = square;
    for (std::size_t j = 0; j < seeds.size() && !poly.empty(); ++j) {
      if (j == i) continue;
      const Vec2 d = seeds[j] - si;
      if (d.norm() > reach) continue;
      poly = clip_halfplane(poly, 0.5 * (si + seeds[j]), d);
    }
    if (poly.size() >= 3 && std::abs(polygon_signed_area(poly)) > 1e-14) polys.push_back(poly);
  }

  // Weld vertices shared between neighbouring cells (each cell clips
  // independently, so shared corners differ by rounding noise).
  const double weld = 1e-9 * dx;
  std::vector<Vec2> verts;
  std::unordered_map<long long, std::vector<int>> grid;
  auto key_of = [&](double x, double y) {
    return (static_cast<long long>(std::floor(x / weld / 64.0)) << 32) ^
           (static_cast<long long>(std::floor(y / weld / 64.0)) & 0xffffffffll);
  };
  auto weld_vertex = [&](const Vec2& p) {
    for (long long ox = -1; ox <= 1; ++ox)
      for (long long oy = -1; oy <= 1; ++oy) {
        const auto it = grid.find(key_of(p.x() + 64.0 * weld * ox, p.y() + 64.0 * weld * oy));
        if (it == grid.end()) continue;
        for (int id : it->second)
          if ((verts[id] - p).norm() <= weld) return id;
      }
    const int id = static_cast<int>(verts.size());
    verts.push_back(p);
    grid[key_of(p.x(), p.y())].push_back(id);
    return id;
  };

  std::vector<std::vector<int>> cells;
  for (const auto& poly : polys) {
    std::vector<int> cell;
    for (const Vec2& p : poly) {
      const int id = weld_vertex(p);
      if (cell.empty() || (cell.back() != id && cell.front() != id)) cell.push_back(id);
    }
    while (cell.size() > 1 && cell.back() == cell.front()) cell.pop_back();
    if (cell.size() >= 3) cells.push_back(std::move(cell));
  }
  return PolyMesh(std::move(verts), std::move(cells));
}

PolyMesh make_builtin_mesh(const std::string& spec) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream ss(spec);
  while (std::getline(ss, token, ':')) parts.push_back(token);
  if (parts.size() < 2) throw ParseError("bad builtin mesh spec '" + spec +
                                         "' (expected e.g. tri:16)");
  const std::string kind = parts[0];
  const int n = std::stoi(parts[1]);
  double jitter = 0.0;
  std::uint64_t seed = 0;
  if (parts.size() > 2) {
    std::istringstream opts(parts[2]);
    std::string kv;
    while (std::getline(opts, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("bad mesh option '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "jitter")
        jitter = std::stod(val);
      else if (key == "seed")
        seed = std::stoull(val);
      else
        throw ParseError("unknown mesh option '" + key + "'");
    }
  }
  if (kind == "tri") return make_triangular_mesh(n, jitter, seed);
  if (kind == "quad") return make_quad_mesh(n, jitter, seed);
  if (kind == "mixed") return make_mixed_mesh(n, jitter, seed);
  if (kind == "voronoi") return make_voronoi_mesh(n, jitter, seed);
  throw ParseError("unknown builtin mesh kind '" + kind + "'");
}

}  // namespace rdg
