#include "rdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdg {

// Both sums run on vertex offsets from pts[0]: with raw coordinates the
// cross terms are O(1) and their rounding swamps the area of small cells.
double polygon_signed_area(const std::vector<Vec2>& pts) {
  double s = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 p = pts[i] - pts[0];
    const Vec2 q = pts[i + 1] - pts[0];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

Vec2 polygon_centroid(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 p = pts[i] - pts[0];
    const Vec2 q = pts[i + 1] - pts[0];
    const double cross = p.x() * q.y() - q.x() * p.y();
    a += cross;
    c += cross * (p + q);
  }
  if (std::abs(a) < 1e-300) throw std::runtime_error("polygon_centroid: zero-area polygon");
  return pts[0] + c / (3.0 * a);
}

double polygon_diameter(const std::vector<Vec2>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

static double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool polygon_is_convex(const std::vector<Vec2>& pts, double tol) {
  const std::size_t n = pts.size();
  if (n < 4) return true;
  const double scale = polygon_diameter(pts);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 u = pts[(i + 1) % n] - pts[i];
    const Vec2 v = pts[(i + 2) % n] - pts[(i + 1) % n];
    if (cross2(u, v) < -tol * scale * scale) return false;
  }
  return true;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& pts, bool strict) {
  const std::size_t n = pts.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double xint = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xint) inside = !inside;
    }
  }
  if (!strict) {
    if (inside) return true;
    // accept boundary points
    const double tol = 1e-12 * std::max(1.0, polygon_diameter(pts));
    for (std::size_t i = 0; i < n; ++i)
      if (point_segment_distance(p, pts[i], pts[(i + 1) % n]) <= tol) return true;
    return false;
  }
  if (!inside) return false;
  const double tol = 1e-12 * polygon_diameter(pts);
  for (std::size_t i = 0; i < n; ++i)
    if (point_segment_distance(p, pts[i], pts[(i + 1) % n]) <= tol) return false;
  return true;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double convex_polygon_width(const std::vector<Vec2>& hull) {
  const std::size_t n = hull.size();
  if (n < 3) return 0.0;
  double width = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % n];
    Vec2 dir = b - a;
    const double len = dir.norm();
    if (len == 0.0) continue;
    dir /= len;
    const Vec2 normal(-dir.y(), dir.x());
    double maxd = 0.0;
    for (const Vec2& p : hull) maxd = std::max(maxd, std::abs(normal.dot(p - a)));
    width = std::min(width, maxd);
  }
  return width;
}

double Triangle::area() const { return 0.5 * std::abs(cross2(b - a, c - a)); }

double Triangle::diameter() const {
  return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

double Triangle::inradius() const {
  const double per = (a - b).norm() + (b - c).norm() + (c - a).norm();
  return per > 0.0 ? 2.0 * area() / per : 0.0;
}

std::vector<Triangle> fan_triangulate(const std::vector<Vec2>& pts) {
  const Vec2 c = polygon_centroid(pts);
  std::vector<Triangle> tris;
  tris.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    tris.push_back({c, pts[i], pts[(i + 1) % pts.size()]});
  return tris;
}

std::vector<Triangle> ear_clip(const std::vector<Vec2>& pts) {
  std::vector<Vec2> poly = pts;
  std::vector<Triangle> tris;
  const double scale = polygon_diameter(pts);
  const double eps = 1e-14 * scale * scale;

  auto is_ear = [&](std::size_t i) {
    const std::size_t n = poly.size();
    const Vec2& a = poly[(i + n - 1) % n];
    const Vec2& b = poly[i];
    const Vec2& c = poly[(i + 1) % n];
    if (cross2(b - a, c - b) <= eps) return false;  // reflex or degenerate corner
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
      const Vec2& p = poly[j];
      const double d1 = cross2(b - a, p - a);
      const double d2 = cross2(c - b, p - b);
      const double d3 = cross2(a - c, p - c);
      if (d1 >= -eps && d2 >= -eps && d3 >= -eps) return false;  // vertex inside ear
    }
    return true;
  };

  while (poly.size() > 3) {
    const std::size_t n = poly.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_ear(i)) continue;
      tris.push_back({poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]});
      poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("ear_clip: no ear found (degenerate polygon)");
  }
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

}  // namespace rdg
