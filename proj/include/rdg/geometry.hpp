#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rdg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Signed area of a simple polygon (positive for counter-clockwise order).
double polygon_signed_area(const std::vector<Vec2>& pts);

/// Area centroid of a simple polygon.
Vec2 polygon_centroid(const std::vector<Vec2>& pts);

/// Max pairwise vertex distance.
double polygon_diameter(const std::vector<Vec2>& pts);

bool polygon_is_convex(const std::vector<Vec2>& pts, double tol = 1e-12);

/// Crossing-number test. Points on the boundary count as inside when
/// `strict` is false; with `strict` the point must keep a positive
/// distance (relative to the polygon diameter) from every edge.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& pts, bool strict = false);

/// Distance from a point to a segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Convex hull (counter-clockwise, no duplicate endpoints).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

/// Width of a convex polygon (rotating calipers over hull edges).
double convex_polygon_width(const std::vector<Vec2>& hull);

struct Triangle {
  Vec2 a, b, c;
  double area() const;
  double diameter() const;   // longest side
  double inradius() const;   // 2*area / perimeter
};

/// Fan triangulation about the centroid; valid for convex polygons.
std::vector<Triangle> fan_triangulate(const std::vector<Vec2>& pts);

/// Ear-clipping triangulation of a simple polygon (CCW). Throws on
/// degenerate input that cannot be clipped.
std::vector<Triangle> ear_clip(const std::vector<Vec2>& pts);

}  // namespace rdg
