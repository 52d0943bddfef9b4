#pragma once

#include <vector>

#include "rdg/geometry.hpp"

namespace rdg {

/// Point set with weights. Weights carry the measure of the integration
/// domain (area for cells, length for edges).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  double weight_sum() const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
    return s;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on a physical triangle, exact for bivariate polynomials of total
/// degree <= degree. Built from a tensor Gauss rule on the collapsed square.
QuadratureRule triangle_rule(const Triangle& tri, int degree);

/// Rule on the segment [a, b], exact for 1D polynomials up to `degree`
/// along the arc-length parameter.
QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree);

/// Gauss-Legendre rule on a segment with a fixed number of points
/// (exact to degree 2*npoints - 1).
QuadratureRule segment_rule_npoints(const Vec2& a, const Vec2& b, int npoints);

}  // namespace rdg
