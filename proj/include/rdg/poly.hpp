#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rdg/geometry.hpp"

namespace rdg {

/// Scaled monomial basis of P_m centered at `center`:
///   b_k(x, y) = ((x - cx) / scale)^a ((y - cy) / scale)^b,
/// terms in graded lexicographic order (by total degree, then
/// decreasing x-exponent): 1, X, Y, X^2, XY, Y^2, ...
class PolyBasis {
 public:
  PolyBasis(int degree, const Vec2& center, double scale);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(exponents_.size()); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }
  const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }

  /// Row vector of all basis values at a point.
  Eigen::RowVectorXd row(const Vec2& p) const;

  /// 2 x dim matrix of basis gradients at a point (d/dx row 0, d/dy row 1).
  Eigen::Matrix2Xd gradient_rows(const Vec2& p) const;

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

 private:
  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> exponents_;
};

}  // namespace rdg
