#include "rdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rdg {

double QuadratureRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// Legendre recurrence, weights 2 * (first eigenvector component)^2.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
    return;
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v0 * v0;
  }
}

namespace {

// cached [0,1] Gauss rules, keyed by point count
const std::pair<const std::vector<double>&, const std::vector<double>&> unit_gauss(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    for (int i = 0; i < n; ++i) {
      x[i] = 0.5 * (x[i] + 1.0);
      w[i] *= 0.5;
    }
    it = cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
  }
  return {it->second.first, it->second.second};
}

}  // namespace

QuadratureRule triangle_rule(const Triangle& tri, int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
  // Collapsed square u,v in [0,1]^2 -> reference triangle
  //   x = u, y = v (1 - u),  dx dy = (1 - u) du dv.
  // The Jacobian raises the u-degree by one, hence n covering degree + 1.
  const int n = (degree + 3) / 2;
  auto [gx, gw] = unit_gauss(n);

  const Vec2 e1 = tri.b - tri.a;
  const Vec2 e2 = tri.c - tri.a;
  const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());  // = 2 |T|

  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double u = gx[i];
    for (int j = 0; j < n; ++j) {
      const double v = gx[j];
      const double xr = u;
      const double yr = v * (1.0 - u);
      rule.points.push_back(tri.a + xr * e1 + yr * e2);
      rule.weights.push_back(gw[i] * gw[j] * (1.0 - u) * jac);
    }
  }
  return rule;
}

QuadratureRule segment_rule_npoints(const Vec2& a, const Vec2& b, int npoints) {
  auto [gx, gw] = unit_gauss(npoints);
  const double len = (b - a).norm();
  QuadratureRule rule;
  rule.points.reserve(npoints);
  rule.weights.reserve(npoints);
  for (int i = 0; i < npoints; ++i) {
    rule.points.push_back(a + gx[i] * (b - a));
    rule.weights.push_back(gw[i] * len);
  }
  return rule;
}

QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int degree) {
  if (degree < 0) throw std::invalid_argument("segment_rule: degree must be >= 0");
  return segment_rule_npoints(a, b, degree / 2 + 1);
}

}  // namespace rdg
