#include "rdg/problem.hpp"

#include <cmath>

#include <json.hpp>

#include "rdg/study.hpp"

namespace rdg {

bool EllipticProblem::pure_neumann() const {
  if (boundary.empty()) return false;
  for (const auto& [marker, bc] : boundary)
    if (bc.type != BoundaryCondition::Type::Neumann) return false;
  return true;
}

const BoundaryCondition& EllipticProblem::condition_for_marker(int marker) const {
  auto it = boundary.find(marker);
  if (it == boundary.end())
    throw ConfigError("problem '" + name + "' has no boundary condition for marker " +
                      std::to_string(marker));
  return it->second;
}

void EllipticProblem::probe_ellipticity(const PolyMesh& mesh, int samples_per_cell) const {
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const Vec2 c = mesh.cell_centroid(cell);
    for (int s = 0; s < samples_per_cell; ++s) {
      // centroid plus points toward two vertices
      Vec2 p = c;
      if (s > 0) {
        const auto& verts = mesh.cells()[cell];
        const Vec2 v = mesh.vertices()[verts[s % verts.size()]];
        p = c + 0.5 * (v - c);
      }
      const Mat2 A = coefficient(p);
      if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * A.norm())
        throw ConfigError("coefficient matrix is not symmetric at (" + std::to_string(p.x()) +
                          ", " + std::to_string(p.y()) + ")");
      const Eigen::SelfAdjointEigenSolver<Mat2> es(A);
      const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
      if (lo < c1 * (1.0 - 1e-9) || hi > c2 * (1.0 + 1e-9))
        throw ConfigError("coefficient eigenvalues [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "] leave the declared range [" +
                          std::to_string(c1) + ", " + std::to_string(c2) + "]");
    }
  }
}

EllipticProblem laplace_problem(BoundaryCondition::Type type) {
  EllipticProblem p;
  p.name = "laplace";
  p.coefficient = [](const Vec2&) { return Mat2::Identity(); };
  p.source = [](const Vec2&) { return 0.0; };
  p.c1 = p.c2 = 1.0;
  p.boundary[0] = {type, [](const Vec2&, const Vec2&) { return 0.0; }};
  return p;
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// u = sin(2 pi x) sin(2 pi y), A = I, Neumann data from the exact gradient
EllipticProblem make_example1() {
  EllipticProblem p;
  p.name = "example1";
  p.coefficient = [](const Vec2&) { return Mat2::Identity(); };
  p.exact = [](const Vec2& q) { return std::sin(kTwoPi * q.x()) * std::sin(kTwoPi * q.y()); };
  p.exact_gradient = [](const Vec2& q) {
    return Vec2(kTwoPi * std::cos(kTwoPi * q.x()) * std::sin(kTwoPi * q.y()),
                kTwoPi * std::sin(kTwoPi * q.x()) * std::cos(kTwoPi * q.y()));
  };
  p.source = [](const Vec2& q) {
    return 8.0 * M_PI * M_PI * std::sin(kTwoPi * q.x()) * std::sin(kTwoPi * q.y());
  };
  p.c1 = p.c2 = 1.0;
  return p;
}

// u = x^3 y^2 + x sin(2 pi x y) sin(2 pi y)
double ex2_u(const Vec2& q) {
  const double x = q.x(), y = q.y();
  return x * x * x * y * y + x * std::sin(kTwoPi * x * y) * std::sin(kTwoPi * y);
}

Vec2 ex2_grad(const Vec2& q) {
  const double x = q.x(), y = q.y();
  const double S = std::sin(kTwoPi * x * y), C = std::cos(kTwoPi * x * y);
  const double s2 = std::sin(kTwoPi * y), c2 = std::cos(kTwoPi * y);
  return Vec2(3 * x * x * y * y + kTwoPi * x * y * s2 * C + s2 * S,
              2 * x * x * x * y + kTwoPi * x * x * s2 * C + kTwoPi * x * S * c2);
}

Mat2 ex2_coeff(const Vec2& q) {
  const double x = q.x(), y = q.y();
  Mat2 A;
  A << (x + 1) * (x + 1) + y * y, -x * y, -x * y, (x + 1) * (x + 1);
  return A;
}

double ex2_source(const Vec2& q) {
  const double x = q.x(), y = q.y();
  const double pi2 = M_PI * M_PI;
  const double S = std::sin(kTwoPi * x * y), C = std::cos(kTwoPi * x * y);
  const double s2 = std::sin(kTwoPi * y), c2 = std::cos(kTwoPi * y);

  const double ux = 3 * x * x * y * y + kTwoPi * x * y * s2 * C + s2 * S;
  const double uy = 2 * x * x * x * y + kTwoPi * x * x * s2 * C + kTwoPi * x * S * c2;
  const double uxx = 2 * y * (-2 * pi2 * x * y * s2 * S + 3 * x * y + kTwoPi * s2 * C);
  const double uxy = -4 * pi2 * x * x * y * s2 * S + 6 * x * x * y +
                     4 * pi2 * x * y * c2 * C + 2 * kTwoPi * x * s2 * C + kTwoPi * S * c2;
  const double uyy = 2 * x * (-2 * pi2 * x * x * s2 * S + x * x + 4 * pi2 * x * c2 * C -
                              2 * pi2 * s2 * S);

  const double a11 = (x + 1) * (x + 1) + y * y, a12 = -x * y, a22 = (x + 1) * (x + 1);
  const double a11_x = 2 * (x + 1), a12_x = -y, a21_y = -x, a22_y = 0.0;
  return -(a11_x * ux + a11 * uxx + a12_x * uy + a12 * uxy + a21_y * ux + a12 * uxy +
           a22_y * uy + a22 * uyy);
}

EllipticProblem make_example2() {
  EllipticProblem p;
  p.name = "example2";
  p.coefficient = ex2_coeff;
  p.exact = ex2_u;
  p.exact_gradient = ex2_grad;
  p.source = ex2_source;
  // eigenvalues of A over the unit square lie in [1.0, 5.62]
  p.c1 = 0.95;
  p.c2 = 5.7;
  p.boundary[0] = {BoundaryCondition::Type::Dirichlet,
                   [](const Vec2& x, const Vec2&) { return ex2_u(x); }};
  return p;
}

// u = exp((x^2 + y^2) / 2) + sin(2 pi (x + y)) sin(2 pi y)
double ex3_u(const Vec2& q) {
  const double x = q.x(), y = q.y();
  return std::exp(0.5 * (x * x + y * y)) + std::sin(kTwoPi * (x + y)) * std::sin(kTwoPi * y);
}

Vec2 ex3_grad(const Vec2& q) {
  const double x = q.x(), y = q.y();
  const double E = std::exp(0.5 * (x * x + y * y));
  const double s1 = std::sin(kTwoPi * (x + y)), c1 = std::cos(kTwoPi * (x + y));
  const double s2 = std::sin(kTwoPi * y), c2 = std::cos(kTwoPi * y);
  return Vec2(x * E + kTwoPi * s2 * c1, y * E + kTwoPi * s2 * c1 + kTwoPi * s1 * c2);
}

Mat2 ex3_coeff(const Vec2& q) {
  const double x = q.x(), y = q.y();
  Mat2 A;
  A << 3 + std::cos(kTwoPi * x), x - y, x - y, 3 - std::sin(kTwoPi * y);
  return A;
}

double ex3_source(const Vec2& q) {
  const double x = q.x(), y = q.y();
  const double pi2 = M_PI * M_PI;
  const double E = std::exp(0.5 * (x * x + y * y));
  const double s1 = std::sin(kTwoPi * (x + y)), c1 = std::cos(kTwoPi * (x + y));
  const double s2 = std::sin(kTwoPi * y), c2 = std::cos(kTwoPi * y);

  const double ux = x * E + kTwoPi * s2 * c1;
  const double uy = y * E + kTwoPi * s2 * c1 + kTwoPi * s1 * c2;
  const double uxx = (x * x + 1) * E - 4 * pi2 * s2 * s1;
  const double uxy = x * y * E - 4 * pi2 * s2 * s1 + 4 * pi2 * c2 * c1;
  const double uyy = (y * y + 1) * E - 8 * pi2 * s2 * s1 + 8 * pi2 * c2 * c1;

  const double a11 = 3 + std::cos(kTwoPi * x), a12 = x - y, a22 = 3 - std::sin(kTwoPi * y);
  const double a11_x = -kTwoPi * std::sin(kTwoPi * x), a12_x = 1.0, a21_y = -1.0;
  const double a22_y = -kTwoPi * std::cos(kTwoPi * y);
  return -(a11_x * ux + a11 * uxx + a12_x * uy + a12 * uxy + a21_y * ux + a12 * uxy +
           a22_y * uy + a22 * uyy);
}

EllipticProblem make_example3() {
  EllipticProblem p;
  p.name = "example3";
  p.coefficient = ex3_coeff;
  p.exact = ex3_u;
  p.exact_gradient = ex3_grad;
  p.source = ex3_source;
  // eigenvalues of A over the unit square lie in [1.70, 4.78]
  p.c1 = 1.65;
  p.c2 = 4.8;
  p.boundary[0] = {BoundaryCondition::Type::Neumann,
                   [](const Vec2& x, const Vec2& n) { return (ex3_coeff(x) * ex3_grad(x)).dot(n); }};
  return p;
}

}  // namespace

EllipticProblem builtin_problem(const std::string& name) {
  if (name == "example1") {
    EllipticProblem p = make_example1();
    p.boundary[0] = {BoundaryCondition::Type::Neumann,
                     [grad = p.exact_gradient](const Vec2& x, const Vec2& n) {
                       return grad(x).dot(n);
                     }};
    return p;
  }
  if (name == "example2") return make_example2();
  if (name == "example3") return make_example3();
  throw ConfigError("unknown builtin problem '" + name + "'");
}


namespace {

// sparse bivariate polynomial sum c x^a y^b
struct Poly2 {
  struct Term {
    int ax, ay;
    double c;
  };
  std::vector<Term> terms;

  double operator()(const Vec2& p) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * std::pow(p.x(), t.ax) * std::pow(p.y(), t.ay);
    return s;
  }
  Vec2 grad(const Vec2& p) const {
    Vec2 g = Vec2::Zero();
    for (const auto& t : terms) {
      if (t.ax > 0) g.x() += t.c * t.ax * std::pow(p.x(), t.ax - 1) * std::pow(p.y(), t.ay);
      if (t.ay > 0) g.y() += t.c * t.ay * std::pow(p.x(), t.ax) * std::pow(p.y(), t.ay - 1);
    }
    return g;
  }
};

Poly2 parse_poly(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("poly"))
    throw ConfigError("expected {\"poly\": [[ax, ay, coeff], ...]}");
  Poly2 poly;
  for (const auto& term : j.at("poly")) {
    if (!term.is_array() || term.size() != 3)
      throw ConfigError("polynomial term must be [ax, ay, coeff]");
    poly.terms.push_back({term[0].get<int>(), term[1].get<int>(), term[2].get<double>()});
  }
  return poly;
}

}  // namespace

EllipticProblem problem_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("problem file: ") + e.what());
  }

  EllipticProblem p;
  p.name = j.value("name", "custom");

  Mat2 A = Mat2::Identity();
  if (j.contains("A") && j["A"].is_array()) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) A(r, c) = j["A"][r][c].get<double>();
    if (std::abs(A(0, 1) - A(1, 0)) > 1e-14 * A.norm())
      throw ConfigError("problem file: coefficient matrix must be symmetric");
  }
  p.coefficient = [A](const Vec2&) { return A; };
  const Eigen::SelfAdjointEigenSolver<Mat2> es(A);
  p.c1 = j.value("c1", es.eigenvalues()(0));
  p.c2 = j.value("c2", es.eigenvalues()(1));
  if (p.c1 <= 0.0) throw ConfigError("problem file: coefficient matrix is not elliptic");

  if (j.contains("f")) {
    const Poly2 f = parse_poly(j.at("f"));
    p.source = [f](const Vec2& x) { return f(x); };
  } else {
    p.source = [](const Vec2&) { return 0.0; };
  }

  if (j.contains("exact")) {
    const Poly2 u = parse_poly(j.at("exact"));
    p.exact = [u](const Vec2& x) { return u(x); };
    p.exact_gradient = [u](const Vec2& x) { return u.grad(x); };
  }

  if (j.contains("boundary")) {
    for (const auto& [key, bc] : j.at("boundary").items()) {
      const int marker = std::stoi(key);
      const std::string type = bc.value("type", "dirichlet");
      BoundaryCondition condition;
      if (type == "dirichlet")
        condition.type = BoundaryCondition::Type::Dirichlet;
      else if (type == "neumann")
        condition.type = BoundaryCondition::Type::Neumann;
      else
        throw ConfigError("problem file: unknown boundary type '" + type + "'");
      if (bc.contains("g")) {
        const Poly2 g = parse_poly(bc.at("g"));
        condition.value = [g](const Vec2& x, const Vec2&) { return g(x); };
      } else {
        condition.value = [](const Vec2&, const Vec2&) { return 0.0; };
      }
      p.boundary[marker] = condition;
    }
  } else {
    p.boundary[0] = {BoundaryCondition::Type::Dirichlet,
                     [&p, u = p.exact](const Vec2& x, const Vec2&) {
                       return u ? u(x) : 0.0;
                     }};
  }
  return p;
}

}  // namespace rdg
