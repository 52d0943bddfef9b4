#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include "rdg/geometry.hpp"
#include "rdg/mesh.hpp"

namespace rdg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundaryCondition {
  enum class Type { Dirichlet, Neumann };
  Type type = Type::Dirichlet;
  // g_D(x), or the flux g_N(x, n) = (A grad u) . n; Dirichlet data ignore n.
  std::function<double(const Vec2&, const Vec2&)> value;
};

/// -div(A grad u) = f with per-marker boundary conditions and declared
/// ellipticity bounds c1 <= eig(A) <= c2.
struct EllipticProblem {
  std::string name = "custom";
  std::function<Mat2(const Vec2&)> coefficient;
  std::function<double(const Vec2&)> source;
  std::map<int, BoundaryCondition> boundary;
  double c1 = 1.0;
  double c2 = 1.0;
  std::function<double(const Vec2&)> exact;           // optional
  std::function<Vec2(const Vec2&)> exact_gradient;    // optional

  bool has_exact() const { return static_cast<bool>(exact); }
  bool pure_neumann() const;

  const BoundaryCondition& condition_for_marker(int marker) const;

  /// Checks symmetry of A and the declared eigenvalue bounds on a sample
  /// grid over the mesh; throws ConfigError on violation.
  void probe_ellipticity(const PolyMesh& mesh, int samples_per_cell = 3) const;
};

/// Laplace operator on every marker with the given boundary type.
EllipticProblem laplace_problem(BoundaryCondition::Type type);

/// Custom problem from JSON: constant coefficient matrix, polynomial
/// source / boundary data / exact solution. Schema:
///   {"A": [[a11,a12],[a21,a22]] | "identity",
///    "f": {"poly": [[ax, ay, coeff], ...]},
///    "exact": {"poly": [...]},            // optional
///    "boundary": {"0": {"type": "dirichlet"|"neumann",
///                       "g": {"poly": [...]}}, ...}}
EllipticProblem problem_from_json(const std::string& json_text);

}  // namespace rdg
