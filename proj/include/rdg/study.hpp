#pragma once

#include <optional>
#include <string>

#include "rdg/solver.hpp"

namespace rdg {

/// A solved discrete field: cell dofs plus the reconstruction that makes
/// them evaluable as a piecewise polynomial.
struct DiscreteField {
  const PolyMesh* mesh = nullptr;
  const SubTriangulation* sub = nullptr;
  const GlobalRecon* recon = nullptr;
  Eigen::VectorXd dofs;

  double value(int cell, const Vec2& p) const;
  Vec2 gradient(int cell, const Vec2& p) const;
};

/// Which boundary edges contribute the jump term of the energy norm.
/// Interior edges always count. For Neumann-marked edges the jump of the
/// error against a mean-adjusted exact solution is not meaningful, hence
/// the DirichletOnly default used by the study pipeline.
enum class EnergyBoundaryJumps { All, DirichletOnly, None };

double l2_error(const DiscreteField& field, const std::function<double(const Vec2&)>& exact,
                int quad_degree = -1, double exact_shift = 0.0);

double energy_error(const DiscreteField& field, const std::function<double(const Vec2&)>& exact,
                    const std::function<Vec2(const Vec2&)>& exact_gradient,
                    EnergyBoundaryJumps jumps = EnergyBoundaryJumps::All,
                    const EllipticProblem* problem = nullptr, int quad_degree = -1,
                    double exact_shift = 0.0);

/// Area mean of (exact - R u_h); subtracting it from the exact solution
/// aligns the gauge of pure-Neumann solutions.
double mean_difference(const DiscreteField& field,
                       const std::function<double(const Vec2&)>& exact, int quad_degree = -1);

struct ErrorReport {
  int m = 0;
  double h = 0.0;        // mesh size, or N^{-1/2} when rates run against dofs
  int n_dofs = 0;
  double l2 = 0.0;
  double energy = 0.0;
};

struct RateSummary {
  double l2_tail = 0.0;      // slope from the two finest meshes
  double energy_tail = 0.0;
  double l2_slope = 0.0;     // least-squares slope over the whole family
  double energy_slope = 0.0;
  bool monotone = true;      // false flags a non-decreasing error sequence
};

/// Rates of log(error) against log(h); requires >= 2 reports sorted by
/// decreasing h (they are re-sorted defensively).
RateSummary fit_rates(std::vector<ErrorReport> reports);

/// Manufactured problems on the unit square. example1: Laplace/Neumann
/// with a trigonometric solution; example2: variable-coefficient
/// Dirichlet; example3: variable-coefficient Neumann. Sources for the
/// variable-coefficient problems are hard-coded closed forms.
EllipticProblem builtin_problem(const std::string& name);

struct StudyOptions {
  NeighborRule rule = NeighborRule::VonNeumann;
  int depth = -1;  // auto
  double safety = 2.0;
  double k_boundary = 10.0;
  double perturbation = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;
  int cell_quad_degree = -1;
  int edge_quad_points = -1;
  bool rate_vs_dofs = false;  // report h as N^{-1/2} (unstructured families)
  EnergyBoundaryJumps energy_jumps = EnergyBoundaryJumps::DirichletOnly;
};

/// One full pipeline pass: patches, reconstruction, assembly, boundary
/// data, solve, and (when an exact solution is available) error norms.
struct PipelineResult {
  GlobalRecon recon;
  DgSystem system;
  Solution solution;
  std::optional<ErrorReport> errors;
};

PipelineResult solve_problem(const PolyMesh& mesh, const SubTriangulation& sub,
                             const EllipticProblem& problem, int m,
                             const StudyOptions& options = {});

struct StudyFailure {
  std::string mesh;
  int m = 0;
  std::string message;
};

struct ConvergenceStudy {
  int m = 0;
  std::vector<ErrorReport> reports;  // strictly decreasing h
  RateSummary rates;                 // valid when reports.size() >= 2
};

struct StudyResult {
  std::vector<ConvergenceStudy> studies;  // one per requested m
  std::vector<StudyFailure> failures;
};

/// Runs (mesh, m) pairs over a mesh family; per-pair failures are
/// recorded and the remaining pairs proceed.
StudyResult run_study(const EllipticProblem& problem, const std::vector<std::string>& mesh_specs,
                      const std::vector<int>& orders, const StudyOptions& options = {});

}  // namespace rdg
