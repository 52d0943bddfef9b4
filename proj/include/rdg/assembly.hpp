#pragma once

#include <Eigen/Sparse>

#include "rdg/problem.hpp"
#include "rdg/reconstruction.hpp"

namespace rdg {

// Scalar traces across an edge with outward normals n1 = -n2.
struct ScalarTrace {
  double average = 0.0;
  Vec2 jump = Vec2::Zero();  // v1 n1 + v2 n2
};
// Vector-valued traces (fluxes).
struct VectorTrace {
  Vec2 average = Vec2::Zero();
  double jump = 0.0;  // phi1 . n1 + phi2 . n2
};

ScalarTrace jump_average(double v1, double v2, const Vec2& n1, const Vec2& n2);
ScalarTrace jump_average_boundary(double v, const Vec2& n);
VectorTrace jump_average(const Vec2& phi1, const Vec2& phi2, const Vec2& n1, const Vec2& n2);
VectorTrace jump_average_boundary(const Vec2& phi, const Vec2& n);

/// Penalty weight: interior edges max(3 c2, k m^2 c2), boundary edges
/// k m^2 c2.
double penalty_for_edge(const PolyMesh& mesh, int edge, const EllipticProblem& problem, int m,
                        double k_boundary = 10.0);

std::vector<double> compute_penalties(const PolyMesh& mesh, const EllipticProblem& problem,
                                      int m, double k_boundary = 10.0);

/// One unknown per element: matrix and load vector of the interior
/// penalty form in the reconstructed space.
struct DgSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<double> edge_penalties;
  std::vector<int> dof_of_cell;        // identity map, kept for the record
  Eigen::VectorXd recon_mean_weights;  // w_j = sum_K int_K (R e_j)
  bool pure_neumann = false;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

struct AssemblyOptions {
  double k_boundary = 10.0;
  int cell_quad_degree = -1;  // -1: 2m + 2
  int edge_quad_points = -1;  // -1: m + 2
};

/// Assembles volume, consistency/symmetry and penalty terms. Dirichlet
/// boundary edges contribute all edge terms with the boundary jump
/// convention; Neumann edges contribute nothing. The right side carries
/// the volume source only; boundary data enter through
/// apply_dirichlet_rhs / apply_neumann_rhs.
DgSystem assemble(const PolyMesh& mesh, const SubTriangulation& sub, const GlobalRecon& recon,
                  const EllipticProblem& problem, const std::vector<double>& penalties,
                  const AssemblyOptions& options = {});

/// rhs_i += sum over Dirichlet edges of int_e g_D (eta/h (R e_i) - (A grad R e_i) . n).
void apply_dirichlet_rhs(const PolyMesh& mesh, const GlobalRecon& recon,
                         const EllipticProblem& problem, const std::vector<double>& penalties,
                         DgSystem& system, const AssemblyOptions& options = {});

/// rhs_i += sum over Neumann edges of int_e g_N (R e_i).
void apply_neumann_rhs(const PolyMesh& mesh, const GlobalRecon& recon,
                       const EllipticProblem& problem, DgSystem& system,
                       const AssemblyOptions& options = {});

}  // namespace rdg
