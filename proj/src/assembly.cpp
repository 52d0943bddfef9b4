#include "rdg/assembly.hpp"

#include <cmath>

namespace rdg {

namespace {

void check_unit(const Vec2& n) {
  if (std::abs(n.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("jump_average: normals must have unit length");
}

}  // namespace

ScalarTrace jump_average(double v1, double v2, const Vec2& n1, const Vec2& n2) {
  check_unit(n1);
  check_unit(n2);
  if ((n1 + n2).norm() > 1e-12)
    throw std::invalid_argument("jump_average: interior normals must be opposite");
  return {0.5 * (v1 + v2), v1 * n1 + v2 * n2};
}

ScalarTrace jump_average_boundary(double v, const Vec2& n) {
  check_unit(n);
  return {v, v * n};
}

VectorTrace jump_average(const Vec2& phi1, const Vec2& phi2, const Vec2& n1, const Vec2& n2) {
  check_unit(n1);
  check_unit(n2);
  if ((n1 + n2).norm() > 1e-12)
    throw std::invalid_argument("jump_average: interior normals must be opposite");
  return {0.5 * (phi1 + phi2), phi1.dot(n1) + phi2.dot(n2)};
}

VectorTrace jump_average_boundary(const Vec2& phi, const Vec2& n) {
  check_unit(n);
  return {phi, phi.dot(n)};
}

double penalty_for_edge(const PolyMesh& mesh, int edge, const EllipticProblem& problem, int m,
                        double k_boundary) {
  if (k_boundary <= 0.0) throw ConfigError("penalty factor k must be positive");
  const double base = k_boundary * m * m * problem.c2;
  if (mesh.edges()[edge].is_boundary()) return base;
  return std::max(3.0 * problem.c2, base);
}

std::vector<double> compute_penalties(const PolyMesh& mesh, const EllipticProblem& problem,
                                      int m, double k_boundary) {
  std::vector<double> eta(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e)
    eta[e] = penalty_for_edge(mesh, e, problem, m, k_boundary);
  return eta;
}

namespace {

constexpr std::size_t kFlushThreshold = 1u << 23;

void flush(std::vector<Eigen::Triplet<double>>& buffer, Eigen::SparseMatrix<double>& matrix,
           bool force = false) {
  if (buffer.empty() || (!force && buffer.size() < kFlushThreshold)) return;
  Eigen::SparseMatrix<double> part(matrix.rows(), matrix.cols());
  part.setFromTriplets(buffer.begin(), buffer.end());
  matrix += part;
  buffer.clear();
}

void scatter(const std::vector<int>& dofs, const Eigen::MatrixXd& element,
             std::vector<Eigen::Triplet<double>>& buffer) {
  const int n = static_cast<int>(dofs.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (element(i, j) != 0.0) buffer.emplace_back(dofs[i], dofs[j], element(i, j));
}

// Union dof list of the two patches with per-side scatter positions.
struct EdgeUnion {
  std::vector<int> dofs;
  std::vector<int> left_pos;   // position of members(L)[i] in dofs
  std::vector<int> right_pos;  // position of members(R)[i] in dofs
};

EdgeUnion make_union(const ReconOp& left, const ReconOp* right) {
  EdgeUnion u;
  u.dofs = left.patch.members;
  if (right) u.dofs.insert(u.dofs.end(), right->patch.members.begin(), right->patch.members.end());
  std::sort(u.dofs.begin(), u.dofs.end());
  u.dofs.erase(std::unique(u.dofs.begin(), u.dofs.end()), u.dofs.end());
  auto position = [&](int dof) {
    return static_cast<int>(std::lower_bound(u.dofs.begin(), u.dofs.end(), dof) - u.dofs.begin());
  };
  for (int m : left.patch.members) u.left_pos.push_back(position(m));
  if (right)
    for (int m : right->patch.members) u.right_pos.push_back(position(m));
  return u;
}

}  // namespace

DgSystem assemble(const PolyMesh& mesh, const SubTriangulation& sub, const GlobalRecon& recon,
                  const EllipticProblem& problem, const std::vector<double>& penalties,
                  const AssemblyOptions& options) {
  if (recon.num_cells() != mesh.num_cells())
    throw ConfigError("assemble: reconstruction was built for a different mesh");
  if (static_cast<int>(penalties.size()) != mesh.num_edges())
    throw ConfigError("assemble: penalty record does not match the edge count");

  const int n = mesh.num_cells();
  const int m = recon.m;
  const int cell_degree = options.cell_quad_degree > 0 ? options.cell_quad_degree : 2 * m + 2;
  const int edge_points = options.edge_quad_points > 0 ? options.edge_quad_points : m + 2;

  DgSystem system;
  system.matrix.resize(n, n);
  system.rhs = Eigen::VectorXd::Zero(n);
  system.edge_penalties = penalties;
  system.dof_of_cell.resize(n);
  for (int i = 0; i < n; ++i) system.dof_of_cell[i] = i;
  system.recon_mean_weights = Eigen::VectorXd::Zero(n);
  system.pure_neumann = problem.pure_neumann();

  std::vector<Eigen::Triplet<double>> buffer;
  buffer.reserve(kFlushThreshold + (1u << 12));

  // volume terms: int_K (A grad phi_j) . grad phi_i and the source
  for (int cell = 0; cell < n; ++cell) {
    const ReconOp& op = recon.op(cell);
    const int dim = op.basis.dim();
    const QuadratureRule rule = cell_quadrature(mesh, sub, cell, cell_degree);

    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd source = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(dim);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const Eigen::Matrix2Xd G = op.basis.gradient_rows(x);
      const Mat2 A = problem.coefficient(x);
      stiff.noalias() += w * G.transpose() * (A * G);
      const Eigen::RowVectorXd b = op.basis.row(x);
      source.noalias() += (w * problem.source(x)) * b.transpose();
      mass.noalias() += w * b.transpose();
    }
    stiff = 0.5 * (stiff + stiff.transpose()).eval();

    const Eigen::MatrixXd& C = op.coeff_map;  // dim x n_members
    Eigen::MatrixXd element = C.transpose() * stiff * C;
    element = 0.5 * (element + element.transpose()).eval();
    scatter(op.patch.members, element, buffer);
    flush(buffer, system.matrix);

    const Eigen::VectorXd local_rhs = C.transpose() * source;
    const Eigen::VectorXd local_mean = C.transpose() * mass;
    for (int i = 0; i < op.patch.size(); ++i) {
      system.rhs(op.patch.members[i]) += local_rhs(i);
      system.recon_mean_weights(op.patch.members[i]) += local_mean(i);
    }
  }

  // edge terms: consistency, symmetry, penalty
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const bool boundary = edge.is_boundary();
    if (boundary) {
      const auto& bc = problem.condition_for_marker(edge.marker);
      if (bc.type == BoundaryCondition::Type::Neumann) continue;  // natural condition
    }

    const ReconOp& left = recon.op(edge.cell0);
    const ReconOp* right = boundary ? nullptr : &recon.op(edge.cell1);
    const EdgeUnion u = make_union(left, right);
    const int nu = static_cast<int>(u.dofs.size());

    const Vec2 n1 = mesh.outward_normal(e, edge.cell0);
    const double eta_over_h = penalties[e] / mesh.edge_length(e);
    const QuadratureRule rule = segment_rule_npoints(
        mesh.vertices()[edge.v0], mesh.vertices()[edge.v1], edge_points);

    Eigen::MatrixXd element = Eigen::MatrixXd::Zero(nu, nu);
    Eigen::VectorXd jump(nu), avg_flux(nu);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const Mat2 A = problem.coefficient(x);
      const Vec2 An = A * n1;

      jump.setZero();
      avg_flux.setZero();
      const Eigen::RowVectorXd valL = left.basis.row(x) * left.coeff_map;
      const Eigen::RowVectorXd fluxL = (An.transpose() * left.basis.gradient_rows(x)) *
                                       left.coeff_map;
      const double side_weight = boundary ? 1.0 : 0.5;
      for (int i = 0; i < valL.size(); ++i) {
        jump(u.left_pos[i]) += valL(i);
        avg_flux(u.left_pos[i]) += side_weight * fluxL(i);
      }
      if (right) {
        const Eigen::RowVectorXd valR = right->basis.row(x) * right->coeff_map;
        const Eigen::RowVectorXd fluxR = (An.transpose() * right->basis.gradient_rows(x)) *
                                         right->coeff_map;
        for (int i = 0; i < valR.size(); ++i) {
          jump(u.right_pos[i]) -= valR(i);
          avg_flux(u.right_pos[i]) += side_weight * fluxR(i);
        }
      }

      element.noalias() -= w * (jump * avg_flux.transpose() + avg_flux * jump.transpose());
      element.noalias() += (w * eta_over_h) * (jump * jump.transpose());
    }
    element = 0.5 * (element + element.transpose()).eval();
    scatter(u.dofs, element, buffer);
    flush(buffer, system.matrix);
  }

  flush(buffer, system.matrix, /*force=*/true);
  system.matrix.makeCompressed();
  return system;
}

void apply_dirichlet_rhs(const PolyMesh& mesh, const GlobalRecon& recon,
                         const EllipticProblem& problem, const std::vector<double>& penalties,
                         DgSystem& system, const AssemblyOptions& options) {
  const int edge_points = options.edge_quad_points > 0 ? options.edge_quad_points : recon.m + 2;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (!edge.is_boundary()) continue;
    const auto& bc = problem.condition_for_marker(edge.marker);
    if (bc.type != BoundaryCondition::Type::Dirichlet) continue;

    const ReconOp& op = recon.op(edge.cell0);
    const Vec2 n1 = mesh.outward_normal(e, edge.cell0);
    const double eta_over_h = penalties[e] / mesh.edge_length(e);
    const QuadratureRule rule = segment_rule_npoints(
        mesh.vertices()[edge.v0], mesh.vertices()[edge.v1], edge_points);

    Eigen::VectorXd local = Eigen::VectorXd::Zero(op.patch.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double g = bc.value(x, n1);
      if (g == 0.0) continue;
      const Mat2 A = problem.coefficient(x);
      const Eigen::RowVectorXd val = op.basis.row(x) * op.coeff_map;
      const Eigen::RowVectorXd flux = ((A * n1).transpose() * op.basis.gradient_rows(x)) *
                                      op.coeff_map;
      local.noalias() +=
          (rule.weights[q] * g) * (eta_over_h * val - flux).transpose();
    }
    for (int i = 0; i < op.patch.size(); ++i) system.rhs(op.patch.members[i]) += local(i);
  }
}

void apply_neumann_rhs(const PolyMesh& mesh, const GlobalRecon& recon,
                       const EllipticProblem& problem, DgSystem& system,
                       const AssemblyOptions& options) {
  const int edge_points = options.edge_quad_points > 0 ? options.edge_quad_points : recon.m + 2;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (!edge.is_boundary()) continue;
    const auto& bc = problem.condition_for_marker(edge.marker);
    if (bc.type != BoundaryCondition::Type::Neumann) continue;

    const ReconOp& op = recon.op(edge.cell0);
    const Vec2 n1 = mesh.outward_normal(e, edge.cell0);
    const QuadratureRule rule = segment_rule_npoints(
        mesh.vertices()[edge.v0], mesh.vertices()[edge.v1], edge_points);

    Eigen::VectorXd local = Eigen::VectorXd::Zero(op.patch.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Eigen::RowVectorXd val = op.basis.row(rule.points[q]) * op.coeff_map;
      local.noalias() += (rule.weights[q] * bc.value(rule.points[q], n1)) * val.transpose();
    }
    for (int i = 0; i < op.patch.size(); ++i) system.rhs(op.patch.members[i]) += local(i);
  }
}

}  // namespace rdg
