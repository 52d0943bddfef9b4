#include "rdg/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

namespace rdg {

namespace {

double relative_residual(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (M * x - b).norm() / scale;
}

}  // namespace

Solution direct_solve(const DgSystem& system) {
  Solution solution;
  solution.stats.dimension = system.dimension();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.matrix);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("direct_solve: factorization breakdown" +
                         std::string(system.pure_neumann
                                         ? " (pure Neumann system; use solve_pure_neumann)"
                                         : ""));
  solution.dof_values = ldlt.solve(system.rhs);
  solution.stats.factor_nonzeros = ldlt.matrixL().nestedExpression().nonZeros();
  solution.stats.residual = relative_residual(system.matrix, solution.dof_values, system.rhs);
  if (!std::isfinite(solution.stats.residual) || solution.stats.residual > 1e-10)
    throw NumericalError(
        "direct_solve: relative residual " + std::to_string(solution.stats.residual) +
        " exceeds 1e-10" +
        std::string(system.pure_neumann ? " (pure Neumann system; use solve_pure_neumann)" : ""));
  return solution;
}

Solution solve_pure_neumann(const DgSystem& system) {
  const int n = system.dimension();
  const Eigen::VectorXd& w = system.recon_mean_weights;
  if (w.size() != n)
    throw NumericalError("solve_pure_neumann: system carries no mean weights");

  Solution solution;
  solution.stats.dimension = n;

  // nullspace sanity: the matrix must annihilate constants
  const double entry_scale = Eigen::Map<const Eigen::VectorXd>(
                                 system.matrix.valuePtr(), system.matrix.nonZeros())
                                 .cwiseAbs()
                                 .maxCoeff();
  const double null_defect =
      (system.matrix * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff();
  if (null_defect > 1e-8 * entry_scale)
    throw NumericalError("solve_pure_neumann: matrix does not annihilate constants (defect " +
                         std::to_string(null_defect / entry_scale) + " relative)");

  // compatibility: sum of the load must vanish (partition of unity makes
  // 1^T rhs the discrete integral of f plus the Neumann fluxes)
  const double compat = system.rhs.sum();
  if (std::abs(compat) > 1e-8 * std::max(system.rhs.norm(), 1e-300))
    solution.stats.warning = "incompatible Neumann data: |sum rhs| = " + std::to_string(compat) +
                             "; solving the compatible projection";

  // bordered system [[M, w],[w^T, 0]]
  Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(system.matrix.nonZeros() + 2 * n);
  for (int k = 0; k < system.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, n, w(i));
    trips.emplace_back(n, i, w(i));
  }
  bordered.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = system.rhs;
  rhs(n) = 0.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(bordered);
  if (lu.info() != Eigen::Success)
    throw NumericalError("solve_pure_neumann: factorization breakdown");
  const Eigen::VectorXd x = lu.solve(rhs);

  solution.dof_values = x.head(n);
  solution.stats.mean_multiplier = x(n);
  solution.stats.residual =
      (bordered * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!std::isfinite(solution.stats.residual) || solution.stats.residual > 1e-10)
    throw NumericalError("solve_pure_neumann: relative residual " +
                         std::to_string(solution.stats.residual) + " exceeds 1e-10");
  return solution;
}

Eigen::VectorXd remove_mean(const DgSystem& system, const Eigen::VectorXd& dofs) {
  const Eigen::VectorXd& w = system.recon_mean_weights;
  const double denom = w.sum();  // = total area by partition of unity
  return dofs - Eigen::VectorXd::Constant(dofs.size(), w.dot(dofs) / denom);
}

}  // namespace rdg
