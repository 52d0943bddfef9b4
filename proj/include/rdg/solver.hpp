#pragma once

#include <string>

#include "rdg/assembly.hpp"

namespace rdg {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverStats {
  int dimension = 0;
  long long factor_nonzeros = 0;
  double residual = 0.0;          // relative, after constraint handling
  double mean_multiplier = 0.0;   // Lagrange multiplier of the mean constraint
  std::string warning;
};

struct Solution {
  Eigen::VectorXd dof_values;
  SolverStats stats;
};

/// Sparse symmetric factorization (fill-reducing ordering); relative
/// residual at most 1e-10 or a NumericalError is thrown.
Solution direct_solve(const DgSystem& system);

/// Solves the singular pure-Neumann system through a bordered formulation
/// that pins the area-weighted mean of the reconstructed field to zero.
/// Warns (in stats) when the data violate the compatibility condition.
Solution solve_pure_neumann(const DgSystem& system);

/// Removes the constant component as measured by the reconstructed mean:
/// returns dofs minus (w . dofs / w . 1) * 1.
Eigen::VectorXd remove_mean(const DgSystem& system, const Eigen::VectorXd& dofs);

}  // namespace rdg
