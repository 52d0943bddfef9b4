#include <doctest.h>

#include <random>

#include "rdg/solver.hpp"

using namespace rdg;

namespace {

DgSystem system_from_dense(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  DgSystem s;
  s.matrix = M.sparseView();
  s.rhs = b;
  s.dof_of_cell.resize(b.size());
  return s;
}

}  // namespace

TEST_CASE("direct_solve: 1x1 and residual contract") {
  Eigen::MatrixXd M(1, 1);
  M << 2.0;
  Eigen::VectorXd b(1);
  b << 4.0;
  const Solution sol = direct_solve(system_from_dense(M, b));
  CHECK(sol.dof_values(0) == doctest::Approx(2.0));
  CHECK(sol.stats.residual <= 1e-10);
}

TEST_CASE("direct_solve: random SPD 50x50") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd G(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) G(i, j) = unif(rng);
  const Eigen::MatrixXd M = G * G.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
  Eigen::VectorXd b(50);
  for (auto& x : b) x = unif(rng);
  const Solution sol = direct_solve(system_from_dense(M, b));
  CHECK(sol.stats.residual <= 1e-10);
  CHECK((M * sol.dof_values - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("direct_solve: determinism") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd G(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) G(i, j) = unif(rng);
  const Eigen::MatrixXd M = G * G.transpose() + 20.0 * Eigen::MatrixXd::Identity(20, 20);
  Eigen::VectorXd b(20);
  for (auto& x : b) x = unif(rng);
  const Solution a = direct_solve(system_from_dense(M, b));
  const Solution c = direct_solve(system_from_dense(M, b));
  CHECK((a.dof_values - c.dof_values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve_pure_neumann: graph Laplacian with mean constraint") {
  // 3-cell chain Laplacian; null space = constants
  Eigen::MatrixXd M(3, 3);
  M << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  Eigen::VectorXd b(3);
  b << 1.0, 0.0, -1.0;  // compatible: sums to zero

  DgSystem sys = system_from_dense(M, b);
  sys.pure_neumann = true;
  sys.recon_mean_weights = Eigen::VectorXd::Ones(3);  // uniform areas

  const Solution sol = solve_pure_neumann(sys);
  CHECK(sol.stats.warning.empty());
  CHECK(sol.stats.residual <= 1e-10);
  CHECK(sys.recon_mean_weights.dot(sol.dof_values) == doctest::Approx(0.0).epsilon(1e-12));
  // exact mean-zero solution of the chain: (1, 0, -1)
  CHECK(sol.dof_values(0) == doctest::Approx(1.0));
  CHECK(sol.dof_values(1) == doctest::Approx(0.0));
  CHECK(sol.dof_values(2) == doctest::Approx(-1.0));

  // zero data gives the zero solution
  sys.rhs.setZero();
  const Solution zero = solve_pure_neumann(sys);
  CHECK(zero.dof_values.cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("solve_pure_neumann: gauge invariance via remove_mean") {
  Eigen::MatrixXd M(3, 3);
  M << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  Eigen::VectorXd b(3);
  b << 0.5, 0.25, -0.75;
  DgSystem sys = system_from_dense(M, b);
  sys.pure_neumann = true;
  sys.recon_mean_weights = Eigen::VectorXd::Ones(3);

  const Solution sol = solve_pure_neumann(sys);
  // shifting by a constant and re-projecting returns the same vector
  const Eigen::VectorXd shifted = sol.dof_values + Eigen::VectorXd::Constant(3, 7.5);
  const Eigen::VectorXd back = remove_mean(sys, shifted);
  CHECK((back - sol.dof_values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("solve_pure_neumann: incompatible data warns") {
  Eigen::MatrixXd M(2, 2);
  M << 1, -1, -1, 1;
  Eigen::VectorXd b(2);
  b << 1.0, 0.5;  // sum != 0
  DgSystem sys = system_from_dense(M, b);
  sys.pure_neumann = true;
  sys.recon_mean_weights = Eigen::VectorXd::Ones(2);
  const Solution sol = solve_pure_neumann(sys);
  CHECK(!sol.stats.warning.empty());
}

TEST_CASE("direct_solve on a singular system advises pure-Neumann mode") {
  Eigen::MatrixXd M(2, 2);
  M << 1, -1, -1, 1;
  Eigen::VectorXd b(2);
  b << 1.0, -1.0;
  DgSystem sys = system_from_dense(M, b);
  sys.pure_neumann = true;
  CHECK_THROWS_WITH_AS(direct_solve(sys), doctest::Contains("pure Neumann"), NumericalError);
}
