#pragma once

#include <cstdint>
#include <functional>

#include "rdg/patch.hpp"

namespace rdg {

/// Per-element least-squares reconstruction: the linear map from the
/// values of the piecewise-constant unknown at the patch sampling nodes
/// to the coefficients of the degree-m fit, in the patch basis.
struct ReconOp {
  int owner_cell = -1;
  Patch patch;
  PolyBasis basis{0, Vec2::Zero(), 1.0};
  Eigen::MatrixXd coeff_map;  // dim(P_m) x #I(K)
  double condition = 0.0;     // design-matrix condition estimate

  Eigen::VectorXd coefficients(const Eigen::VectorXd& node_values) const;
  double evaluate(const Eigen::VectorXd& node_values, const Vec2& p) const;
  Vec2 evaluate_gradient(const Eigen::VectorXd& node_values, const Vec2& p) const;

  /// Column j: coefficient vector of the reconstruction of the j-th unit
  /// node vector (the shape function carried by patch member j on this cell).
  const Eigen::MatrixXd& basis_columns() const { return coeff_map; }

  /// Gathers this patch's node values from a global per-cell dof vector.
  Eigen::VectorXd gather(const Eigen::VectorXd& global_dofs) const;
};

/// Fits the least-squares operator over the patch nodes via a
/// rank-revealing orthogonal factorization. Throws AssumptionBViolation
/// when the design matrix is numerically rank deficient.
ReconOp fit_operator(const PolyMesh& mesh, const Patch& patch, int m);

struct ReconstructionOptions {
  int m = 1;
  NeighborRule rule = NeighborRule::VonNeumann;
  int depth = -1;  // -1: auto_depth
  double safety = 2.0;
  double perturbation = 0.0;  // node displacement as a fraction of h_K
  std::uint64_t seed = 0;
  int threads = 1;
};

/// One ReconOp per cell; the global operator restricted cell by cell.
struct GlobalRecon {
  int m = 0;
  ReconstructionOptions options;
  std::vector<ReconOp> ops;

  const ReconOp& op(int cell) const { return ops[cell]; }
  int num_cells() const { return static_cast<int>(ops.size()); }
};

GlobalRecon build_global_recon(const PolyMesh& mesh, const ReconstructionOptions& options);

/// Samples g at every patch node and reports the L2 and broken-H1 errors
/// of the reconstruction of those samples against g itself.
struct ProbeResult {
  double l2 = 0.0;
  double h1 = 0.0;
};
ProbeResult approximation_error_probe(const PolyMesh& mesh, const SubTriangulation& sub,
                                      const GlobalRecon& recon,
                                      const std::function<double(const Vec2&)>& g,
                                      const std::function<Vec2(const Vec2&)>& grad_g);

}  // namespace rdg
