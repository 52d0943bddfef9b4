#include "rdg/reconstruction.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace rdg {

Eigen::VectorXd ReconOp::coefficients(const Eigen::VectorXd& node_values) const {
  if (node_values.size() != coeff_map.cols())
    throw std::invalid_argument("ReconOp: expected " + std::to_string(coeff_map.cols()) +
                                " node values, got " + std::to_string(node_values.size()));
  return coeff_map * node_values;
}

double ReconOp::evaluate(const Eigen::VectorXd& node_values, const Vec2& p) const {
  return basis.row(p).dot(coefficients(node_values));
}

Vec2 ReconOp::evaluate_gradient(const Eigen::VectorXd& node_values, const Vec2& p) const {
  return basis.gradient_rows(p) * coefficients(node_values);
}

Eigen::VectorXd ReconOp::gather(const Eigen::VectorXd& global_dofs) const {
  Eigen::VectorXd local(patch.size());
  for (int i = 0; i < patch.size(); ++i) local(i) = global_dofs(patch.members[i]);
  return local;
}

ReconOp fit_operator(const PolyMesh& mesh, const Patch& patch, int m) {
  ReconOp op;
  op.owner_cell = patch.owner_cell;
  op.patch = patch;
  op.basis = patch_basis(mesh, patch, m);

  const int dim = op.basis.dim();
  if (patch.size() < dim)
    throw AssumptionBViolation("patch of cell " + std::to_string(patch.owner_cell) + " has " +
                               std::to_string(patch.size()) + " nodes, need at least " +
                               std::to_string(dim) + " for degree " + std::to_string(m));

  Eigen::MatrixXd B(patch.size(), dim);
  for (int i = 0; i < patch.size(); ++i) B.row(i) = op.basis.row(patch.nodes[i]);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
  cod.setThreshold(1e-10);
  if (cod.rank() < dim)
    throw AssumptionBViolation(
        "patch of cell " + std::to_string(patch.owner_cell) + ": design matrix rank " +
        std::to_string(cod.rank()) + " < " + std::to_string(dim) +
        " (a degree-" + std::to_string(m) + " polynomial vanishes on all sampling nodes; "
        "increase the patch depth)");
  op.coeff_map = cod.pseudoInverse();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& sv = svd.singularValues();
  op.condition = sv(0) / sv(sv.size() - 1);
  return op;
}

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

GlobalRecon build_global_recon(const PolyMesh& mesh, const ReconstructionOptions& options) {
  GlobalRecon recon;
  recon.m = options.m;
  recon.options = options;
  recon.ops.resize(mesh.num_cells());
  parallel_for(mesh.num_cells(), options.threads, [&](int cell) {
    Patch patch = options.depth >= 0
                      ? build_patch(mesh, cell, options.depth, options.rule)
                      : auto_depth(mesh, cell, options.m, options.rule, options.safety);
    if (options.perturbation > 0.0)
      patch = perturb_nodes(mesh, patch, options.perturbation, options.seed);
    recon.ops[cell] = fit_operator(mesh, patch, options.m);
  });
  return recon;
}

ProbeResult approximation_error_probe(const PolyMesh& mesh, const SubTriangulation& sub,
                                      const GlobalRecon& recon,
                                      const std::function<double(const Vec2&)>& g,
                                      const std::function<Vec2(const Vec2&)>& grad_g) {
  ProbeResult result;
  const int degree = 2 * recon.m + 2;
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const ReconOp& op = recon.op(cell);
    Eigen::VectorXd values(op.patch.size());
    for (int i = 0; i < op.patch.size(); ++i) values(i) = g(op.patch.nodes[i]);
    const Eigen::VectorXd coeffs = op.coefficients(values);

    const QuadratureRule rule = cell_quadrature(mesh, sub, cell, degree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2& p = rule.points[q];
      const double diff = g(p) - op.basis.row(p).dot(coeffs);
      const Vec2 gdiff = grad_g(p) - Vec2(op.basis.gradient_rows(p) * coeffs);
      result.l2 += rule.weights[q] * diff * diff;
      result.h1 += rule.weights[q] * gdiff.squaredNorm();
    }
  }
  result.l2 = std::sqrt(result.l2);
  result.h1 = std::sqrt(result.h1);
  return result;
}

}  // namespace rdg
