#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rdg/mesh.hpp"
#include "rdg/poly.hpp"

namespace rdg {

/// The sampling node set of some patch fails the unisolvence requirement:
/// a nonzero polynomial of the reconstruction degree vanishes on all nodes.
struct AssumptionBViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NeighborRule { Moore, VonNeumann };

/// Element patch: the owner cell plus neighbours collected by recursive
/// expansion, with one sampling node per member cell.
struct Patch {
  int owner_cell = -1;
  std::vector<int> members;  // owner first, then rings in cell-id order
  std::vector<Vec2> nodes;   // one per member
  int depth = 0;
  NeighborRule rule = NeighborRule::VonNeumann;

  int size() const { return static_cast<int>(members.size()); }
};

struct PatchGeometry {
  double d = 0.0;               // patch diameter
  double R = 0.0;               // circumscribed radius about the patch centroid
  double r = 0.0;               // inscribed radius about the owner barycenter
  double gamma = 0.0;           // chunkiness estimate d / r
  double theta = 0.0;           // cone aperture 2 asin(r / 2R)
  double width_estimate = 0.0;  // width of the patch convex hull
};

struct CardinalityCheck {
  double bound = 0.0;
  int actual = 0;
  bool satisfied = false;
};

Patch build_patch(const PolyMesh& mesh, int cell, int depth, NeighborRule rule);

/// Smallest depth whose node set has at least safety * dim(P_m) members
/// and a full-rank least-squares design matrix. Throws when the whole
/// mesh is exhausted first.
Patch auto_depth(const PolyMesh& mesh, int cell, int m, NeighborRule rule,
                 double safety = 2.0);

/// Moves each node to distance magnitude * h_K from its cell barycenter in
/// a seed-deterministic uniform random direction. The perturbed node of a
/// given cell does not depend on which patch it is viewed from. Directions
/// are re-drawn (up to 100 times) while the node leaves its cell, then the
/// radius is shrunk toward the barycenter.
Patch perturb_nodes(const PolyMesh& mesh, const Patch& patch, double magnitude,
                    std::uint64_t seed);

PatchGeometry geometry_report(const PolyMesh& mesh, const Patch& patch);

/// Certified stability constant from the patch geometry: 2 whenever
/// r > 2m sqrt(R h_K); otherwise 1 + epsilon whenever
/// r > m sqrt(2 R h_K (1 + 1/epsilon)) for a caller-supplied epsilon.
std::optional<double> lambda_bound_check(const PatchGeometry& geom, int m, double h_K,
                                         std::optional<double> epsilon = std::nullopt);

/// Upper-bound surrogate for the node-values-to-point-values stability
/// constant: the max over sampled points of the l1 norm of the row mapping
/// node values to the least-squares fit at that point. Always >= 1.
double lebesgue_estimate(const PolyMesh& mesh, const Patch& patch, int m,
                         int sample_density = 4);

/// Same estimate over caller-chosen evaluation points.
double lebesgue_estimate_at(const PolyMesh& mesh, const Patch& patch, int m,
                            const std::vector<Vec2>& points);

/// Compares #I(K) with sigma^2 rho1^2 / N * R^2 / h_K^2 from the measured
/// mesh regularity constants.
CardinalityCheck cardinality_bound_check(const PolyMesh& mesh, const RegularityReport& reg,
                                         const Patch& patch, const PatchGeometry& geom);

/// Design matrix of the patch least-squares problem in the scaled monomial
/// basis (rows = nodes, columns = P_m terms).
Eigen::MatrixXd patch_design_matrix(const PolyMesh& mesh, const Patch& patch, int m);

/// Basis used by the patch/reconstruction fit: centered at the owner
/// barycenter, scaled by the patch diameter.
PolyBasis patch_basis(const PolyMesh& mesh, const Patch& patch, int m);

}  // namespace rdg
