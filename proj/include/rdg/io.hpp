#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rdg/study.hpp"

namespace rdg {

/// MatrixMarket coordinate format (1-based); symmetric mode stores the
/// lower triangle only.
void write_matrix_market(const Eigen::SparseMatrix<double>& matrix, std::ostream& out,
                         bool symmetric = true);

void write_penalty_csv(const PolyMesh& mesh, const std::vector<double>& penalties,
                       std::ostream& out);

/// cell_id, centroid_x, centroid_y, dof_value
void write_solution_csv(const PolyMesh& mesh, const Eigen::VectorXd& dofs, std::ostream& out);

/// Reconstructed field sampled on an n x n probe grid over the mesh
/// bounding box; points outside the mesh are skipped.
void write_sampled_field_csv(const DiscreteField& field, int grid_n, std::ostream& out);

struct PatchReportOptions {
  int m = 1;
  NeighborRule rule = NeighborRule::VonNeumann;
  int depth = -1;  // -1: auto
  double safety = 2.0;
  double perturbation = 0.0;
  std::uint64_t seed = 0;
  int lebesgue_density = 4;
};

/// Per-cell patch diagnostics CSV: cell_id, depth, members, R, r, gamma,
/// theta, lambda_certified, lebesgue_estimate, cardinality_bound.
void write_patch_report_csv(const PolyMesh& mesh, const SubTriangulation& sub,
                            const PatchReportOptions& options, std::ostream& out);

/// m, h_or_N, l2_error, energy_error, l2_rate, energy_rate; stepwise rates,
/// blank on each coarsest mesh.
void write_study_csv(const StudyResult& result, std::ostream& out);

/// Per-cell reconstruction coefficient maps for cross-implementation diffs.
void write_coeff_maps_json(const GlobalRecon& recon, std::ostream& out);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log line plot with markers, one series per entry.
void write_loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                      const std::string& y_label, std::ostream& out);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rdg
