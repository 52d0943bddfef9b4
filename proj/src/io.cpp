#include "rdg/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rdg {

void write_matrix_market(const Eigen::SparseMatrix<double>& matrix, std::ostream& out,
                         bool symmetric) {
  out << "%%MatrixMarket matrix coordinate real "
      << (symmetric ? "symmetric" : "general") << "\n";
  long long nnz = 0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it)
      if (!symmetric || it.row() >= it.col()) ++nnz;
  out << matrix.rows() << " " << matrix.cols() << " " << nnz << "\n";
  out << std::setprecision(17);
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it) {
      if (symmetric && it.row() < it.col()) continue;
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    }
}

void write_penalty_csv(const PolyMesh& mesh, const std::vector<double>& penalties,
                       std::ostream& out) {
  out << "edge_id,v0,v1,length,boundary,marker,eta\n";
  out << std::setprecision(17);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    out << e << "," << edge.v0 << "," << edge.v1 << "," << mesh.edge_length(e) << ","
        << (edge.is_boundary() ? 1 : 0) << "," << edge.marker << "," << penalties[e] << "\n";
  }
}

void write_solution_csv(const PolyMesh& mesh, const Eigen::VectorXd& dofs, std::ostream& out) {
  out << "cell_id,centroid_x,centroid_y,dof_value\n";
  out << std::setprecision(17);
  for (int k = 0; k < mesh.num_cells(); ++k) {
    const Vec2 c = mesh.cell_centroid(k);
    out << k << "," << c.x() << "," << c.y() << "," << dofs(k) << "\n";
  }
}

namespace {

// uniform-bin cell locator for probe grids
class CellLocator {
 public:
  explicit CellLocator(const PolyMesh& mesh) : mesh_(mesh) {
    lo_ = hi_ = mesh.vertices()[0];
    for (const Vec2& v : mesh.vertices()) {
      lo_ = lo_.cwiseMin(v);
      hi_ = hi_.cwiseMax(v);
    }
    bins_ = std::max(1, static_cast<int>(std::sqrt(double(mesh.num_cells()))));
    cells_.resize(static_cast<std::size_t>(bins_) * bins_);
    for (int k = 0; k < mesh.num_cells(); ++k) {
      Vec2 clo = mesh.vertices()[mesh.cells()[k][0]], chi = clo;
      for (int v : mesh.cells()[k]) {
        clo = clo.cwiseMin(mesh.vertices()[v]);
        chi = chi.cwiseMax(mesh.vertices()[v]);
      }
      const auto [i0, j0] = bin_of(clo);
      const auto [i1, j1] = bin_of(chi);
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) cells_[j * bins_ + i].push_back(k);
    }
  }

  int locate(const Vec2& p) const {
    if ((p.x() < lo_.x()) || (p.y() < lo_.y()) || (p.x() > hi_.x()) || (p.y() > hi_.y()))
      return -1;
    const auto [i, j] = bin_of(p);
    for (int k : cells_[j * bins_ + i])
      if (point_in_polygon(p, mesh_.cell_polygon(k))) return k;
    return -1;
  }

 private:
  std::pair<int, int> bin_of(const Vec2& p) const {
    const double w = std::max(hi_.x() - lo_.x(), 1e-300);
    const double h = std::max(hi_.y() - lo_.y(), 1e-300);
    const int i = std::clamp(static_cast<int>((p.x() - lo_.x()) / w * bins_), 0, bins_ - 1);
    const int j = std::clamp(static_cast<int>((p.y() - lo_.y()) / h * bins_), 0, bins_ - 1);
    return {i, j};
  }

  const PolyMesh& mesh_;
  Vec2 lo_, hi_;
  int bins_ = 1;
  std::vector<std::vector<int>> cells_;
};

}  // namespace

void write_sampled_field_csv(const DiscreteField& field, int grid_n, std::ostream& out) {
  const PolyMesh& mesh = *field.mesh;
  const CellLocator locator(mesh);
  Vec2 lo = mesh.vertices()[0], hi = lo;
  for (const Vec2& v : mesh.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  out << "x,y,value\n";
  out << std::setprecision(17);
  for (int j = 0; j <= grid_n; ++j)
    for (int i = 0; i <= grid_n; ++i) {
      const Vec2 p(lo.x() + (hi.x() - lo.x()) * i / grid_n,
                   lo.y() + (hi.y() - lo.y()) * j / grid_n);
      const int cell = locator.locate(p);
      if (cell < 0) continue;
      out << p.x() << "," << p.y() << "," << field.value(cell, p) << "\n";
    }
}

void write_patch_report_csv(const PolyMesh& mesh, const SubTriangulation& sub,
                            const PatchReportOptions& options, std::ostream& out) {
  const RegularityReport reg = validate_regularity(mesh, sub);
  out << "cell_id,depth,members,R,r,gamma,theta,lambda_certified,lebesgue_estimate,"
         "cardinality_bound\n";
  out << std::setprecision(10);
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    Patch patch = options.depth >= 0
                      ? build_patch(mesh, cell, options.depth, options.rule)
                      : auto_depth(mesh, cell, options.m, options.rule, options.safety);
    if (options.perturbation > 0.0)
      patch = perturb_nodes(mesh, patch, options.perturbation, options.seed);
    const PatchGeometry geom = geometry_report(mesh, patch);
    const auto lambda = lambda_bound_check(geom, options.m, mesh.cell_diameter(cell));
    const auto card = cardinality_bound_check(mesh, reg, patch, geom);

    out << cell << "," << patch.depth << "," << patch.size() << "," << geom.R << "," << geom.r
        << "," << geom.gamma << "," << geom.theta << ",";
    if (lambda)
      out << *lambda;
    else
      out << "not_certified";
    out << "," << lebesgue_estimate(mesh, patch, options.m, options.lebesgue_density) << ","
        << card.bound << "\n";
  }
}

void write_study_csv(const StudyResult& result, std::ostream& out) {
  out << "m,h_or_N,l2_error,energy_error,l2_rate,energy_rate\n";
  out << std::setprecision(10);
  for (const auto& study : result.studies) {
    for (std::size_t i = 0; i < study.reports.size(); ++i) {
      const auto& r = study.reports[i];
      out << r.m << "," << r.h << "," << r.l2 << "," << r.energy << ",";
      if (i > 0) {
        const auto& p = study.reports[i - 1];
        const double dh = std::log(p.h / r.h);
        out << std::log(p.l2 / r.l2) / dh << "," << std::log(p.energy / r.energy) / dh;
      } else {
        out << ",";
      }
      out << "\n";
    }
  }
}

void write_coeff_maps_json(const GlobalRecon& recon, std::ostream& out) {
  out << std::setprecision(17);
  out << "{\n  \"m\": " << recon.m << ",\n  \"cells\": [\n";
  for (int cell = 0; cell < recon.num_cells(); ++cell) {
    const ReconOp& op = recon.op(cell);
    out << "    {\"cell\": " << cell << ", \"members\": [";
    for (int i = 0; i < op.patch.size(); ++i)
      out << (i ? "," : "") << op.patch.members[i];
    out << "], \"coeff_map\": [";
    for (int r = 0; r < op.coeff_map.rows(); ++r) {
      out << (r ? "," : "") << "[";
      for (int c = 0; c < op.coeff_map.cols(); ++c)
        out << (c ? "," : "") << op.coeff_map(r, c);
      out << "]";
    }
    out << "]}" << (cell + 1 < recon.num_cells() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
}

void write_loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                      const std::string& y_label, std::ostream& out) {
  const int width = 640, height = 480, margin = 56;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] <= 0 || s.y[i] <= 0) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmin >= xmax) xmax = xmin * 10;
  if (ymin >= ymax) ymax = ymin * 10;
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  auto px = [&](double x) {
    return margin + (std::log10(x) - lx0) / (lx1 - lx0) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (std::log10(y) - ly0) / (ly1 - ly0) * (height - 2 * margin);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // decade grid
  for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
    const double x = px(std::pow(10.0, d));
    out << "<line x1=\"" << x << "\" y1=\"" << margin << "\" x2=\"" << x << "\" y2=\""
        << height - margin << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - margin + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << margin << "\" y1=\"" << y << "\" x2=\"" << width - margin
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << y + 4
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << height / 2
      << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
    out << "\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14 * (s + 1)
        << "\" font-size=\"11\" fill=\"" << color << "\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace rdg
