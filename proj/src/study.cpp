#include "rdg/study.hpp"

#include <algorithm>
#include <cmath>

namespace rdg {

double DiscreteField::value(int cell, const Vec2& p) const {
  const ReconOp& op = recon->op(cell);
  return op.evaluate(op.gather(dofs), p);
}

Vec2 DiscreteField::gradient(int cell, const Vec2& p) const {
  const ReconOp& op = recon->op(cell);
  return op.evaluate_gradient(op.gather(dofs), p);
}

namespace {

int default_degree(const DiscreteField& field, int quad_degree) {
  return quad_degree > 0 ? quad_degree : 2 * field.recon->m + 2;
}

}  // namespace

double l2_error(const DiscreteField& field, const std::function<double(const Vec2&)>& exact,
                int quad_degree, double exact_shift) {
  const int degree = default_degree(field, quad_degree);
  double total = 0.0;
  for (int cell = 0; cell < field.mesh->num_cells(); ++cell) {
    const ReconOp& op = field.recon->op(cell);
    const Eigen::VectorXd coeffs = op.coefficients(op.gather(field.dofs));
    const QuadratureRule rule = cell_quadrature(*field.mesh, *field.sub, cell, degree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double diff =
          (exact(rule.points[q]) - exact_shift) - op.basis.row(rule.points[q]).dot(coeffs);
      total += rule.weights[q] * diff * diff;
    }
  }
  return std::sqrt(total);
}

double mean_difference(const DiscreteField& field,
                       const std::function<double(const Vec2&)>& exact, int quad_degree) {
  const int degree = default_degree(field, quad_degree);
  double total = 0.0, area = 0.0;
  for (int cell = 0; cell < field.mesh->num_cells(); ++cell) {
    const ReconOp& op = field.recon->op(cell);
    const Eigen::VectorXd coeffs = op.coefficients(op.gather(field.dofs));
    const QuadratureRule rule = cell_quadrature(*field.mesh, *field.sub, cell, degree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      total += rule.weights[q] *
               (exact(rule.points[q]) - op.basis.row(rule.points[q]).dot(coeffs));
      area += rule.weights[q];
    }
  }
  return total / area;
}

double energy_error(const DiscreteField& field, const std::function<double(const Vec2&)>& exact,
                    const std::function<Vec2(const Vec2&)>& exact_gradient,
                    EnergyBoundaryJumps jumps, const EllipticProblem* problem, int quad_degree,
                    double exact_shift) {
  const PolyMesh& mesh = *field.mesh;
  const int degree = default_degree(field, quad_degree);
  double total = 0.0;

  // broken gradient term
  for (int cell = 0; cell < mesh.num_cells(); ++cell) {
    const ReconOp& op = field.recon->op(cell);
    const Eigen::VectorXd coeffs = op.coefficients(op.gather(field.dofs));
    const QuadratureRule rule = cell_quadrature(mesh, *field.sub, cell, degree);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 diff = exact_gradient(rule.points[q]) -
                        Vec2(op.basis.gradient_rows(rule.points[q]) * coeffs);
      total += rule.weights[q] * diff.squaredNorm();
    }
  }

  // |e|^{-1}-weighted jumps of the error; the smooth part is continuous,
  // so interior jumps reduce to jumps of the reconstruction
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (edge.is_boundary()) {
      if (jumps == EnergyBoundaryJumps::None) continue;
      if (jumps == EnergyBoundaryJumps::DirichletOnly) {
        if (!problem) continue;
        const auto& bc = problem->condition_for_marker(edge.marker);
        if (bc.type != BoundaryCondition::Type::Dirichlet) continue;
      }
    }
    const QuadratureRule rule =
        segment_rule(mesh.vertices()[edge.v0], mesh.vertices()[edge.v1], degree);
    const ReconOp& opL = field.recon->op(edge.cell0);
    const Eigen::VectorXd cL = opL.coefficients(opL.gather(field.dofs));
    double jump2 = 0.0;
    if (edge.is_boundary()) {
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double w = (exact(rule.points[q]) - exact_shift) -
                         opL.basis.row(rule.points[q]).dot(cL);
        jump2 += rule.weights[q] * w * w;
      }
    } else {
      const ReconOp& opR = field.recon->op(edge.cell1);
      const Eigen::VectorXd cR = opR.coefficients(opR.gather(field.dofs));
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double w = opL.basis.row(rule.points[q]).dot(cL) -
                         opR.basis.row(rule.points[q]).dot(cR);
        jump2 += rule.weights[q] * w * w;
      }
    }
    total += jump2 / mesh.edge_length(e);
  }
  return std::sqrt(total);
}

RateSummary fit_rates(std::vector<ErrorReport> reports) {
  if (reports.size() < 2)
    throw std::invalid_argument("fit_rates: need at least two reports");
  std::sort(reports.begin(), reports.end(),
            [](const ErrorReport& a, const ErrorReport& b) { return a.h > b.h; });

  RateSummary rates;
  const auto& fine = reports[reports.size() - 1];
  const auto& prev = reports[reports.size() - 2];
  const double dh = std::log(prev.h / fine.h);
  rates.l2_tail = std::log(prev.l2 / fine.l2) / dh;
  rates.energy_tail = std::log(prev.energy / fine.energy) / dh;

  auto slope = [&](auto value) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : reports) {
      const double x = std::log(r.h), y = std::log(value(r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(reports.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  rates.l2_slope = slope([](const ErrorReport& r) { return r.l2; });
  rates.energy_slope = slope([](const ErrorReport& r) { return r.energy; });

  for (std::size_t i = 1; i < reports.size(); ++i)
    if (reports[i].l2 >= reports[i - 1].l2 || reports[i].energy >= reports[i - 1].energy)
      rates.monotone = false;
  return rates;
}

PipelineResult solve_problem(const PolyMesh& mesh, const SubTriangulation& sub,
                             const EllipticProblem& problem, int m, const StudyOptions& options) {
  PipelineResult result;

  ReconstructionOptions ropts;
  ropts.m = m;
  ropts.rule = options.rule;
  ropts.depth = options.depth;
  ropts.safety = options.safety;
  ropts.perturbation = options.perturbation;
  ropts.seed = options.seed;
  ropts.threads = options.threads;
  result.recon = build_global_recon(mesh, ropts);

  const auto penalties = compute_penalties(mesh, problem, m, options.k_boundary);
  AssemblyOptions aopts;
  aopts.k_boundary = options.k_boundary;
  aopts.cell_quad_degree = options.cell_quad_degree;
  aopts.edge_quad_points = options.edge_quad_points;
  result.system = assemble(mesh, sub, result.recon, problem, penalties, aopts);
  apply_dirichlet_rhs(mesh, result.recon, problem, penalties, result.system, aopts);
  apply_neumann_rhs(mesh, result.recon, problem, result.system, aopts);

  result.solution = result.system.pure_neumann ? solve_pure_neumann(result.system)
                                               : direct_solve(result.system);

  if (problem.has_exact()) {
    DiscreteField field{&mesh, &sub, &result.recon, result.solution.dof_values};
    const double shift =
        result.system.pure_neumann ? mean_difference(field, problem.exact) : 0.0;
    ErrorReport report;
    report.m = m;
    report.n_dofs = mesh.num_cells();
    report.h = options.rate_vs_dofs ? 1.0 / std::sqrt(double(mesh.num_cells()))
                                    : mesh.max_cell_diameter();
    report.l2 = l2_error(field, problem.exact, options.cell_quad_degree, shift);
    report.energy =
        energy_error(field, problem.exact, problem.exact_gradient, options.energy_jumps,
                     &problem, options.cell_quad_degree, shift);
    result.errors = report;
  }
  return result;
}

StudyResult run_study(const EllipticProblem& problem, const std::vector<std::string>& mesh_specs,
                      const std::vector<int>& orders, const StudyOptions& options) {
  if (mesh_specs.empty()) throw ConfigError("run_study: empty mesh list");
  if (orders.empty()) throw ConfigError("run_study: empty order list");
  if (!problem.has_exact())
    throw ConfigError("run_study: problem has no exact solution to study against");

  StudyResult result;
  for (int m : orders) result.studies.push_back({m, {}, {}});

  for (const auto& spec : mesh_specs) {
    PolyMesh mesh = load_mesh_file(spec);
    const SubTriangulation sub = subtriangulate(mesh);
    for (std::size_t mi = 0; mi < orders.size(); ++mi) {
      try {
        PipelineResult pipe = solve_problem(mesh, sub, problem, orders[mi], options);
        result.studies[mi].reports.push_back(*pipe.errors);
      } catch (const std::exception& e) {
        result.failures.push_back({spec, orders[mi], e.what()});
      }
    }
  }
  for (auto& study : result.studies) {
    std::sort(study.reports.begin(), study.reports.end(),
              [](const ErrorReport& a, const ErrorReport& b) { return a.h > b.h; });
    if (study.reports.size() >= 2) study.rates = fit_rates(study.reports);
  }
  return result;
}

}  // namespace rdg
