#include "gradfem/study.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "gradfem/error.hpp"
#include "gradfem/refine.hpp"

namespace gradfem {

double h1_seminorm_diff(const FeFunction& fine, const FeFunction& coarse) {
  const Mesh& fm = *fine.dofs->mesh;
  const Mesh& cm = *coarse.dofs->mesh;
  if (fm.level != cm.level + 1 || fm.parent_of_triangle.size() != fm.triangles.size() ||
      fm.triangles.size() != 4 * cm.triangles.size()) {
    throw Error(ErrorKind::NotNested, "level " + std::to_string(fm.level) + " is not a refinement of level " +
                                          std::to_string(cm.level));
  }
  const auto& rule = triangle_rule();
  std::vector<ShapeSet> fine_table;
  for (const auto& p : rule.points) fine_table.push_back(shape_values_and_gradients(fine.dofs->degree, p));

  double sum = 0.0;
  for (std::size_t t = 0; t < fm.triangles.size(); ++t) {
    const Index parent = fm.parent_of_triangle[t];
    if (parent < 0 || static_cast<std::size_t>(parent) >= cm.triangles.size()) {
      throw Error(ErrorKind::NotNested, "parent index out of range");
    }
    const auto ftri = fm.corners(t);
    const auto ctri = cm.corners(parent);
    const auto fmap = ElementMap::of(ftri);
    const auto cmap = ElementMap::of(ctri);
    const auto& fdofs = fine.dofs->cell_dofs[t];
    const auto& cdofs = coarse.dofs->cell_dofs[parent];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& fs = fine_table[q];
      Point2 gf{};
      for (int i = 0; i < fs.count; ++i) gf = gf + fine.coefficients[fdofs[i]] * fs.gradient[i];
      gf = fmap.physical_gradient(gf);

      const Point2 x = from_barycentric(ftri, rule.points[q]);
      const auto cs = shape_values_and_gradients(coarse.dofs->degree, barycentric_of(ctri, x));
      Point2 gc{};
      for (int i = 0; i < cs.count; ++i) gc = gc + coarse.coefficients[cdofs[i]] * cs.gradient[i];
      gc = cmap.physical_gradient(gc);

      const Point2 diff = gf - gc;
      sum += rule.weights[q] * fmap.det * dot(diff, diff);
    }
  }
  return std::sqrt(sum);
}

double convergence_rate(double d_prev, double d_next) {
  if (!(d_prev > 0.0) || !(d_next > 0.0)) {
    std::ostringstream os;
    os << "differences must be positive, got " << d_prev << " and " << d_next;
    throw Error(ErrorKind::NonpositiveDifference, os.str());
  }
  return std::log2(d_prev / d_next);
}

std::string describe(const MeshTemplate& recipe) {
  std::ostringstream os;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GridTemplate>) {
          os << "grid(" << r.x_lines.size() - 1 << "x" << r.y_lines.size() - 1 << ")";
        } else if constexpr (std::is_same_v<T, UnionJackTemplate>) {
          os << "union-jack(" << r.cells << ")";
        } else if constexpr (std::is_same_v<T, FileTemplate>) {
          os << "file(" << r.path.filename().string() << ")";
        } else {
          os << "explicit(" << r.triangles.size() << ")";
        }
      },
      recipe);
  return os.str();
}

LevelSolution solve_on(std::shared_ptr<const Mesh> mesh, const ProblemSpec& spec, const SolveOptions& options) {
  auto dofs = std::make_shared<const DofMap>(build_dofmap(std::move(mesh), spec.degree));
  SparseSystem system{assemble_stiffness(*dofs), assemble_line_load(*dofs, spec.fractures)};
  apply_dirichlet(system, dofs->boundary_dofs);
  auto [x, report] = cg_solve(system, options);
  return {FeFunction{std::move(dofs), std::move(x)}, report};
}

StudyReport run_study(const ProblemSpec& spec, const MeshTemplate& recipe, int levels, const StudyOptions& options) {
  if (levels < 0) throw Error(ErrorKind::InvalidArgument, "levels must be >= 0");
  StudyReport report;
  report.degree = spec.degree;
  report.mesh_template = describe(recipe);
  for (const auto& sp : spec.singular_points) report.kappas.push_back(sp.kappa);

  auto mesh = std::make_shared<const Mesh>(build_initial_mesh(spec, recipe));
  std::optional<FeFunction> previous;
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) mesh = std::make_shared<const Mesh>(graded_refine(*mesh).first);

    auto dofs = std::make_shared<const DofMap>(build_dofmap(mesh, spec.degree));
    const CsrMatrix stiffness = assemble_stiffness(*dofs);
    const std::vector<double> load = assemble_line_load(*dofs, spec.fractures);
    SparseSystem system{stiffness, load};
    apply_dirichlet(system, dofs->boundary_dofs);
    auto [x, solve] = cg_solve(system, options.solver);
    FeFunction solution{dofs, std::move(x)};

    LevelRecord rec;
    rec.level = level;
    rec.dofs = dofs->free_dof_count();
    rec.total_dofs = dofs->dof_count;
    rec.triangles = mesh->triangles.size();
    rec.solve = solve;
    if (previous) rec.h1_diff = h1_seminorm_diff(solution, *previous);
    report.levels.push_back(rec);

    if (options.on_level) options.on_level({*mesh, *dofs, stiffness, load, solution, report.levels.back()});
    previous = std::move(solution);
  }

  for (std::size_t j = 1; j + 1 < report.levels.size(); ++j) {
    const auto& d_prev = report.levels[j].h1_diff;
    const auto& d_next = report.levels[j + 1].h1_diff;
    if (d_prev && d_next && *d_prev > 0 && *d_next > 0) report.levels[j].rate = convergence_rate(*d_prev, *d_next);
  }
  return report;
}

void write_report_csv(std::ostream& out, const StudyReport& report) {
  const auto old_precision = out.precision(17);
  out << "level,dofs,triangles,cg_iters,h1_diff,rate\n";
  for (const auto& r : report.levels) {
    out << r.level << "," << r.dofs << "," << r.triangles << "," << r.solve.iterations << ",";
    if (r.h1_diff) out << *r.h1_diff;
    out << ",";
    if (r.rate) out << *r.rate;
    out << "\n";
  }
  out.precision(old_precision);
}

double dof_scaling_slope(const StudyReport& report, int count) {
  // Pairs (dim S_j, |u_{j+1} - u_j|).
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j + 1 < report.levels.size(); ++j) {
    const auto& next = report.levels[j + 1].h1_diff;
    if (next && *next > 0) {
      pts.emplace_back(std::log(static_cast<double>(report.levels[j].dofs)), std::log(*next));
    }
  }
  if (count < 2 || pts.size() < static_cast<std::size_t>(count)) {
    throw Error(ErrorKind::InvalidArgument, "not enough levels for a slope fit");
  }
  pts.erase(pts.begin(), pts.end() - count);
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= count;
  my /= count;
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace gradfem
