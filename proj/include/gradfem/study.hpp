#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gradfem/fem.hpp"
#include "gradfem/linalg.hpp"
#include "gradfem/mesh.hpp"

namespace gradfem {

/// |fine - coarse|_{H^1} where coarse lives on the parent level of fine's mesh.
/// Coarse gradients are evaluated through the parent links, so the degree-4
/// rule integrates the (piecewise polynomial) difference exactly.
/// Throws NotNested unless fine's mesh is the direct refinement of coarse's.
double h1_seminorm_diff(const FeFunction& fine, const FeFunction& coarse);

/// log2(d_prev / d_next). Throws NonpositiveDifference unless both are positive.
double convergence_rate(double d_prev, double d_next);

struct LevelRecord {
  int level = 0;
  std::size_t dofs = 0;        // dim S_j: unknowns after Dirichlet elimination
  std::size_t total_dofs = 0;  // including boundary dofs
  std::size_t triangles = 0;
  SolveReport solve;
  std::optional<double> h1_diff;  // |u_j - u_{j-1}|
  std::optional<double> rate;     // uses u_{j-1}, u_j, u_{j+1}
};

struct StudyReport {
  std::vector<LevelRecord> levels;
  int degree = 1;
  std::vector<double> kappas;
  std::string mesh_template;
};

/// Everything produced while solving one level, for inspection by callers.
struct LevelView {
  const Mesh& mesh;
  const DofMap& dofs;
  const CsrMatrix& stiffness;  // before Dirichlet elimination
  const std::vector<double>& load;
  const FeFunction& solution;
  const LevelRecord& record;
};

struct StudyOptions {
  SolveOptions solver;
  std::function<void(const LevelView&)> on_level;
};

std::string describe(const MeshTemplate& recipe);

/// Builds level 0, refines `levels` times and solves on every level.
/// A non-converged solve is recorded (converged = false) and the study continues.
StudyReport run_study(const ProblemSpec& spec, const MeshTemplate& recipe, int levels,
                      const StudyOptions& options = {});

/// Solution on one level (used by the single-solve path).
struct LevelSolution {
  FeFunction solution;
  SolveReport solve;
};
LevelSolution solve_on(std::shared_ptr<const Mesh> mesh, const ProblemSpec& spec, const SolveOptions& options);

/// CSV with columns level,dofs,triangles,cg_iters,h1_diff,rate; undefined cells are empty.
void write_report_csv(std::ostream& out, const StudyReport& report);

/// Least-squares slope of log(h1_diff at level j+1) against log(dofs at level j)
/// over the last `count` levels that have a next difference.
double dof_scaling_slope(const StudyReport& report, int count);

}  // namespace gradfem
