#include "gradfem/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "gradfem/config.hpp"
#include "gradfem/error.hpp"
#include "gradfem/refine.hpp"
#include "gradfem/study.hpp"
#include "gradfem/vtk.hpp"

namespace gradfem {

namespace {

struct Overrides {
  std::string config;
  std::optional<int> levels;
  std::optional<int> degree;
  std::optional<std::string> kappa;
  std::optional<std::string> out;
  int threads = 1;
  bool no_dumps = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "study configuration file")->required();
  cmd->add_option("--levels", o.levels, "number of refinements");
  cmd->add_option("--degree", o.degree, "polynomial degree (1 or 2)");
  cmd->add_option("--kappa", o.kappa, "grading parameter for every singular point: <value> or auto:<a>");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker thread cap")->check(CLI::PositiveNumber);
}

StudyConfig configure(const Overrides& o) {
  StudyConfig cfg = load_config(o.config);
  if (o.levels) cfg.levels = *o.levels;
  if (o.degree) cfg.degree = *o.degree;
  if (o.out) cfg.output = *o.out;
  if (o.kappa) {
    try {
      cfg.kappa = KappaSetting::parse(*o.kappa);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigParse, std::string("--kappa: ") + e.what());
    }
    for (auto& s : cfg.singular) s.kappa = {};
  }
  set_thread_count(o.threads);
  return cfg;
}

void print_report(std::ostream& out, const StudyReport& report) {
  out << "template " << report.mesh_template << ", degree " << report.degree << "\n";
  out << std::setw(6) << "level" << std::setw(10) << "dofs" << std::setw(11) << "triangles" << std::setw(9)
      << "cg_iters" << std::setw(15) << "h1_diff" << std::setw(8) << "rate" << "\n";
  for (const auto& r : report.levels) {
    out << std::setw(6) << r.level << std::setw(10) << r.dofs << std::setw(11) << r.triangles << std::setw(9)
        << r.solve.iterations << std::setw(15);
    if (r.h1_diff) {
      out << std::scientific << std::setprecision(6) << *r.h1_diff << std::defaultfloat;
    } else {
      out << "-";
    }
    out << std::setw(8);
    if (r.rate) {
      out << std::fixed << std::setprecision(3) << *r.rate << std::defaultfloat;
    } else {
      out << "-";
    }
    if (!r.solve.converged) out << "  (solver did not converge)";
    out << "\n";
  }
}

int run_study_command(const Overrides& o, std::ostream& out) {
  const StudyConfig cfg = configure(o);
  const ResolvedStudy study = resolve(cfg);
  std::filesystem::create_directories(cfg.output);

  StudyOptions options;
  options.solver = cfg.solver;
  if (!o.no_dumps) {
    options.on_level = [&](const LevelView& v) {
      write_vtk_file(cfg.output / ("solution_level_" + std::to_string(v.record.level) + ".vtk"), v.solution);
    };
  }
  const StudyReport report = run_study(study.spec, study.recipe, cfg.levels, options);
  std::ofstream csv(cfg.output / "report.csv");
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + (cfg.output / "report.csv").string());
  write_report_csv(csv, report);
  print_report(out, report);

  const bool converged =
      std::all_of(report.levels.begin(), report.levels.end(), [](const auto& r) { return r.solve.converged; });
  return converged ? 0 : 3;
}

int run_mesh_command(const Overrides& o, std::ostream& out) {
  const StudyConfig cfg = configure(o);
  const ResolvedStudy study = resolve(cfg);
  std::filesystem::create_directories(cfg.output);
  Mesh mesh = build_initial_mesh(study.spec, study.recipe);
  for (int i = 0; i < cfg.levels; ++i) mesh = graded_refine(mesh).first;
  const auto path = cfg.output / ("mesh_level_" + std::to_string(cfg.levels) + ".msh");
  write_mesh_file(path, mesh);
  out << "wrote " << path.string() << " (" << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
      << " triangles)\n";
  return 0;
}

int run_solve_command(const Overrides& o, std::ostream& out) {
  const StudyConfig cfg = configure(o);
  const ResolvedStudy study = resolve(cfg);
  std::filesystem::create_directories(cfg.output);
  Mesh mesh = build_initial_mesh(study.spec, study.recipe);
  for (int i = 0; i < cfg.levels; ++i) mesh = graded_refine(mesh).first;
  const auto result = solve_on(std::make_shared<const Mesh>(std::move(mesh)), study.spec, cfg.solver);
  const auto path = cfg.output / ("solution_level_" + std::to_string(cfg.levels) + ".vtk");
  write_vtk_file(path, result.solution);
  out << "level " << cfg.levels << ": " << result.solution.dofs->free_dof_count() << " dofs, "
      << result.solve.iterations << " CG iterations, relative residual " << result.solve.relative_residual
      << "\nwrote " << path.string() << "\n";
  return result.solve.converged ? 0 : 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graded-mesh finite elements for Poisson problems with a line source"};
  app.require_subcommand(1);
  Overrides o;
  auto* study = app.add_subcommand("study", "refine, solve every level and report convergence rates");
  add_common(study, o);
  study->add_flag("--no-dumps", o.no_dumps, "skip the per-level solution files");
  auto* mesh = app.add_subcommand("mesh", "write the mesh after --levels refinements");
  add_common(mesh, o);
  auto* solve = app.add_subcommand("solve", "solve once at depth --levels");
  add_common(solve, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (study->parsed()) return run_study_command(o, out);
    if (mesh->parsed()) return run_mesh_command(o, out);
    return run_solve_command(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace gradfem
