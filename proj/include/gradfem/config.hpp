#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gradfem/linalg.hpp"
#include "gradfem/mesh.hpp"

namespace gradfem {

/// A kappa value, or `auto:a` meaning "derive from the grading exponent a".
struct KappaSetting {
  std::optional<double> value;
  std::optional<double> auto_exponent;

  static KappaSetting parse(const std::string& text);
  bool empty() const { return !value && !auto_exponent; }
};

struct SingularConfig {
  Point2 at;
  KappaSetting kappa;  // empty: use the top-level kappa
  SingularKind kind = SingularKind::FractureEndpoint;
  int line = 0;
};

/// Study configuration file. Grammar (one `key = value` per line, `#` comments):
///
///   domain          = x y, x y, ...          counterclockwise polygon
///   mesh            = grid | union-jack | file
///   grid.x, grid.y  = space-separated line coordinates
///   union_jack.cells = N
///   union_jack.x, union_jack.y = optional explicit cell lines (N + 1 values)
///   mesh.file       = path, relative to the config file
///   degree          = 1 | 2
///   levels          = number of refinements
///   kappa           = value | auto:a         default for singular points
///   grade_endpoints = true | false           mark fracture endpoints automatically
///   solver.rel_tol, solver.max_iter
///   output          = directory, relative to the working directory
///
/// Repeated sections:
///   [fracture]  from = x y   to = x y
///   [singular]  at = x y     kappa = ...   kind = fracture_endpoint | domain_vertex
struct StudyConfig {
  std::filesystem::path source;
  std::vector<Point2> domain;
  std::string mesh = "grid";
  GridTemplate grid;
  UnionJackTemplate union_jack;
  std::filesystem::path mesh_file;
  std::vector<Segment2> fractures;
  std::vector<SingularConfig> singular;
  KappaSetting kappa;
  int kappa_line = 0;
  bool grade_endpoints = true;
  int degree = 1;
  int levels = 0;
  SolveOptions solver;
  std::filesystem::path output = "out";
};

StudyConfig parse_config(std::istream& in, const std::filesystem::path& source);
StudyConfig load_config(const std::filesystem::path& path);

struct ResolvedStudy {
  ProblemSpec spec;
  MeshTemplate recipe;
};

/// Turns a configuration into a problem and a mesh recipe, resolving `auto`
/// kappas through kappa_from_theory. Throws ConfigParse or KappaOutOfRange.
ResolvedStudy resolve(const StudyConfig& config);

}  // namespace gradfem
