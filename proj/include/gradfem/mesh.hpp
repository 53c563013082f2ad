#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gradfem/geometry.hpp"

namespace gradfem {

using Index = std::int32_t;
using TriangleVertices = std::array<Index, 3>;
using EdgeVertices = std::array<Index, 2>;

enum class SingularKind { FractureEndpoint, DomainVertex };

/// A point toward which refinement is graded, with its grading ratio kappa in (0, 0.5].
struct SingularPoint {
  Point2 at;
  double kappa = 0.5;
  SingularKind kind = SingularKind::FractureEndpoint;
};

struct ProblemSpec {
  std::vector<Point2> domain;  // counterclockwise simple polygon
  std::vector<Segment2> fractures;
  std::vector<SingularPoint> singular_points;
  int degree = 1;
  int refinements = 0;
};

/// Checks the parts of a ProblemSpec that do not depend on a mesh. Throws
/// KappaOutOfRange for kappa outside (0, 0.5] and InvalidArgument otherwise.
/// When `require_endpoint_marks` is set, every fracture endpoint must be listed
/// as a singular point.
void check_problem(const ProblemSpec& spec, bool require_endpoint_marks);

/// Largest interior angle of the (counterclockwise, simple) domain polygon.
double largest_interior_angle(const ProblemSpec& spec);

bool point_on_polygon_boundary(std::span<const Point2> polygon, Point2 p);

struct SingularVertex {
  Index vertex = 0;
  double kappa = 0.5;
};

/// How the line source is represented on the mesh.
enum class FractureMode {
  Conforming,  // fractures are unions of mesh edges (fracture_edges)
  Crossing,    // fractures cut through elements; loads come from clipping
};

struct Mesh {
  std::vector<Point2> vertices;
  std::vector<TriangleVertices> triangles;  // counterclockwise
  int level = 0;
  std::size_t base_triangle_count = 0;  // triangle count of level 0
  std::vector<Index> parent_of_triangle;  // empty at level 0
  std::vector<SingularVertex> singular_vertices;  // sorted by vertex
  std::vector<std::uint8_t> on_boundary;  // per vertex
  std::vector<EdgeVertices> fracture_edges;  // each stored as (min, max)
  FractureMode fracture_mode = FractureMode::Conforming;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  Triangle2 corners(std::size_t t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }
  /// Per-vertex kappa, 0 where the vertex is not singular.
  std::vector<double> kappa_per_vertex() const;
};

/// Unique edges of a triangulation. Local edge k of a triangle joins its
/// vertices k and (k+1)%3.
struct EdgeTable {
  std::vector<EdgeVertices> ends;  // (min, max), sorted lexicographically
  std::vector<std::array<Index, 3>> of_triangle;
  std::vector<std::uint8_t> incidence;  // number of triangles sharing each edge

  Index find(Index a, Index b) const;  // -1 when absent
};

EdgeTable build_edge_table(const Mesh& mesh);

struct GridTemplate {
  std::vector<double> x_lines;
  std::vector<double> y_lines;
};

/// N x N cells with alternating diagonals. Optional explicit cell lines (N + 1
/// per axis) replace the uniform spacing of the bounding box.
struct UnionJackTemplate {
  int cells = 8;
  std::vector<double> x_lines;
  std::vector<double> y_lines;
};

struct FileTemplate {
  std::filesystem::path path;
};

/// Raw connectivity plus the optional sections of the mesh file format.
struct MeshData {
  std::vector<Point2> vertices;
  std::vector<TriangleVertices> triangles;
  std::vector<std::pair<Index, double>> singular;
  std::vector<EdgeVertices> fracture_edges;
};

/// Level-0 construction recipes:
///  - GridTemplate: tensor grid whose cells are split into four by both diagonals
///    (structured-conforming; fractures must run along grid lines or cell diagonals);
///  - UnionJackTemplate: N x N cells with alternating diagonals, fractures cross elements;
///  - FileTemplate / MeshData: explicit connectivity.
using MeshTemplate = std::variant<GridTemplate, UnionJackTemplate, FileTemplate, MeshData>;

Mesh build_initial_mesh(const ProblemSpec& spec, const MeshTemplate& recipe);

enum class ViolationKind {
  NotCounterclockwise,
  NonConformingEdge,
  SingularPointNotAVertex,
  TwoSingularPointsInOneTriangle,
  KappaOutOfRange,
  FractureNotCovered,
  FractureCrossesTriangle,
  TriangleCountMismatch,
  BoundaryMarkMismatch,
  BrokenLineage,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::vector<Violation> validate(const Mesh& mesh, const ProblemSpec& spec);

struct AncestorLocation {
  Index triangle = 0;
  Barycentric barycentric{};
};

/// Maps a point given in a level-`level_from` triangle to the level-`level_to`
/// triangle containing it, following parent links.
AncestorLocation locate_in_ancestor(std::span<const Mesh> meshes, int level_from, Index triangle,
                                    const Barycentric& barycentric, int level_to);

double min_angle(const Mesh& mesh);

MeshData read_mesh(std::istream& in);
MeshData read_mesh_file(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::filesystem::path& path, const Mesh& mesh);

}  // namespace gradfem
