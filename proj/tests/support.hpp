#pragma once

#include <cmath>
#include <filesystem>
#include <vector>

#include "gradfem/mesh.hpp"

namespace gradfem::testing {

inline std::filesystem::path source_dir() { return GRADFEM_SOURCE_DIR; }

inline std::vector<Point2> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

// Unit square with the horizontal fracture (0.25,0.5)-(0.75,0.5).
inline ProblemSpec square_problem(double kappa, int degree = 1) {
  ProblemSpec spec;
  spec.domain = unit_square();
  spec.fractures = {{{0.25, 0.5}, {0.75, 0.5}}};
  spec.singular_points = {{{0.25, 0.5}, kappa}, {{0.75, 0.5}, kappa}};
  spec.degree = degree;
  return spec;
}

// 4 x 4 cells, each split by both diagonals: 64 triangles.
inline GridTemplate quarter_grid() {
  return {{0, 0.25, 0.5, 0.75, 1}, {0, 0.25, 0.5, 0.75, 1}};
}

// One counterclockwise triangle without singular points or fractures.
inline Mesh single_triangle(Point2 a, Point2 b, Point2 c) {
  Mesh m;
  m.vertices = {a, b, c};
  m.triangles = {{0, 1, 2}};
  m.base_triangle_count = 1;
  m.on_boundary = {1, 1, 1};
  return m;
}

inline Index vertex_at(const Mesh& mesh, Point2 p) {
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (distance(mesh.vertices[v], p) < 1e-12) return static_cast<Index>(v);
  }
  return -1;
}

}  // namespace gradfem::testing
