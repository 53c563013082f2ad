#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gradfem/error.hpp"
#include "gradfem/mesh.hpp"
#include "gradfem/refine.hpp"
#include "support.hpp"

using namespace gradfem;
using namespace gradfem::testing;

namespace {

bool has_violation(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no gradfem::Error thrown";
  return ErrorKind::InvalidArgument;
}

double fracture_edge_length(const Mesh& m) {
  double total = 0;
  for (const auto& e : m.fracture_edges) total += distance(m.vertices[e[0]], m.vertices[e[1]]);
  return total;
}

ProblemSpec triangle_problem(double kappa) {
  ProblemSpec spec;
  spec.domain = {{0, 0}, {1, 0}, {0.5, 1}};
  spec.fractures = {{{0.3, 0.25}, {0.7, 0.25}}};
  spec.singular_points = {{{0.3, 0.25}, kappa}, {{0.7, 0.25}, kappa}};
  spec.degree = 2;
  return spec;
}

}  // namespace

TEST(BuildInitialMesh, UnionJackCounts) {
  ProblemSpec spec = square_problem(0.5);
  const Mesh m = build_initial_mesh(spec, UnionJackTemplate{8, {}, {}});
  EXPECT_EQ(m.triangle_count(), 128u);
  EXPECT_EQ(m.vertex_count(), 81u);
  EXPECT_EQ(m.fracture_mode, FractureMode::Crossing);
  EXPECT_TRUE(m.fracture_edges.empty());
  EXPECT_TRUE(validate(m, spec).empty());
}

TEST(BuildInitialMesh, UnionJackExplicitRows) {
  ProblemSpec spec = square_problem(0.5);
  UnionJackTemplate uj{8, {}, {0, 0.1, 0.2, 0.3, 0.4, 0.55, 0.7, 0.85, 1}};
  const Mesh m = build_initial_mesh(spec, uj);
  EXPECT_EQ(m.triangle_count(), 128u);
  EXPECT_NE(vertex_at(m, {0.5, 0.55}), -1);
  EXPECT_TRUE(validate(m, spec).empty());
}

TEST(BuildInitialMesh, GradedGridCounts) {
  const ProblemSpec spec = square_problem(0.2);
  const Mesh m = build_initial_mesh(spec, quarter_grid());
  EXPECT_EQ(m.triangle_count(), 64u);
  EXPECT_EQ(m.fracture_mode, FractureMode::Conforming);
  EXPECT_EQ(m.singular_vertices.size(), 2u);
  EXPECT_EQ(m.fracture_edges.size(), 2u);
  EXPECT_NEAR(fracture_edge_length(m), 0.5, 1e-15);
  EXPECT_TRUE(validate(m, spec).empty());
}

TEST(BuildInitialMesh, TriangleFixtureCoversFracture) {
  const ProblemSpec spec = triangle_problem(0.3);
  const Mesh m = build_initial_mesh(spec, FileTemplate{source_dir() / "fixtures/triangle_one_fracture.msh"});
  EXPECT_TRUE(validate(m, spec).empty());
  EXPECT_NEAR(fracture_edge_length(m), 0.4, 1e-14);
  for (const auto& e : m.fracture_edges) {
    EXPECT_NEAR(m.vertices[e[0]].y, 0.25, 1e-15);
    EXPECT_NEAR(m.vertices[e[1]].y, 0.25, 1e-15);
  }
}

TEST(BuildInitialMesh, TwoFractureFixture) {
  ProblemSpec spec;
  spec.domain = unit_square();
  spec.fractures = {{{0.3, 0.1}, {0.3, 0.9}}, {{0.6, 0.1}, {0.9, 0.9}}};
  for (const auto& f : spec.fractures) {
    spec.singular_points.push_back({f.a, 0.2});
    spec.singular_points.push_back({f.b, 0.2});
  }
  const Mesh m = build_initial_mesh(spec, FileTemplate{source_dir() / "fixtures/two_fractures.msh"});
  EXPECT_EQ(m.singular_vertices.size(), 4u);
  EXPECT_NEAR(fracture_edge_length(m), 0.8 + std::hypot(0.3, 0.8), 1e-13);
  EXPECT_TRUE(validate(m, spec).empty());
}

TEST(BuildInitialMesh, EndpointOffTheGridThrows) {
  EXPECT_EQ(error_of([] { build_initial_mesh(square_problem(0.2), GridTemplate{{0, 0.5, 1}, {0, 0.5, 1}}); }),
            ErrorKind::SingularPointNotAVertex);
}

TEST(BuildInitialMesh, BothEndpointsInOneTriangleThrows) {
  const GridTemplate coarse{{0, 0.25, 0.75, 1}, {0, 0.5, 1}};
  EXPECT_EQ(error_of([&] { build_initial_mesh(square_problem(0.2), coarse); }),
            ErrorKind::TwoSingularPointsInOneTriangle);
}

TEST(BuildInitialMesh, ClockwiseFileTriangleThrows) {
  MeshData d;
  d.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  d.triangles = {{0, 2, 1}, {0, 2, 3}};
  ProblemSpec spec;
  spec.domain = unit_square();
  EXPECT_EQ(error_of([&] { build_initial_mesh(spec, d); }), ErrorKind::InvalidMesh);
}

TEST(CheckProblem, RejectsBadInput) {
  ProblemSpec spec = square_problem(0.7);
  EXPECT_EQ(error_of([&] { check_problem(spec, true); }), ErrorKind::KappaOutOfRange);
  spec = square_problem(0.0);
  EXPECT_EQ(error_of([&] { check_problem(spec, true); }), ErrorKind::KappaOutOfRange);
  spec = square_problem(0.2, 3);
  EXPECT_EQ(error_of([&] { check_problem(spec, true); }), ErrorKind::UnsupportedDegree);
  spec = square_problem(0.2);
  std::reverse(spec.domain.begin(), spec.domain.end());
  EXPECT_EQ(error_of([&] { check_problem(spec, true); }), ErrorKind::InvalidArgument);
  spec = square_problem(0.2);
  spec.singular_points.pop_back();
  EXPECT_EQ(error_of([&] { check_problem(spec, true); }), ErrorKind::InvalidArgument);
  EXPECT_NO_THROW(check_problem(spec, false));
}

TEST(Validate, EndpointNotAVertex) {
  const Mesh m = build_initial_mesh(square_problem(0.2), quarter_grid());
  ProblemSpec moved = square_problem(0.2);
  moved.fractures[0].a = {0.3, 0.5};
  moved.singular_points[0].at = {0.3, 0.5};
  EXPECT_TRUE(has_violation(validate(m, moved), ViolationKind::SingularPointNotAVertex));
}

TEST(Validate, TwoSingularVerticesInOneTriangle) {
  const ProblemSpec spec = square_problem(0.2);
  Mesh m = build_initial_mesh(spec, quarter_grid());
  m.singular_vertices.push_back({vertex_at(m, {0.5, 0.5}), 0.2});
  std::sort(m.singular_vertices.begin(), m.singular_vertices.end(),
            [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
  EXPECT_TRUE(has_violation(validate(m, spec), ViolationKind::TwoSingularPointsInOneTriangle));
}

TEST(Validate, FlippedTriangleAndKappa) {
  const ProblemSpec spec = square_problem(0.2);
  Mesh m = build_initial_mesh(spec, quarter_grid());
  std::swap(m.triangles[5][0], m.triangles[5][1]);
  m.singular_vertices[0].kappa = 0.6;
  const auto vs = validate(m, spec);
  EXPECT_TRUE(has_violation(vs, ViolationKind::NotCounterclockwise));
  EXPECT_TRUE(has_violation(vs, ViolationKind::KappaOutOfRange));
}

TEST(Validate, HangingNode) {
  // Two triangles sharing the edge (0,0)-(1,1), one of them split at its midpoint.
  MeshData d;
  d.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  d.triangles = {{0, 1, 2}, {0, 4, 3}, {4, 2, 3}};
  ProblemSpec spec;
  spec.domain = unit_square();
  const Mesh m = build_initial_mesh(spec, d);
  EXPECT_TRUE(has_violation(validate(m, spec), ViolationKind::NonConformingEdge));
}

TEST(Validate, MissingFractureEdge) {
  const ProblemSpec spec = square_problem(0.2);
  Mesh m = build_initial_mesh(spec, quarter_grid());
  m.fracture_edges.pop_back();
  EXPECT_TRUE(has_violation(validate(m, spec), ViolationKind::FractureNotCovered));
}

TEST(EdgeTable, EulerCount) {
  const Mesh m = build_initial_mesh(square_problem(0.2), quarter_grid());
  const EdgeTable edges = build_edge_table(m);
  EXPECT_EQ(edges.ends.size(), m.vertex_count() + m.triangle_count() - 1);
  std::size_t boundary = 0;
  for (auto c : edges.incidence) boundary += c == 1;
  EXPECT_EQ(boundary, 16u);
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto& e = edges.ends[edges.of_triangle[t][k]];
      const Index a = m.triangles[t][k], b = m.triangles[t][(k + 1) % 3];
      EXPECT_EQ(e[0], std::min(a, b));
      EXPECT_EQ(e[1], std::max(a, b));
    }
  }
}

TEST(LargestInteriorAngle, Examples) {
  ProblemSpec spec;
  spec.domain = unit_square();
  EXPECT_NEAR(largest_interior_angle(spec), std::numbers::pi / 2, 1e-15);

  spec.domain = {{0, 0}, {1, 0}, {0.5, 1}};
  EXPECT_NEAR(largest_interior_angle(spec), std::atan(2.0), 1e-14);
  EXPECT_NEAR(angle_at(spec.domain[0], spec.domain[2], spec.domain[1]), 2 * std::atan(0.5), 1e-14);
  EXPECT_LT(largest_interior_angle(spec), std::numbers::pi / 2);

  spec.domain = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  EXPECT_NEAR(largest_interior_angle(spec), 1.5 * std::numbers::pi, 1e-14);
}

TEST(LocateInAncestor, ChildCentroidLandsInsideParent) {
  const Mesh base = build_initial_mesh(square_problem(0.2), quarter_grid());
  const auto meshes = refine_levels(base, 1);
  for (std::size_t t = 0; t < meshes[1].triangle_count(); ++t) {
    const auto loc = locate_in_ancestor(meshes, 1, static_cast<Index>(t), {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0);
    EXPECT_EQ(loc.triangle, meshes[1].parent_of_triangle[t]);
    for (double l : loc.barycentric) EXPECT_GT(l, 0.0);
  }
}

TEST(LocateInAncestor, CoarseVertexKeepsUnitCoordinate) {
  const Mesh base = build_initial_mesh(square_problem(0.2), quarter_grid());
  const auto meshes = refine_levels(base, 1);
  for (std::size_t t = 0; t < meshes[1].triangle_count(); t += 4) {
    const auto loc = locate_in_ancestor(meshes, 1, static_cast<Index>(t), {1, 0, 0}, 0);
    EXPECT_NEAR(*std::max_element(loc.barycentric.begin(), loc.barycentric.end()), 1.0, 1e-14);
  }
}

TEST(LocateInAncestor, MatchesBruteForceSearch) {
  const Mesh base = build_initial_mesh(square_problem(0.2), quarter_grid());
  const auto meshes = refine_levels(base, 3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  std::uniform_int_distribution<Index> pick(0, static_cast<Index>(meshes[3].triangle_count()) - 1);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    if (a + b > 0.95) a *= 0.5, b *= 0.5;
    const Barycentric l{1 - a - b, a, b};
    const Index t = pick(rng);
    const Point2 p = from_barycentric(meshes[3].corners(t), l);
    for (int level = 0; level < 3; ++level) {
      const auto loc = locate_in_ancestor(meshes, 3, t, l, level);
      Index brute = -1;
      for (std::size_t c = 0; c < meshes[level].triangle_count(); ++c) {
        if (point_in_triangle(meshes[level].corners(c), p, 0.0)) brute = static_cast<Index>(c);
      }
      EXPECT_EQ(loc.triangle, brute);
      const Point2 q = from_barycentric(meshes[level].corners(loc.triangle), loc.barycentric);
      EXPECT_NEAR(q.x, p.x, 1e-13);
      EXPECT_NEAR(q.y, p.y, 1e-13);
    }
  }
}

TEST(LocateInAncestor, LevelZeroHasNoParents) {
  const Mesh base = build_initial_mesh(square_problem(0.2), quarter_grid());
  std::vector<Mesh> meshes{base, base};
  EXPECT_EQ(error_of([&] { locate_in_ancestor(meshes, 1, 0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0); }),
            ErrorKind::BrokenLineage);
}

TEST(MeshIo, RoundTrip) {
  const Mesh m = build_initial_mesh(square_problem(0.2), quarter_grid());
  std::stringstream buf;
  write_mesh(buf, m);
  const MeshData d = read_mesh(buf);
  EXPECT_EQ(d.vertices, m.vertices);
  EXPECT_EQ(d.triangles, m.triangles);
  EXPECT_EQ(d.fracture_edges, m.fracture_edges);
  ASSERT_EQ(d.singular.size(), 2u);
  EXPECT_EQ(d.singular[0].second, 0.2);
}

TEST(MeshIo, ReportsLineNumbers) {
  std::istringstream in("vertices 3 triangles 1\n0 0\n1 0\n0 x\n0 1 2\n");
  try {
    read_mesh(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(MinAngle, UnitTriangle) {
  EXPECT_NEAR(min_angle(single_triangle({0, 0}, {1, 0}, {0, 1})), std::numbers::pi / 4, 1e-15);
}
