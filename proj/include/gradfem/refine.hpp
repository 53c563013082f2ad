#pragma once

#include <array>
#include <utility>
#include <vector>

#include "gradfem/mesh.hpp"

namespace gradfem {

/// Placement of the new node on one edge of the coarse mesh.
struct EdgeSplit {
  EdgeVertices edge{};   // (min, max) vertex indices in the coarse mesh
  Index new_vertex = 0;  // index in the refined mesh
  Index measured_from = 0;  // singular endpoint, or edge[0] for midpoints
  double ratio = 0.5;       // |from r| / |edge|
};

struct RefinementRecord {
  std::vector<EdgeSplit> splits;
  /// children[t] = indices of the four refined triangles of coarse triangle t:
  /// [0] the corner at the singular vertex (vertex 0 if none), [1], [2] the other
  /// corners in counterclockwise order, [3] the central triangle.
  std::vector<std::array<Index, 4>> children;
};

/// One graded refinement step. Each edge receives one new node: its midpoint, or
/// the point at distance kappa_p * |pq| from its singular endpoint p. Every
/// triangle is then split into four by joining its three edge nodes.
/// Throws InvalidMesh if a triangle holds more than one singular vertex.
std::pair<Mesh, RefinementRecord> graded_refine(const Mesh& mesh);

/// Levels 0..n, each obtained from the previous by graded_refine.
std::vector<Mesh> refine_levels(Mesh base, int levels);

struct KappaRequest {
  int degree = 1;
  SingularKind kind = SingularKind::FractureEndpoint;
  double exponent_a = 0.0;     // grading exponent, used for fracture endpoints
  double largest_angle = 0.0;  // used for domain vertices
  double kappa = 0.0;          // requested kappa, used for domain vertices
};

/// Fracture endpoints: kappa = 2^(-m/a) with 0 < a < 1.
/// Domain vertices: returns the requested kappa once it satisfies
/// kappa < 2^(-m * omega / pi). Results always lie in (0, 0.5].
/// Throws KappaOutOfRange otherwise.
double kappa_from_theory(const KappaRequest& request);

}  // namespace gradfem
