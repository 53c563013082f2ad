#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gradfem/geometry.hpp"
#include "gradfem/linalg.hpp"
#include "gradfem/mesh.hpp"

namespace gradfem {

// Quadrature ---------------------------------------------------------------

/// Rule on the reference triangle (0,0),(1,0),(0,1); points as barycentrics,
/// weights summing to the reference area 1/2.
struct TriangleRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
};

/// Rule on [0, 1]; weights sum to 1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Six-point symmetric rule, exact for polynomials of degree <= 4.
const TriangleRule& triangle_rule();
/// Three-point Gauss-Legendre, exact for degree <= 5.
const SegmentRule& segment_rule();

// Reference element --------------------------------------------------------

inline constexpr int kMaxLocalDofs = 6;

/// Number of local dofs of the degree-m Lagrange triangle. Throws UnsupportedDegree.
int local_dof_count(int degree);

/// Values and gradients with respect to the reference coordinates (xi, eta),
/// where barycentric = (1 - xi - eta, xi, eta). Local order: vertices, then the
/// edge midpoints of edges 0-1, 1-2, 2-0.
struct ShapeSet {
  int count = 0;
  std::array<double, kMaxLocalDofs> value{};
  std::array<Point2, kMaxLocalDofs> gradient{};
};

ShapeSet shape_values_and_gradients(int degree, const Barycentric& lambda);

/// Affine map of one triangle: physical gradients from reference ones.
struct ElementMap {
  Point2 origin;
  double det = 0.0;  // twice the area for counterclockwise triangles
  // Rows of J^{-T}.
  Point2 inv_t_row0;
  Point2 inv_t_row1;

  static ElementMap of(const Triangle2& tri);
  Point2 physical_gradient(Point2 ref) const {
    return {dot(inv_t_row0, ref), dot(inv_t_row1, ref)};
  }
};

// Degrees of freedom -------------------------------------------------------

struct DofMap {
  std::shared_ptr<const Mesh> mesh;
  int degree = 1;
  std::size_t dof_count = 0;
  std::vector<std::array<Index, kMaxLocalDofs>> cell_dofs;  // first local_dof_count(degree) used
  std::vector<Point2> coordinates;
  std::vector<std::uint8_t> on_boundary;  // per dof
  std::vector<Index> boundary_dofs;       // sorted
  EdgeTable edges;

  int local_count() const { return local_dof_count(degree); }
  std::size_t free_dof_count() const { return dof_count - boundary_dofs.size(); }
};

/// Vertex dofs first (same numbering as mesh vertices), then one dof per edge for P2.
DofMap build_dofmap(std::shared_ptr<const Mesh> mesh, int degree);

struct FeFunction {
  std::shared_ptr<const DofMap> dofs;
  std::vector<double> coefficients;
};

/// Lagrange interpolant: coefficient i = g(coordinate of dof i).
FeFunction interpolate(std::shared_ptr<const DofMap> dofs, const std::function<double(Point2)>& g);

struct PointValue {
  double value = 0.0;
  Point2 gradient;
};

PointValue evaluate(const FeFunction& f, Index triangle, const Barycentric& lambda);

// Assembly -----------------------------------------------------------------

/// Global stiffness matrix a(phi_j, phi_i) = sum_T int_T grad phi_j . grad phi_i.
/// Throws DegenerateElement for zero or negative Jacobians.
CsrMatrix assemble_stiffness(const DofMap& dofs);

/// Element stiffness matrix of one triangle (row-major, local_dof_count^2 entries).
std::vector<double> element_stiffness(int degree, const Triangle2& tri);

/// Load vector int_gamma phi_i ds. Uses the fracture edges of conforming meshes,
/// and element clipping otherwise.
std::vector<double> assemble_line_load(const DofMap& dofs, std::span<const Segment2> fractures);

/// Edge-by-edge load over mesh.fracture_edges.
std::vector<double> assemble_line_load_conforming(const DofMap& dofs);

/// Load by clipping each fracture against every triangle. A piece lying on a
/// shared edge is attributed to the triangle on the left of the fracture direction.
std::vector<double> assemble_line_load_clipped(const DofMap& dofs, std::span<const Segment2> fractures);

/// Symmetric elimination of homogeneous Dirichlet dofs: rows and columns zeroed,
/// unit diagonal, zero load.
void apply_dirichlet(SparseSystem& system, std::span<const Index> boundary_dofs);

}  // namespace gradfem
