#include "gradfem/fem.hpp"

#include <algorithm>
#include <string>

#include "gradfem/error.hpp"

namespace gradfem {

int local_dof_count(int degree) {
  switch (degree) {
    case 1: return 3;
    case 2: return 6;
    default: throw Error(ErrorKind::UnsupportedDegree, "degree " + std::to_string(degree));
  }
}

ShapeSet shape_values_and_gradients(int degree, const Barycentric& l) {
  ShapeSet s;
  s.count = local_dof_count(degree);
  // d/dxi = d/dl1 - d/dl0, d/deta = d/dl2 - d/dl0
  auto ref = [](double d0, double d1, double d2) { return Point2{d1 - d0, d2 - d0}; };
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) s.value[i] = l[i];
    s.gradient[0] = ref(1, 0, 0);
    s.gradient[1] = ref(0, 1, 0);
    s.gradient[2] = ref(0, 0, 1);
    return s;
  }
  for (int i = 0; i < 3; ++i) {
    s.value[i] = l[i] * (2.0 * l[i] - 1.0);
    std::array<double, 3> d{};
    d[i] = 4.0 * l[i] - 1.0;
    s.gradient[i] = ref(d[0], d[1], d[2]);
  }
  for (int k = 0; k < 3; ++k) {
    const int i = k;
    const int j = (k + 1) % 3;
    s.value[3 + k] = 4.0 * l[i] * l[j];
    std::array<double, 3> d{};
    d[i] = 4.0 * l[j];
    d[j] = 4.0 * l[i];
    s.gradient[3 + k] = ref(d[0], d[1], d[2]);
  }
  return s;
}

ElementMap ElementMap::of(const Triangle2& tri) {
  const Point2 e1 = tri[1] - tri[0];
  const Point2 e2 = tri[2] - tri[0];
  ElementMap m;
  m.origin = tri[0];
  m.det = e1.x * e2.y - e2.x * e1.y;
  m.inv_t_row0 = {e2.y / m.det, -e1.y / m.det};
  m.inv_t_row1 = {-e2.x / m.det, e1.x / m.det};
  return m;
}

DofMap build_dofmap(std::shared_ptr<const Mesh> mesh, int degree) {
  DofMap d;
  d.degree = degree;
  const int local = local_dof_count(degree);
  d.edges = build_edge_table(*mesh);
  const std::size_t nv = mesh->vertices.size();
  d.dof_count = degree == 1 ? nv : nv + d.edges.ends.size();

  d.coordinates = mesh->vertices;
  d.on_boundary = mesh->on_boundary;
  if (degree == 2) {
    d.coordinates.reserve(d.dof_count);
    d.on_boundary.reserve(d.dof_count);
    for (std::size_t e = 0; e < d.edges.ends.size(); ++e) {
      const auto [a, b] = d.edges.ends[e];
      d.coordinates.push_back(0.5 * (mesh->vertices[a] + mesh->vertices[b]));
      d.on_boundary.push_back(d.edges.incidence[e] == 1 ? 1 : 0);
    }
  }
  for (std::size_t i = 0; i < d.dof_count; ++i) {
    if (d.on_boundary[i]) d.boundary_dofs.push_back(static_cast<Index>(i));
  }

  d.cell_dofs.resize(mesh->triangles.size());
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    auto& cd = d.cell_dofs[t];
    cd.fill(-1);
    for (int k = 0; k < 3; ++k) cd[k] = mesh->triangles[t][k];
    if (local == 6) {
      for (int k = 0; k < 3; ++k) cd[3 + k] = static_cast<Index>(nv) + d.edges.of_triangle[t][k];
    }
  }
  d.mesh = std::move(mesh);
  return d;
}

FeFunction interpolate(std::shared_ptr<const DofMap> dofs, const std::function<double(Point2)>& g) {
  FeFunction f;
  f.coefficients.resize(dofs->dof_count);
  for (std::size_t i = 0; i < dofs->dof_count; ++i) f.coefficients[i] = g(dofs->coordinates[i]);
  f.dofs = std::move(dofs);
  return f;
}

PointValue evaluate(const FeFunction& f, Index triangle, const Barycentric& lambda) {
  const DofMap& d = *f.dofs;
  const auto shape = shape_values_and_gradients(d.degree, lambda);
  const auto map = ElementMap::of(d.mesh->corners(triangle));
  const auto& cd = d.cell_dofs[triangle];
  PointValue out;
  Point2 ref{};
  for (int i = 0; i < shape.count; ++i) {
    const double c = f.coefficients[cd[i]];
    out.value += c * shape.value[i];
    ref = ref + c * shape.gradient[i];
  }
  out.gradient = map.physical_gradient(ref);
  return out;
}

namespace {

// Shape data at the quadrature points of the triangle rule, shared by all elements.
std::vector<ShapeSet> tabulate(int degree) {
  std::vector<ShapeSet> table;
  for (const auto& p : triangle_rule().points) table.push_back(shape_values_and_gradients(degree, p));
  return table;
}

void element_stiffness_into(const std::vector<ShapeSet>& table, const Triangle2& tri, std::span<double> out) {
  const auto& rule = triangle_rule();
  const auto map = ElementMap::of(tri);
  if (!(map.det > 0.0)) throw Error(ErrorKind::DegenerateElement, "non-positive Jacobian");
  const int n = table.front().count;
  std::fill(out.begin(), out.end(), 0.0);
  std::array<Point2, kMaxLocalDofs> grad;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * map.det;
    for (int i = 0; i < n; ++i) grad[i] = map.physical_gradient(table[q].gradient[i]);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) out[i * n + j] += w * dot(grad[i], grad[j]);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) out[i * n + j] = out[j * n + i];
  }
}

}  // namespace

std::vector<double> element_stiffness(int degree, const Triangle2& tri) {
  const int n = local_dof_count(degree);
  std::vector<double> k(n * n);
  element_stiffness_into(tabulate(degree), tri, k);
  return k;
}

CsrMatrix assemble_stiffness(const DofMap& dofs) {
  const int n = dofs.local_count();
  const Mesh& mesh = *dofs.mesh;
  std::vector<std::uint64_t> entries;
  entries.reserve(mesh.triangles.size() * n * n);
  for (const auto& cd : dofs.cell_dofs) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        entries.push_back(pack_entry(static_cast<std::uint32_t>(cd[i]), static_cast<std::uint32_t>(cd[j])));
  }
  CsrMatrix a = csr_pattern(dofs.dof_count, std::move(entries));

  const auto table = tabulate(dofs.degree);
  std::vector<double> local(n * n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    try {
      element_stiffness_into(table, mesh.corners(t), local);
    } catch (const Error&) {
      throw Error(ErrorKind::DegenerateElement, "triangle " + std::to_string(t) + " has a non-positive Jacobian");
    }
    const auto& cd = dofs.cell_dofs[t];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a.values[a.find(cd[i], cd[j])] += local[i * n + j];
    }
  }
  return a;
}

std::vector<double> assemble_line_load(const DofMap& dofs, std::span<const Segment2> fractures) {
  if (dofs.mesh->fracture_mode == FractureMode::Conforming) return assemble_line_load_conforming(dofs);
  return assemble_line_load_clipped(dofs, fractures);
}

std::vector<double> assemble_line_load_conforming(const DofMap& dofs) {
  const Mesh& mesh = *dofs.mesh;
  const auto& rule = segment_rule();
  std::vector<double> load(dofs.dof_count, 0.0);
  for (const auto& [a, b] : mesh.fracture_edges) {
    const double len = distance(mesh.vertices[a], mesh.vertices[b]);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q] * len;
      if (dofs.degree == 1) {
        load[a] += w * (1.0 - s);
        load[b] += w * s;
      } else {
        const Index mid = static_cast<Index>(mesh.vertices.size()) + dofs.edges.find(a, b);
        load[a] += w * (1.0 - s) * (1.0 - 2.0 * s);
        load[b] += w * s * (2.0 * s - 1.0);
        load[mid] += w * 4.0 * s * (1.0 - s);
      }
    }
  }
  return load;
}

std::vector<double> assemble_line_load_clipped(const DofMap& dofs, std::span<const Segment2> fractures) {
  const Mesh& mesh = *dofs.mesh;
  const auto& rule = segment_rule();
  std::vector<double> load(dofs.dof_count, 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto tri = mesh.corners(t);
    const auto& cd = dofs.cell_dofs[t];
    for (const auto& s : fractures) {
      const auto piece = clip_segment_to_triangle(s, tri);
      if (!piece) continue;
      bool skip = false;
      for (int k = 0; k < 3; ++k) {
        const Segment2 edge{tri[k], tri[(k + 1) % 3]};
        if (on_line_of(*piece, edge)) {
          // The neighbour across this edge sees the same piece; keep the left side only.
          skip = orient2d(s.a, s.b, tri[(k + 2) % 3]) < 0;
          break;
        }
      }
      if (skip) continue;
      const double len = length(*piece);
      const Point2 dir = piece->b - piece->a;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point2 x = piece->a + rule.points[q] * dir;
        const auto shape = shape_values_and_gradients(dofs.degree, barycentric_of(tri, x));
        const double w = rule.weights[q] * len;
        for (int i = 0; i < shape.count; ++i) load[cd[i]] += w * shape.value[i];
      }
    }
  }
  return load;
}

void apply_dirichlet(SparseSystem& system, std::span<const Index> boundary_dofs) {
  CsrMatrix& a = system.matrix;
  std::vector<std::uint8_t> fixed(a.rows, 0);
  for (Index i : boundary_dofs) {
    if (i < 0 || static_cast<std::size_t>(i) >= a.rows) throw Error(ErrorKind::DimensionMismatch, "boundary dof");
    fixed[i] = 1;
  }
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(a.columns[k]);
      if (fixed[i] || fixed[j]) a.values[k] = (i == j) ? 1.0 : 0.0;
    }
  }
  for (std::size_t i = 0; i < a.rows; ++i) {
    if (!fixed[i]) continue;
    system.load[i] = 0.0;
    if (a.find(i, i) < 0) throw Error(ErrorKind::DimensionMismatch, "missing diagonal entry");
  }
}

}  // namespace gradfem
