#include "gradfem/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gradfem/error.hpp"

namespace gradfem {

std::pair<Mesh, RefinementRecord> graded_refine(const Mesh& mesh) {
  const auto kappa = mesh.kappa_per_vertex();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int count = (kappa[tri[0]] > 0) + (kappa[tri[1]] > 0) + (kappa[tri[2]] > 0);
    if (count > 1) {
      throw Error(ErrorKind::InvalidMesh, "triangle " + std::to_string(t) + " holds more than one singular vertex");
    }
  }

  const EdgeTable edges = build_edge_table(mesh);
  const auto nv = static_cast<Index>(mesh.vertices.size());

  Mesh fine;
  fine.level = mesh.level + 1;
  fine.base_triangle_count = mesh.base_triangle_count;
  fine.fracture_mode = mesh.fracture_mode;
  fine.singular_vertices = mesh.singular_vertices;
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(mesh.vertices.size() + edges.ends.size());
  fine.on_boundary = mesh.on_boundary;
  fine.on_boundary.reserve(fine.vertices.capacity());

  RefinementRecord record;
  record.splits.reserve(edges.ends.size());
  for (std::size_t e = 0; e < edges.ends.size(); ++e) {
    const auto [a, b] = edges.ends[e];
    const Point2 pa = mesh.vertices[a];
    const Point2 pb = mesh.vertices[b];
    EdgeSplit split{edges.ends[e], nv + static_cast<Index>(e), a, 0.5};
    Point2 r = 0.5 * (pa + pb);
    if (kappa[a] > 0 && kappa[b] > 0) {
      throw Error(ErrorKind::InvalidMesh, "edge with two singular endpoints");
    }
    if (kappa[a] > 0 && kappa[a] != 0.5) {
      split.ratio = kappa[a];
      r = pa + kappa[a] * (pb - pa);
    } else if (kappa[b] > 0 && kappa[b] != 0.5) {
      split.measured_from = b;
      split.ratio = kappa[b];
      r = pb + kappa[b] * (pa - pb);
    } else if (kappa[b] > 0) {
      split.measured_from = b;
    }
    fine.vertices.push_back(r);
    fine.on_boundary.push_back(edges.incidence[e] == 1 ? 1 : 0);
    record.splits.push_back(split);
  }

  fine.triangles.reserve(4 * mesh.triangles.size());
  fine.parent_of_triangle.reserve(4 * mesh.triangles.size());
  record.children.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& te = edges.of_triangle[t];
    int s = 0;
    for (int k = 0; k < 3; ++k) {
      if (kappa[tri[k]] > 0) s = k;
    }
    const Index w0 = tri[s], w1 = tri[(s + 1) % 3], w2 = tri[(s + 2) % 3];
    const Index n0 = nv + te[s];            // on w0-w1
    const Index n1 = nv + te[(s + 1) % 3];  // on w1-w2
    const Index n2 = nv + te[(s + 2) % 3];  // on w2-w0
    const auto first = static_cast<Index>(fine.triangles.size());
    fine.triangles.push_back({w0, n0, n2});
    fine.triangles.push_back({w1, n1, n0});
    fine.triangles.push_back({w2, n2, n1});
    fine.triangles.push_back({n0, n1, n2});
    for (int k = 0; k < 4; ++k) fine.parent_of_triangle.push_back(static_cast<Index>(t));
    record.children.push_back({first, first + 1, first + 2, first + 3});
  }

  fine.fracture_edges.reserve(2 * mesh.fracture_edges.size());
  for (const auto& fe : mesh.fracture_edges) {
    const Index id = edges.find(fe[0], fe[1]);
    if (id < 0) throw Error(ErrorKind::InvalidMesh, "fracture edge is not a mesh edge");
    const Index mid = nv + id;
    fine.fracture_edges.push_back({std::min(fe[0], mid), std::max(fe[0], mid)});
    fine.fracture_edges.push_back({std::min(fe[1], mid), std::max(fe[1], mid)});
  }
  std::sort(fine.fracture_edges.begin(), fine.fracture_edges.end());

  return {std::move(fine), std::move(record)};
}

std::vector<Mesh> refine_levels(Mesh base, int levels) {
  std::vector<Mesh> out;
  out.reserve(levels + 1);
  out.push_back(std::move(base));
  for (int i = 0; i < levels; ++i) out.push_back(graded_refine(out.back()).first);
  return out;
}

double kappa_from_theory(const KappaRequest& r) {
  if (r.degree < 1) throw Error(ErrorKind::UnsupportedDegree, "degree " + std::to_string(r.degree));
  std::ostringstream os;
  if (r.kind == SingularKind::FractureEndpoint) {
    if (!(r.exponent_a > 0.0 && r.exponent_a < 1.0)) {
      os << "grading exponent a = " << r.exponent_a << " must lie in (0, 1)";
      throw Error(ErrorKind::KappaOutOfRange, os.str());
    }
    return std::min(0.5, std::exp2(-r.degree / r.exponent_a));
  }
  if (!(r.largest_angle > 0.0 && r.largest_angle < 2.0 * std::numbers::pi)) {
    throw Error(ErrorKind::InvalidArgument, "largest interior angle must lie in (0, 2 pi)");
  }
  const double bound = std::exp2(-r.degree * r.largest_angle / std::numbers::pi);
  if (!(r.kappa > 0.0 && r.kappa <= 0.5 && r.kappa < bound)) {
    os << "kappa " << r.kappa << " must lie in (0, 0.5] and below 2^(-m*omega/pi) = " << bound;
    throw Error(ErrorKind::KappaOutOfRange, os.str());
  }
  return r.kappa;
}

}  // namespace gradfem
