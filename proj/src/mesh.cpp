#include "gradfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "gradfem/error.hpp"

namespace gradfem {

namespace {

constexpr double kMatchTol = 1e-12;

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::string point_str(Point2 p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

double polygon_area2(std::span<const Point2> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return a;
}

struct Box {
  double x0, x1, y0, y1;
};

Box rectangle_of(const ProblemSpec& spec, const char* what) {
  if (spec.domain.size() < 3) throw Error(ErrorKind::InvalidArgument, "domain needs at least 3 vertices");
  Box b{spec.domain[0].x, spec.domain[0].x, spec.domain[0].y, spec.domain[0].y};
  for (const auto& p : spec.domain) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  const double box_area = (b.x1 - b.x0) * (b.y1 - b.y0);
  if (std::abs(0.5 * polygon_area2(spec.domain) - box_area) > 1e-12 * box_area) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " template requires a rectangular domain");
  }
  return b;
}

MeshData grid_mesh(const ProblemSpec& spec, const GridTemplate& g) {
  const Box box = rectangle_of(spec, "grid");
  const auto& xs = g.x_lines;
  const auto& ys = g.y_lines;
  if (xs.size() < 2 || ys.size() < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two lines per axis");
  if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()) ||
      std::adjacent_find(xs.begin(), xs.end()) != xs.end() ||
      std::adjacent_find(ys.begin(), ys.end()) != ys.end()) {
    throw Error(ErrorKind::InvalidArgument, "grid lines must be strictly increasing");
  }
  if (std::abs(xs.front() - box.x0) > kMatchTol || std::abs(xs.back() - box.x1) > kMatchTol ||
      std::abs(ys.front() - box.y0) > kMatchTol || std::abs(ys.back() - box.y1) > kMatchTol) {
    throw Error(ErrorKind::InvalidArgument, "grid lines must span the domain");
  }
  const auto nx = static_cast<Index>(xs.size());
  const auto ny = static_cast<Index>(ys.size());
  MeshData d;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) d.vertices.push_back({xs[i], ys[j]});
  auto node = [nx](Index i, Index j) { return j * nx + i; };
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      const auto c = static_cast<Index>(d.vertices.size());
      d.vertices.push_back({0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])});
      const Index a = node(i, j), b = node(i + 1, j), e = node(i + 1, j + 1), f = node(i, j + 1);
      d.triangles.push_back({a, b, c});
      d.triangles.push_back({b, e, c});
      d.triangles.push_back({e, f, c});
      d.triangles.push_back({f, a, c});
    }
  }
  return d;
}

MeshData union_jack_mesh(const ProblemSpec& spec, const UnionJackTemplate& u) {
  const Box box = rectangle_of(spec, "union-jack");
  if (u.cells < 1) throw Error(ErrorKind::InvalidArgument, "union-jack needs at least one cell");
  if (std::abs((box.x1 - box.x0) - (box.y1 - box.y0)) > kMatchTol) {
    throw Error(ErrorKind::InvalidArgument, "union-jack template requires a square domain");
  }
  const Index n = u.cells;
  auto lines = [&](const std::vector<double>& given, double lo, double hi) {
    if (given.empty()) {
      std::vector<double> out(n + 1);
      for (Index i = 0; i <= n; ++i) out[i] = i == n ? hi : lo + i * (hi - lo) / n;
      return out;
    }
    if (given.size() != static_cast<std::size_t>(n) + 1 || std::abs(given.front() - lo) > kMatchTol ||
        std::abs(given.back() - hi) > kMatchTol ||
        std::adjacent_find(given.begin(), given.end(), std::greater_equal<>()) != given.end()) {
      throw Error(ErrorKind::InvalidArgument, "union-jack lines must be N+1 increasing values spanning the domain");
    }
    return given;
  };
  const auto xs = lines(u.x_lines, box.x0, box.x1);
  const auto ys = lines(u.y_lines, box.y0, box.y1);
  MeshData d;
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i) d.vertices.push_back({xs[i], ys[j]});
  auto node = [n](Index i, Index j) { return j * (n + 1) + i; };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index a = node(i, j), b = node(i + 1, j), c = node(i + 1, j + 1), e = node(i, j + 1);
      if ((i + j) % 2 == 0) {
        d.triangles.push_back({a, b, c});
        d.triangles.push_back({a, c, e});
      } else {
        d.triangles.push_back({a, b, e});
        d.triangles.push_back({b, c, e});
      }
    }
  }
  return d;
}

void mark_boundary(Mesh& mesh) {
  const EdgeTable edges = build_edge_table(mesh);
  mesh.on_boundary.assign(mesh.vertices.size(), 0);
  for (std::size_t e = 0; e < edges.ends.size(); ++e) {
    if (edges.incidence[e] == 1) {
      mesh.on_boundary[edges.ends[e][0]] = 1;
      mesh.on_boundary[edges.ends[e][1]] = 1;
    }
  }
}

Index nearest_vertex(const Mesh& mesh, Point2 p, double tol) {
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const auto& q = mesh.vertices[v];
    if (std::abs(q.x - p.x) <= tol && std::abs(q.y - p.y) <= tol) return static_cast<Index>(v);
  }
  return -1;
}

// Summed length of fracture edges lying on s.
double covered_length(const Mesh& mesh, const Segment2& s) {
  double total = 0.0;
  for (const auto& e : mesh.fracture_edges) {
    const Point2 a = mesh.vertices[e[0]];
    const Point2 b = mesh.vertices[e[1]];
    if (point_on_segment(a, s) && point_on_segment(b, s)) total += distance(a, b);
  }
  return total;
}

bool edge_on_some_fracture(const Mesh& mesh, const EdgeVertices& e, std::span<const Segment2> fractures) {
  const Point2 a = mesh.vertices[e[0]];
  const Point2 b = mesh.vertices[e[1]];
  return std::any_of(fractures.begin(), fractures.end(),
                     [&](const Segment2& s) { return point_on_segment(a, s) && point_on_segment(b, s); });
}

}  // namespace

bool point_on_polygon_boundary(std::span<const Point2> polygon, Point2 p) {
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    if (point_on_segment(p, {polygon[i], polygon[(i + 1) % polygon.size()]})) return true;
  }
  return false;
}

namespace {

bool point_strictly_inside(std::span<const Point2> polygon, Point2 p) {
  if (point_on_polygon_boundary(polygon, p)) return false;
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

}  // namespace

void check_problem(const ProblemSpec& spec, bool require_endpoint_marks) {
  if (spec.domain.size() < 3) throw Error(ErrorKind::InvalidArgument, "domain needs at least 3 vertices");
  if (polygon_area2(spec.domain) <= 0) {
    throw Error(ErrorKind::InvalidArgument, "domain polygon must be counterclockwise");
  }
  if (spec.degree != 1 && spec.degree != 2) {
    throw Error(ErrorKind::UnsupportedDegree, "degree " + std::to_string(spec.degree));
  }
  if (spec.refinements < 0) throw Error(ErrorKind::InvalidArgument, "refinements must be >= 0");
  for (const auto& sp : spec.singular_points) {
    if (!(sp.kappa > 0.0 && sp.kappa <= 0.5)) {
      std::ostringstream os;
      os << "kappa " << sp.kappa << " at " << point_str(sp.at) << " is outside (0, 0.5]";
      throw Error(ErrorKind::KappaOutOfRange, os.str());
    }
  }
  for (const auto& f : spec.fractures) {
    if (f.a == f.b) throw Error(ErrorKind::InvalidArgument, "fracture has zero length");
    for (Point2 end : {f.a, f.b}) {
      // Fractures touching the boundary are not supported.
      if (!point_strictly_inside(spec.domain, end)) {
        throw Error(ErrorKind::InvalidArgument,
                    "fracture endpoint " + point_str(end) + " must lie strictly inside the domain");
      }
      if (require_endpoint_marks) {
        const bool listed = std::any_of(spec.singular_points.begin(), spec.singular_points.end(), [&](const auto& sp) {
          return std::abs(sp.at.x - end.x) <= kMatchTol && std::abs(sp.at.y - end.y) <= kMatchTol;
        });
        if (!listed) {
          throw Error(ErrorKind::InvalidArgument, "fracture endpoint " + point_str(end) + " is not a singular point");
        }
      }
    }
  }
}

double largest_interior_angle(const ProblemSpec& spec) {
  const auto& poly = spec.domain;
  const std::size_t n = poly.size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 u = poly[i] - poly[(i + n - 1) % n];
    const Point2 v = poly[(i + 1) % n] - poly[i];
    const double turn = std::atan2(cross(u, v), dot(u, v));
    best = std::max(best, std::numbers::pi - turn);
  }
  return best;
}

std::vector<double> Mesh::kappa_per_vertex() const {
  std::vector<double> k(vertices.size(), 0.0);
  for (const auto& s : singular_vertices) k[s.vertex] = s.kappa;
  return k;
}

Index EdgeTable::find(Index a, Index b) const {
  const EdgeVertices key = a < b ? EdgeVertices{a, b} : EdgeVertices{b, a};
  const auto it = std::lower_bound(ends.begin(), ends.end(), key);
  if (it == ends.end() || *it != key) return -1;
  return static_cast<Index>(it - ends.begin());
}

EdgeTable build_edge_table(const Mesh& mesh) {
  const std::size_t nt = mesh.triangles.size();
  std::vector<std::pair<std::uint64_t, std::uint32_t>> slots;
  slots.reserve(3 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      slots.emplace_back(edge_key(tri[k], tri[(k + 1) % 3]), static_cast<std::uint32_t>(3 * t + k));
    }
  }
  std::sort(slots.begin(), slots.end());

  EdgeTable table;
  table.of_triangle.resize(nt);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i == 0 || slots[i].first != slots[i - 1].first) {
      const auto key = slots[i].first;
      table.ends.push_back({static_cast<Index>(key >> 32), static_cast<Index>(key & 0xffffffffu)});
      table.incidence.push_back(0);
    }
    const auto id = static_cast<Index>(table.ends.size() - 1);
    ++table.incidence.back();
    table.of_triangle[slots[i].second / 3][slots[i].second % 3] = id;
  }
  return table;
}

Mesh build_initial_mesh(const ProblemSpec& spec, const MeshTemplate& recipe) {
  const bool crossing = std::holds_alternative<UnionJackTemplate>(recipe);
  check_problem(spec, !crossing);

  MeshData data = std::visit(
      [&](const auto& r) -> MeshData {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GridTemplate>) {
          return grid_mesh(spec, r);
        } else if constexpr (std::is_same_v<T, UnionJackTemplate>) {
          return union_jack_mesh(spec, r);
        } else if constexpr (std::is_same_v<T, FileTemplate>) {
          return read_mesh_file(r.path);
        } else {
          return r;
        }
      },
      recipe);

  Mesh mesh;
  mesh.vertices = std::move(data.vertices);
  mesh.triangles = std::move(data.triangles);
  mesh.base_triangle_count = mesh.triangles.size();
  if (mesh.triangles.empty()) throw Error(ErrorKind::InvalidMesh, "mesh has no triangles");
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (Index v : mesh.triangles[t]) {
      if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size()) {
        throw Error(ErrorKind::InvalidMesh, "triangle " + std::to_string(t) + " references a missing vertex");
      }
    }
    const auto c = mesh.corners(t);
    if (orient2d(c[0], c[1], c[2]) != 1) {
      throw Error(ErrorKind::InvalidMesh, "triangle " + std::to_string(t) + " is not counterclockwise");
    }
  }
  mark_boundary(mesh);

  if (crossing) {
    mesh.fracture_mode = FractureMode::Crossing;
    return mesh;
  }

  // Singular points: configured points take precedence over marks stored in a mesh file.
  std::vector<SingularVertex> marks;
  if (!spec.singular_points.empty()) {
    for (const auto& sp : spec.singular_points) {
      const Index v = nearest_vertex(mesh, sp.at, kMatchTol);
      if (v < 0) {
        throw Error(ErrorKind::SingularPointNotAVertex, "no mesh vertex at " + point_str(sp.at));
      }
      mesh.vertices[v] = sp.at;
      marks.push_back({v, sp.kappa});
    }
  } else {
    for (const auto& [v, k] : data.singular) {
      if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size()) {
        throw Error(ErrorKind::InvalidMesh, "singular mark references a missing vertex");
      }
      marks.push_back({v, k});
    }
  }
  std::sort(marks.begin(), marks.end(), [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
  marks.erase(std::unique(marks.begin(), marks.end(), [](const auto& a, const auto& b) { return a.vertex == b.vertex; }),
              marks.end());
  mesh.singular_vertices = std::move(marks);

  const auto kappa = mesh.kappa_per_vertex();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    int count = 0;
    for (Index v : mesh.triangles[t]) count += kappa[v] > 0 ? 1 : 0;
    if (count > 1) {
      throw Error(ErrorKind::TwoSingularPointsInOneTriangle, "triangle " + std::to_string(t));
    }
  }

  const EdgeTable edges = build_edge_table(mesh);
  if (!data.fracture_edges.empty()) {
    for (auto e : data.fracture_edges) {
      if (edges.find(e[0], e[1]) < 0) {
        throw Error(ErrorKind::InvalidMesh, "fracture_edge " + std::to_string(e[0]) + " " + std::to_string(e[1]) +
                                                " is not a mesh edge");
      }
      if (e[0] > e[1]) std::swap(e[0], e[1]);
      mesh.fracture_edges.push_back(e);
    }
  } else {
    for (const auto& e : edges.ends) {
      if (edge_on_some_fracture(mesh, e, spec.fractures)) mesh.fracture_edges.push_back(e);
    }
  }
  std::sort(mesh.fracture_edges.begin(), mesh.fracture_edges.end());
  mesh.fracture_edges.erase(std::unique(mesh.fracture_edges.begin(), mesh.fracture_edges.end()),
                            mesh.fracture_edges.end());
  for (const auto& s : spec.fractures) {
    const double covered = covered_length(mesh, s);
    if (std::abs(covered - length(s)) > 1e-12 * length(s)) {
      throw Error(ErrorKind::FractureNotRepresentable,
                  "fracture " + point_str(s.a) + "-" + point_str(s.b) + " is not a union of mesh edges");
    }
  }
  return mesh;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NotCounterclockwise: return "NotCounterclockwise";
    case ViolationKind::NonConformingEdge: return "NonConformingEdge";
    case ViolationKind::SingularPointNotAVertex: return "SingularPointNotAVertex";
    case ViolationKind::TwoSingularPointsInOneTriangle: return "TwoSingularPointsInOneTriangle";
    case ViolationKind::KappaOutOfRange: return "KappaOutOfRange";
    case ViolationKind::FractureNotCovered: return "FractureNotCovered";
    case ViolationKind::FractureCrossesTriangle: return "FractureCrossesTriangle";
    case ViolationKind::TriangleCountMismatch: return "TriangleCountMismatch";
    case ViolationKind::BoundaryMarkMismatch: return "BoundaryMarkMismatch";
    case ViolationKind::BrokenLineage: return "BrokenLineage";
  }
  return "Unknown";
}

std::vector<Violation> validate(const Mesh& mesh, const ProblemSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string msg) { out.push_back({k, std::move(msg)}); };

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto c = mesh.corners(t);
    if (orient2d(c[0], c[1], c[2]) != 1) add(ViolationKind::NotCounterclockwise, "triangle " + std::to_string(t));
  }

  const EdgeTable edges = build_edge_table(mesh);
  for (std::size_t e = 0; e < edges.ends.size(); ++e) {
    const auto [a, b] = edges.ends[e];
    if (edges.incidence[e] > 2) {
      add(ViolationKind::NonConformingEdge, "edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                " is shared by more than two triangles");
    } else if (edges.incidence[e] == 1) {
      // A single-sided edge away from the domain boundary means a hanging node.
      const Point2 mid = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
      if (!point_on_polygon_boundary(spec.domain, mesh.vertices[a]) ||
          !point_on_polygon_boundary(spec.domain, mesh.vertices[b]) ||
          !point_on_polygon_boundary(spec.domain, mid)) {
        add(ViolationKind::NonConformingEdge,
            "edge " + std::to_string(a) + "-" + std::to_string(b) + " has one side but is interior");
      }
    }
  }

  if (mesh.on_boundary.size() != mesh.vertices.size()) {
    add(ViolationKind::BoundaryMarkMismatch, "boundary marks missing");
  } else {
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
      const bool geometric = point_on_polygon_boundary(spec.domain, mesh.vertices[v]);
      if (geometric != (mesh.on_boundary[v] != 0)) {
        add(ViolationKind::BoundaryMarkMismatch, "vertex " + std::to_string(v));
      }
    }
  }

  if (mesh.base_triangle_count == 0 ||
      mesh.triangles.size() != mesh.base_triangle_count * (std::size_t{1} << (2 * mesh.level))) {
    add(ViolationKind::TriangleCountMismatch, std::to_string(mesh.triangles.size()) + " triangles at level " +
                                                  std::to_string(mesh.level));
  }
  if (mesh.level > 0 && mesh.parent_of_triangle.size() != mesh.triangles.size()) {
    add(ViolationKind::BrokenLineage, "parent links missing");
  }

  if (mesh.fracture_mode == FractureMode::Crossing) return out;

  for (const auto& s : mesh.singular_vertices) {
    if (!(s.kappa > 0.0 && s.kappa <= 0.5)) {
      add(ViolationKind::KappaOutOfRange, "vertex " + std::to_string(s.vertex));
    }
  }
  for (const auto& sp : spec.singular_points) {
    const bool found = std::any_of(mesh.singular_vertices.begin(), mesh.singular_vertices.end(), [&](const auto& s) {
      return distance(mesh.vertices[s.vertex], sp.at) <= kMatchTol;
    });
    if (!found) add(ViolationKind::SingularPointNotAVertex, "singular point " + point_str(sp.at));
  }
  const auto kappa = mesh.kappa_per_vertex();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    int count = 0;
    for (Index v : mesh.triangles[t]) count += kappa[v] > 0 ? 1 : 0;
    if (count > 1) add(ViolationKind::TwoSingularPointsInOneTriangle, "triangle " + std::to_string(t));
  }

  for (const auto& e : mesh.fracture_edges) {
    if (!edge_on_some_fracture(mesh, e, spec.fractures)) {
      add(ViolationKind::FractureNotCovered,
          "fracture edge " + std::to_string(e[0]) + "-" + std::to_string(e[1]) + " is off every fracture");
    }
  }
  for (const auto& s : spec.fractures) {
    const double covered = covered_length(mesh, s);
    if (std::abs(covered - length(s)) > 1e-12 * length(s)) {
      add(ViolationKind::FractureNotCovered, "fracture " + point_str(s.a) + "-" + point_str(s.b));
    }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto c = mesh.corners(t);
      const auto piece = clip_segment_to_triangle(s, c);
      if (!piece) continue;
      // Overlap is allowed only along a triangle edge.
      bool along_edge = false;
      for (int k = 0; k < 3; ++k) {
        const Segment2 edge{c[k], c[(k + 1) % 3]};
        if (on_line_of(*piece, edge)) along_edge = true;
      }
      if (!along_edge) {
        add(ViolationKind::FractureCrossesTriangle, "triangle " + std::to_string(t));
      }
    }
  }
  return out;
}

AncestorLocation locate_in_ancestor(std::span<const Mesh> meshes, int level_from, Index triangle,
                                    const Barycentric& barycentric, int level_to) {
  if (level_from < 0 || static_cast<std::size_t>(level_from) >= meshes.size() || level_to < 0 ||
      level_to > level_from) {
    throw Error(ErrorKind::InvalidArgument, "bad level range");
  }
  const Mesh& start = meshes[level_from];
  if (triangle < 0 || static_cast<std::size_t>(triangle) >= start.triangles.size()) {
    throw Error(ErrorKind::InvalidArgument, "triangle index out of range");
  }
  const Point2 x = from_barycentric(start.corners(triangle), barycentric);
  AncestorLocation loc{triangle, barycentric};
  for (int lvl = level_from; lvl > level_to; --lvl) {
    const Mesh& fine = meshes[lvl];
    const Mesh& coarse = meshes[lvl - 1];
    if (fine.level != coarse.level + 1 || fine.parent_of_triangle.size() != fine.triangles.size()) {
      throw Error(ErrorKind::BrokenLineage, "level " + std::to_string(lvl) + " has no parent links");
    }
    const Index parent = fine.parent_of_triangle[loc.triangle];
    if (parent < 0 || static_cast<std::size_t>(parent) >= coarse.triangles.size()) {
      throw Error(ErrorKind::BrokenLineage, "parent index out of range");
    }
    const auto tri = coarse.corners(parent);
    const auto lambda = barycentric_of(tri, x);
    if (lambda[0] < -1e-9 || lambda[1] < -1e-9 || lambda[2] < -1e-9) {
      throw Error(ErrorKind::BrokenLineage, "point lies outside its recorded parent");
    }
    loc = {parent, lambda};
  }
  return loc;
}

double min_angle(const Mesh& mesh) {
  double best = std::numbers::pi;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto c = mesh.corners(t);
    for (int k = 0; k < 3; ++k) best = std::min(best, angle_at(c[(k + 2) % 3], c[k], c[(k + 1) % 3]));
  }
  return best;
}

}  // namespace gradfem
