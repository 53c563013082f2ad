#include <fstream>
#include <sstream>

#include "gradfem/error.hpp"
#include "gradfem/mesh.hpp"

namespace gradfem {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::Io, "line " + std::to_string(line) + ": " + msg);
}

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

MeshData read_mesh(std::istream& in) {
  MeshData d;
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) fail(lineno, "empty mesh file");

  std::istringstream header(line);
  std::string kv, kt;
  long nv = -1, nt = -1;
  if (!(header >> kv >> nv >> kt >> nt) || kv != "vertices" || kt != "triangles" || nv < 0 || nt < 0) {
    fail(lineno, "expected 'vertices <V> triangles <T>'");
  }

  d.vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line, lineno)) fail(lineno, "missing vertex lines");
    std::istringstream ls(line);
    Point2 p;
    if (!(ls >> p.x >> p.y)) fail(lineno, "expected 'x y'");
    d.vertices.push_back(p);
  }
  d.triangles.reserve(nt);
  for (long i = 0; i < nt; ++i) {
    if (!next_content_line(in, line, lineno)) fail(lineno, "missing triangle lines");
    std::istringstream ls(line);
    TriangleVertices t{};
    if (!(ls >> t[0] >> t[1] >> t[2])) fail(lineno, "expected 'i j k'");
    d.triangles.push_back(t);
  }
  while (next_content_line(in, line, lineno)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "singular") {
      Index v = 0;
      double k = 0;
      if (!(ls >> v >> k)) fail(lineno, "expected 'singular <idx> <kappa>'");
      d.singular.emplace_back(v, k);
    } else if (tag == "fracture_edge") {
      EdgeVertices e{};
      if (!(ls >> e[0] >> e[1])) fail(lineno, "expected 'fracture_edge <i> <j>'");
      d.fracture_edges.push_back(e);
    } else {
      fail(lineno, "unknown section '" + tag + "'");
    }
  }
  return d;
}

MeshData read_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return read_mesh(in);
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, path.string() + ": " + e.what());
  }
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out.precision(17);
  out << "vertices " << mesh.vertices.size() << " triangles " << mesh.triangles.size() << "\n";
  for (const auto& p : mesh.vertices) out << p.x << " " << p.y << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& s : mesh.singular_vertices) out << "singular " << s.vertex << " " << s.kappa << "\n";
  for (const auto& e : mesh.fracture_edges) out << "fracture_edge " << e[0] << " " << e[1] << "\n";
}

void write_mesh_file(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_mesh(out, mesh);
}

}  // namespace gradfem
