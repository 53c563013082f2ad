#include "gradfem/vtk.hpp"

#include <fstream>
#include <ostream>

#include "gradfem/error.hpp"

namespace gradfem {

void write_vtk(std::ostream& out, const FeFunction& f, std::string_view field_name) {
  const DofMap& d = *f.dofs;
  std::vector<std::array<Index, 3>> cells;
  cells.reserve(d.cell_dofs.size() * (d.degree == 2 ? 4 : 1));
  for (const auto& cd : d.cell_dofs) {
    if (d.degree == 1) {
      cells.push_back({cd[0], cd[1], cd[2]});
    } else {
      cells.push_back({cd[0], cd[3], cd[5]});
      cells.push_back({cd[1], cd[4], cd[3]});
      cells.push_back({cd[2], cd[5], cd[4]});
      cells.push_back({cd[3], cd[4], cd[5]});
    }
  }

  const auto old_precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\n"
      << "line-source Poisson solution, degree " << d.degree << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << d.dof_count << " double\n";
  for (const auto& p : d.coordinates) out << p.x << " " << p.y << " 0\n";
  out << "CELLS " << cells.size() << " " << 4 * cells.size() << "\n";
  for (const auto& c : cells) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << cells.size() << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) out << "5\n";
  out << "POINT_DATA " << d.dof_count << "\n"
      << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : f.coefficients) out << v << "\n";
  out.precision(old_precision);
}

void write_vtk_file(const std::filesystem::path& path, const FeFunction& f, std::string_view field_name) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_vtk(out, f, field_name);
}

}  // namespace gradfem
