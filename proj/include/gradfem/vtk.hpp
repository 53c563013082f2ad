#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "gradfem/fem.hpp"

namespace gradfem {

/// Legacy ASCII unstructured grid with one point scalar. P2 elements are written
/// as four linear sub-triangles over vertex and edge-midpoint dofs.
void write_vtk(std::ostream& out, const FeFunction& f, std::string_view field_name = "u");
void write_vtk_file(const std::filesystem::path& path, const FeFunction& f, std::string_view field_name = "u");

}  // namespace gradfem
