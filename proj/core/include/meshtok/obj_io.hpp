#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "meshtok/mesh.hpp"

namespace meshtok {

/// Parse Wavefront OBJ text. Only `v` and `f` records are read; polygons are
/// fan-triangulated from their first corner, `a/b/c` corners keep only the
/// vertex index, negative indices count back from the latest vertex.
/// Triangles that repeat a vertex index are skipped.
///
/// Throws ParseError (with a 1-based line number) on a non-numeric vertex,
/// a face with fewer than 3 corners, or an index out of range.
RawMesh parse_obj(std::string_view text);

RawMesh read_obj(const std::filesystem::path& path);

/// `v x y z` with integer lattice coordinates and 1-based `f i j k`.
std::string format_obj(const QuantizedMesh& mesh);
std::string format_obj(const RawMesh& mesh);

void write_obj(const std::filesystem::path& path, const QuantizedMesh& mesh);
void write_obj(const std::filesystem::path& path, const RawMesh& mesh);

/// Whole-file helpers shared by the I/O modules.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace meshtok
