#pragma once

#include <filesystem>
#include <iosfwd>

#include "helidens/mesh.hpp"

namespace helidens {

// Plain-text HDMESH format:
//
//   HDMESH 1
//   # kind helicoid            (optional metadata comments)
//   # pitch 1
//   # multigraph 1
//   v x y z u v chart
//   f i j k                    (0-based)
//
// Vertices without a chart are written with chart -1. Numbers are written
// with 17 significant digits so a write/read cycle is lossless.
void write_hdmesh(std::ostream& out, const MeshedSurface& surface);
void write_hdmesh(const std::filesystem::path& path, const MeshedSurface& surface);

MeshedSurface read_hdmesh(std::istream& in);
MeshedSurface read_hdmesh(const std::filesystem::path& path);

} // namespace helidens
