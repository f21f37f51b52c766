#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rotconv/field.hpp"

namespace rotconv {

/// Binary field snapshot:
///   "RCS1" | nx, ny, nz as little-endian u32 | name length (u32 LE) | UTF-8 name
///   | nx*ny*nz little-endian f64 values, row-major (z fastest).
struct Snapshot {
  std::string name;
  PhysicalField field;
};

void write_snapshot(std::ostream& out, const std::string& name, const PhysicalField& field);
void write_snapshot(const std::filesystem::path& path, const std::string& name,
                    const PhysicalField& field);

/// Throws std::runtime_error on bad magic, truncated data, or invalid grid.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace rotconv
