#include "rotconv/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rotconv {

namespace {

constexpr std::array<char, 4> kMagic{'R', 'C', 'S', '1'};

template <class T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error("snapshot: truncated header");
  }
  return to_little_endian(v);
}

}  // namespace

void write_snapshot(std::ostream& out, const std::string& name, const PhysicalField& field) {
  const Grid& g = field.grid();
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(g.nx()));
  put_u32(out, static_cast<std::uint32_t>(g.ny()));
  put_u32(out, static_cast<std::uint32_t>(g.nz()));
  put_u32(out, static_cast<std::uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  for (double v : field.values()) {
    const double le = to_little_endian(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
  if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const std::string& name,
                    const PhysicalField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
  write_snapshot(out, name, field);
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("snapshot: bad magic");
  }
  const auto nx = get_u32(in);
  const auto ny = get_u32(in);
  const auto nz = get_u32(in);
  const auto name_len = get_u32(in);
  if (nx > 1u << 14 || ny > 1u << 14 || nz > 1u << 14) {
    throw std::runtime_error("snapshot: implausible grid dimensions");
  }
  const Grid grid = [&] {
    try {
      return Grid(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("snapshot: ") + e.what());
    }
  }();
  if (name_len > 1u << 16) throw std::runtime_error("snapshot: implausible name length");
  std::string name(name_len, '\0');
  if (name_len > 0 && !in.read(name.data(), name_len)) {
    throw std::runtime_error("snapshot: truncated name");
  }
  std::vector<double> values(grid.size());
  for (auto& v : values) {
    double raw = 0.0;
    if (!in.read(reinterpret_cast<char*>(&raw), sizeof raw)) {
      throw std::runtime_error("snapshot: truncated data");
    }
    v = to_little_endian(raw);
  }
  return {std::move(name), PhysicalField(grid, std::move(values))};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

}  // namespace rotconv
