#include "lilfields/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lilfields {

static_assert(std::endian::native == std::endian::little,
              "grid binary layout is little-endian; byte swapping is not implemented");

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_grid_binary(const ValueGrid& grid, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_grid_binary: cannot open " + path);
  const std::int64_t d = grid.dim();
  os.write(reinterpret_cast<const char*>(&d), sizeof(d));
  for (int q = 0; q < grid.dim(); ++q) {
    const std::int64_t o = grid.origin()[q];
    os.write(reinterpret_cast<const char*>(&o), sizeof(o));
  }
  for (int q = 0; q < grid.dim(); ++q) {
    const std::int64_t e = grid.extents()[static_cast<std::size_t>(q)];
    os.write(reinterpret_cast<const char*>(&e), sizeof(e));
  }
  os.write(reinterpret_cast<const char*>(grid.values().data()),
           static_cast<std::streamsize>(grid.values().size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_grid_binary: write to " + path + " failed");
}

ValueGrid read_grid_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_grid_binary: cannot open " + path);
  std::int64_t d = 0;
  is.read(reinterpret_cast<char*>(&d), sizeof(d));
  if (!is || d < 1 || d > 64) throw std::runtime_error("read_grid_binary: bad header in " + path);
  std::vector<Coord> origin(static_cast<std::size_t>(d));
  std::vector<Coord> extents(static_cast<std::size_t>(d));
  is.read(reinterpret_cast<char*>(origin.data()), static_cast<std::streamsize>(d * sizeof(Coord)));
  is.read(reinterpret_cast<char*>(extents.data()), static_cast<std::streamsize>(d * sizeof(Coord)));
  if (!is) throw std::runtime_error("read_grid_binary: truncated header in " + path);
  ValueGrid grid(LatticeIndex(std::move(origin)), std::move(extents));
  is.read(reinterpret_cast<char*>(grid.values().data()),
          static_cast<std::streamsize>(grid.values().size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_grid_binary: truncated payload in " + path);
  return grid;
}

void write_grid_csv(const ValueGrid& grid, std::ostream& os) {
  const int d = grid.dim();
  for (int q = 0; q < d; ++q) os << "i" << (q + 1) << ',';
  os << "value\n";
  for_each_site(std::span<const Coord>(grid.extents()),
                [&](std::int64_t flat, std::span<const Coord> idx) {
                  for (int q = 0; q < d; ++q) {
                    os << grid.origin()[q] + idx[static_cast<std::size_t>(q)] << ',';
                  }
                  os << format_double(grid.flat(flat)) << '\n';
                });
}

void write_dependence_csv(const DependenceProfile& profile, std::ostream& os) {
  for (int q = 0; q < profile.d; ++q) os << "i" << (q + 1) << ',';
  os << "delta,se,reps\n";
  for (const auto& [site, est] : profile.delta) {
    for (int q = 0; q < profile.d; ++q) os << site[q] << ',';
    os << format_double(est.value) << ',' << format_double(est.se) << ',' << profile.reps << '\n';
  }
}

}  // namespace lilfields
