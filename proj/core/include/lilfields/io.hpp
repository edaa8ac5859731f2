#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "lilfields/lattice.hpp"
#include "lilfields/projections.hpp"

namespace lilfields {

inline constexpr std::string_view kVersion = "lilfields 0.1.0";

/// Shortest round-trip decimal representation of a double (std::to_chars).
std::string format_double(double x);

/// Flat binary grid layout: header d, origin coords, extents (all int64
/// little-endian), then the payload as little-endian doubles in
/// dimension-1-major order.
void write_grid_binary(const ValueGrid& grid, const std::string& path);
ValueGrid read_grid_binary(const std::string& path);

/// CSV rows i_1,...,i_d,value in dimension-1-major order; meant for small
/// blocks.
void write_grid_csv(const ValueGrid& grid, std::ostream& os);

/// CSV rows coordinates..., delta, se, reps.
void write_dependence_csv(const DependenceProfile& profile, std::ostream& os);

}  // namespace lilfields
