#pragma once

#include "patchroute/gainmap.hpp"

#include <filesystem>
#include <iosfwd>

namespace patchroute {

/// Gain-map text format, used to exchange maps with external predictors:
///   line 1:  grid_w grid_h image_w image_h
///   then grid_h lines of grid_w decimal values, row-major, space separated,
///   written with 9 significant digits.
void write_gainmap(std::ostream& out, const GainMap& map);
void write_gainmap_file(const std::filesystem::path& path, const GainMap& map);

/// Parses the text format above. Throws std::runtime_error with the offending
/// location on malformed input (bad header, short rows, negative values).
GainMap read_gainmap(std::istream& in);
GainMap read_gainmap_file(const std::filesystem::path& path);

} // namespace patchroute
