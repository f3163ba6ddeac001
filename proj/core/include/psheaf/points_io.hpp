#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psheaf/geometry.hpp"

namespace psheaf {

// Point files: one point per line, `x y z charge [element]`. Blank lines and
// lines starting with '#' are skipped. Ids are assigned 0, 1, ... in file
// order. Throws MalformedRecord naming the line, Io for unreadable paths.
std::vector<LabeledPoint> parse_points(std::istream& in);
std::vector<LabeledPoint> parse_points_text(std::string_view text);
std::vector<LabeledPoint> read_points_file(const std::string& path);

// Shortest round-trip formatting, so reading the output back is exact.
void write_points(std::ostream& os, const LabeledPointCloud& cloud);

}  // namespace psheaf
