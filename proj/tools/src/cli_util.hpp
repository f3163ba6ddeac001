#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "psheaf/protein.hpp"

namespace psheaf::cli {

// "3:9:1" (inclusive start:stop:step) or a comma list "3,4.5,6".
std::vector<double> parse_grid(std::string_view text);

// Comma-separated reals / ints / tokens; empty items are rejected.
std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<std::string> parse_token_list(std::string_view text);

FKind parse_f_kind(std::string_view text);  // "product" or "one"

struct ManifestEntry {
  std::size_t line = 0;
  std::filesystem::path wt;
  std::filesystem::path mt;
  std::string mutation;
};

// `wt.pqr mt.pqr CHAIN:POS:WT:MT` per line, '#' comments; relative paths
// resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace psheaf::cli
