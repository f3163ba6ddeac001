#include "cli_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "psheaf/errors.hpp"

namespace psheaf::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view item, std::string_view what) {
  T value{};
  const char* first = item.data();
  const char* last = first + item.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (item.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidArgument,
                "invalid " + std::string(what) + " '" + std::string(item) + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double start = parse_number<double>(parts[0], "grid start");
    const double stop = parse_number<double>(parts[1], "grid stop");
    const double step = parse_number<double>(parts[2], "grid step");
    if (!(step > 0.0) || stop < start) {
      throw Error(ErrorCode::InvalidArgument, "grid range needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  if (parts.size() != 1) throw Error(ErrorCode::InvalidArgument, "grid must be start:stop:step or a list");
  return parse_real_list(text);
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_number<double>(item, "number"));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto item : split(text, ',')) out.push_back(parse_number<int>(item, "integer"));
  return out;
}

std::vector<std::string> parse_token_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw Error(ErrorCode::InvalidArgument, "empty list item in '" + std::string(text) + "'");
    out.emplace_back(item);
  }
  return out;
}

FKind parse_f_kind(std::string_view text) {
  if (text == "product") return FKind::ProductOfPairwiseDistances;
  if (text == "one") return FKind::ConstantOne;
  throw Error(ErrorCode::InvalidArgument, "f-kind must be 'product' or 'one'");
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest '" + path.string() + "'");
  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 3) {
      throw Error(ErrorCode::MalformedRecord, "manifest line " + std::to_string(line_no) +
                                                  ": expected 'wt.pqr mt.pqr CHAIN:POS:WT:MT'");
    }
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    entries.push_back({line_no, resolve(tok[0]), resolve(tok[1]), tok[2]});
  }
  return entries;
}

}  // namespace psheaf::cli
