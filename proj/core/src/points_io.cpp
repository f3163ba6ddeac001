#include "psheaf/points_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "psheaf/errors.hpp"
#include "psheaf/format.hpp"

namespace psheaf {

namespace {

bool parse_real(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<LabeledPoint> parse_points(std::istream& in) {
  std::vector<LabeledPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 4 && tok.size() != 5) {
      throw Error(ErrorCode::MalformedRecord,
                  "line " + std::to_string(line_no) + ": expected 'x y z charge [element]', got " +
                      std::to_string(tok.size()) + " fields");
    }
    LabeledPoint p;
    p.id = static_cast<int>(points.size());
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_real(tok[static_cast<std::size_t>(k)], v[k])) {
        throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) +
                                                    ": not a number: '" + tok[static_cast<std::size_t>(k)] + "'");
      }
    }
    p.coords = Vec3(v[0], v[1], v[2]);
    p.charge = v[3];
    if (tok.size() == 5) {
      for (char c : tok[4]) p.element.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<LabeledPoint> parse_points_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_points(in);
}

std::vector<LabeledPoint> read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open points file '" + path + "'");
  return parse_points(in);
}

void write_points(std::ostream& os, const LabeledPointCloud& cloud) {
  for (const auto& p : cloud.points()) {
    os << format_double(p.coords.x()) << ' ' << format_double(p.coords.y()) << ' '
       << format_double(p.coords.z()) << ' ' << format_double(p.charge);
    if (!p.element.empty()) os << ' ' << p.element;
    os << '\n';
  }
}

}  // namespace psheaf
