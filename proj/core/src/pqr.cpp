#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "psheaf/errors.hpp"
#include "psheaf/protein.hpp"

namespace psheaf {

namespace {

const std::unordered_set<std::string_view>& element_table() {
  static const std::unordered_set<std::string_view> table = {
      "H",  "HE", "LI", "BE", "B",  "C",  "N",  "O",  "F",  "NE", "NA", "MG", "AL", "SI", "P",
      "S",  "CL", "AR", "K",  "CA", "SC", "TI", "V",  "CR", "MN", "FE", "CO", "NI", "CU", "ZN",
      "GA", "GE", "AS", "SE", "BR", "KR", "RB", "SR", "Y",  "ZR", "NB", "MO", "TC", "RU", "RH",
      "PD", "AG", "CD", "IN", "SN", "SB", "TE", "I",  "XE", "CS", "BA", "LA", "CE", "PR", "ND",
      "PM", "SM", "EU", "GD", "TB", "DY", "HO", "ER", "TM", "YB", "LU", "HF", "TA", "W",  "RE",
      "OS", "IR", "PT", "AU", "HG", "TL", "PB", "BI", "PO", "AT", "RN", "FR", "RA", "AC", "TH",
      "PA", "U",  "NP", "PU", "AM", "CM", "BK", "CF", "ES", "FM", "MD", "NO", "LR", "D"};
  return table;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

template <class T>
bool parse_number(const std::string& token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::MalformedRecord,
              "malformed PQR record at line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

bool is_element_symbol(std::string_view symbol) {
  return element_table().contains(upper(symbol));
}

std::string infer_element(std::string_view atom_name, std::string_view residue_name,
                          bool hetatm) {
  const std::string name = upper(atom_name);
  if (hetatm && name == upper(residue_name) && name.size() <= 2 && is_element_symbol(name)) {
    return name;
  }
  for (char c : name) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string sym(1, c);
      return is_element_symbol(sym) ? sym : std::string();
    }
  }
  return {};
}

std::optional<char> one_letter_code(std::string_view residue_name) {
  static const std::unordered_map<std::string, char> codes = {
      {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"ASH", 'D'}, {"CYS", 'C'},
      {"CYX", 'C'}, {"CYM", 'C'}, {"GLN", 'Q'}, {"GLU", 'E'}, {"GLH", 'E'}, {"GLY", 'G'},
      {"HIS", 'H'}, {"HID", 'H'}, {"HIE", 'H'}, {"HIP", 'H'}, {"HSD", 'H'}, {"HSE", 'H'},
      {"HSP", 'H'}, {"ILE", 'I'}, {"LEU", 'L'}, {"LYS", 'K'}, {"LYN", 'K'}, {"MET", 'M'},
      {"MSE", 'M'}, {"PHE", 'F'}, {"PRO", 'P'}, {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'},
      {"TYR", 'Y'}, {"VAL", 'V'}};
  auto it = codes.find(upper(residue_name));
  if (it == codes.end()) return std::nullopt;
  return it->second;
}

std::vector<PqrAtom> parse_pqr(std::istream& in) {
  std::vector<PqrAtom> atoms;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    fields.clear();
    for (std::string tok; tokens >> tok;) fields.push_back(tok);
    if (fields.empty()) continue;
    const std::string record = upper(fields[0]);
    if (record != "ATOM" && record != "HETATM") continue;
    if (fields.size() != 10 && fields.size() != 11) {
      malformed(line_no, "expected 10 or 11 fields, found " + std::to_string(fields.size()));
    }
    const bool has_chain = fields.size() == 11;
    PqrAtom atom;
    atom.hetatm = record == "HETATM";
    if (!parse_number(fields[1], atom.serial)) malformed(line_no, "bad serial '" + fields[1] + "'");
    atom.atom_name = fields[2];
    atom.residue_name = fields[3];
    std::size_t k = 4;
    if (has_chain) atom.chain = fields[k++];
    if (!parse_number(fields[k], atom.residue_seq)) {
      malformed(line_no, "bad residue number '" + fields[k] + "'");
    }
    ++k;
    for (int c = 0; c < 3; ++c, ++k) {
      double v = 0.0;
      if (!parse_number(fields[k], v) || !std::isfinite(v)) {
        malformed(line_no, "bad coordinate '" + fields[k] + "'");
      }
      atom.coords[c] = v;
    }
    if (!parse_number(fields[k], atom.charge) || !std::isfinite(atom.charge)) {
      malformed(line_no, "bad charge '" + fields[k] + "'");
    }
    ++k;
    if (!parse_number(fields[k], atom.radius) || !(atom.radius >= 0.0)) {
      malformed(line_no, "bad radius '" + fields[k] + "'");
    }
    atom.element = infer_element(atom.atom_name, atom.residue_name, atom.hetatm);
    if (atom.element.empty()) {
      malformed(line_no, "cannot infer element from atom name '" + atom.atom_name + "'");
    }
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

std::vector<PqrAtom> parse_pqr_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pqr(in);
}

std::vector<PqrAtom> read_pqr_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open PQR file '" + path + "'");
  return parse_pqr(in);
}

}  // namespace psheaf
