#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "psheaf/format.hpp"
#include "psheaf/psl.hpp"

namespace psheaf {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_json(const SweepDocument& doc, int indent) {
  nlohmann::ordered_json j;
  j["q"] = doc.q;
  j["delta"] = doc.delta;
  j["grid"] = doc.grid;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : doc.records) {
    nlohmann::ordered_json rec;
    rec["t"] = r.t;
    rec["betti"] = r.summary.betti;
    if (r.summary.lambda_min_nonzero) {
      rec["lambda_min"] = *r.summary.lambda_min_nonzero;
    } else {
      rec["lambda_min"] = nullptr;
    }
    nlohmann::ordered_json stats;
    const auto values = r.summary.stats.as_array();
    for (std::size_t k = 0; k < SpectrumStats::kSize; ++k) {
      stats[std::string(SpectrumStats::kNames[k])] = values[k];
    }
    rec["stats"] = std::move(stats);
    rec["empty"] = r.summary.empty;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  if (!doc.meta.empty()) {
    nlohmann::ordered_json meta;
    for (const auto& [k, v] : doc.meta) meta[k] = v;
    j["meta"] = std::move(meta);
  }
  return j.dump(indent);
}

std::string to_plot_csv(std::span<const SweepRecord> records) {
  std::ostringstream os;
  os << "t,betti,lambda_min\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << r.summary.betti << ',';
    if (r.summary.lambda_min_nonzero) os << format_double(*r.summary.lambda_min_nonzero);
    os << '\n';
  }
  return os.str();
}

}  // namespace psheaf
