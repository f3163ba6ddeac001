#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "psheaf/errors.hpp"
#include "psheaf/filtration.hpp"
#include "psheaf/format.hpp"
#include "psheaf/parallel.hpp"
#include "psheaf/protein.hpp"

namespace psheaf {

namespace {

constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

bool is_amino_acid(char c) { return kAminoAcids.find(c) != std::string_view::npos; }

std::vector<std::size_t> residue_atoms(std::span<const PqrAtom> atoms, const MutationSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].chain == spec.chain && atoms[i].residue_seq == spec.residue_seq) {
      out.push_back(i);
    }
  }
  return out;
}

void check_identity(std::span<const PqrAtom> atoms, const MutationSpec& spec, char expected,
                    std::string_view which) {
  const auto site = residue_atoms(atoms, spec);
  if (site.empty()) {
    throw Error(ErrorCode::ResidueNotFound, std::string(which) + " structure has no residue " +
                                                spec.chain + ":" + std::to_string(spec.residue_seq));
  }
  const std::string& name = atoms[site.front()].residue_name;
  const auto code = one_letter_code(name);
  if (!code || *code != expected) {
    throw Error(ErrorCode::ResidueIdentityMismatch,
                std::string(which) + " residue " + spec.chain + ":" +
                    std::to_string(spec.residue_seq) + " is " + name + ", expected '" +
                    std::string(1, expected) + "'");
  }
}

const char* structure_tag(Structure s) {
  switch (s) {
    case Structure::WildType: return "WT";
    case Structure::Mutant: return "MT";
    case Structure::Difference: return "DIFF";
  }
  return "?";
}

const char* model_tag(ComplexModel m) {
  return m == ComplexModel::VrDegree0 ? "VR0" : "ALPHA1";
}

}  // namespace

MutationSpec MutationSpec::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  const std::string shown(text);
  if (parts.size() != 4) {
    throw Error(ErrorCode::InvalidArgument,
                "mutation '" + shown + "' is not of the form CHAIN:POS:WT:MT");
  }
  MutationSpec spec;
  spec.chain = parts[0];
  try {
    std::size_t used = 0;
    spec.residue_seq = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "mutation '" + shown + "' has a bad position");
  }
  if (parts[2].size() != 1 || parts[3].size() != 1) {
    throw Error(ErrorCode::InvalidArgument, "mutation '" + shown + "' needs one-letter codes");
  }
  spec.wild_aa = static_cast<char>(std::toupper(static_cast<unsigned char>(parts[2][0])));
  spec.mutant_aa = static_cast<char>(std::toupper(static_cast<unsigned char>(parts[3][0])));
  if (!is_amino_acid(spec.wild_aa) || !is_amino_acid(spec.mutant_aa)) {
    throw Error(ErrorCode::InvalidArgument, "mutation '" + shown + "' has an unknown amino acid");
  }
  return spec;
}

std::string MutationSpec::to_string() const {
  return chain + ":" + std::to_string(residue_seq) + ":" + wild_aa + ":" + mutant_aa;
}

void FeatureConfig::validate() const {
  if (vr_grid.empty()) throw Error(ErrorCode::InvalidArgument, "feature grid is empty");
  for (std::size_t i = 1; i < vr_grid.size(); ++i) {
    if (!(vr_grid[i] > vr_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "feature grid must be strictly ascending");
    }
  }
  if (!(cutoff_r > vr_grid.back())) {
    throw Error(ErrorCode::InvalidArgument, "cutoff must exceed the largest grid value");
  }
  if (elements.empty()) throw Error(ErrorCode::InvalidArgument, "no elements configured");
  if (!(delta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be >= 0");
}

std::size_t FeatureConfig::feature_length() const {
  return 3 * 2 * elements.size() * elements.size() * block_size();
}

AtomSets select_atom_sets(std::span<const PqrAtom> atoms, const MutationSpec& spec,
                          double cutoff_r) {
  AtomSets sets;
  sets.site = residue_atoms(atoms, spec);
  if (sets.site.empty()) {
    throw Error(ErrorCode::ResidueNotFound,
                "no atoms for residue " + spec.chain + ":" + std::to_string(spec.residue_seq));
  }
  const double r2 = cutoff_r * cutoff_r;
  std::size_t s = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (s < sets.site.size() && sets.site[s] == i) {
      ++s;
      continue;
    }
    for (std::size_t j : sets.site) {
      if ((atoms[i].coords - atoms[j].coords).squaredNorm() <= r2) {
        sets.neighborhood.push_back(i);
        break;
      }
    }
  }
  sets.empty_neighborhood = sets.neighborhood.empty();
  return sets;
}

std::vector<ElementPair> element_pair_sets(std::span<const PqrAtom> atoms, const AtomSets& sets,
                                           std::span<const std::string> elements) {
  auto filter = [&](const std::vector<std::size_t>& ids, const std::string& element) {
    std::vector<std::size_t> out;
    for (std::size_t i : ids) {
      if (atoms[i].element == element) out.push_back(i);
    }
    return out;
  };
  std::vector<ElementPair> pairs;
  for (const auto& e1 : elements) {
    for (const auto& e2 : elements) {
      pairs.push_back({e1, e2, filter(sets.site, e1), filter(sets.neighborhood, e2)});
    }
  }
  return pairs;
}

std::vector<double> stats_block(std::span<const SpectrumSummary> summaries,
                                std::size_t grid_size) {
  if (summaries.size() != grid_size) {
    throw Error(ErrorCode::GridMismatch, "expected " + std::to_string(grid_size) +
                                             " spectra, got " + std::to_string(summaries.size()));
  }
  std::vector<double> block;
  block.reserve(grid_size * (1 + SpectrumStats::kSize));
  for (const auto& s : summaries) block.push_back(static_cast<double>(s.betti));
  for (const auto& s : summaries) {
    const auto values = s.stats.as_array();
    block.insert(block.end(), values.begin(), values.end());
  }
  return block;
}

std::size_t FeatureLayout::block_offset(Structure s, ComplexModel m, std::size_t pair) const {
  const std::size_t si = static_cast<std::size_t>(s);
  const std::size_t mi = static_cast<std::size_t>(m);
  return ((si * 2 + mi) * pairs + pair) * block;
}

FeatureLayout make_layout(const FeatureConfig& config) {
  FeatureLayout layout;
  layout.pairs = config.elements.size() * config.elements.size();
  layout.block = config.block_size();
  layout.names.reserve(config.feature_length());
  for (Structure s : {Structure::WildType, Structure::Mutant, Structure::Difference}) {
    for (ComplexModel m : {ComplexModel::VrDegree0, ComplexModel::AlphaDegree1}) {
      for (const auto& e1 : config.elements) {
        for (const auto& e2 : config.elements) {
          const std::string prefix =
              std::string(structure_tag(s)) + "." + model_tag(m) + "." + e1 + "-" + e2 + ".";
          for (double t : config.vr_grid) {
            layout.names.push_back(prefix + "betti.t" + format_double(t));
          }
          for (double t : config.vr_grid) {
            for (auto name : SpectrumStats::kNames) {
              layout.names.push_back(prefix + "t" + format_double(t) + "." + std::string(name));
            }
          }
        }
      }
    }
  }
  if (layout.names.size() != config.feature_length()) {
    throw Error(ErrorCode::Numerical, "feature layout arithmetic is inconsistent");
  }
  return layout;
}

ChannelBlocks featurize_channel(std::span<const PqrAtom> atoms, const ElementPair& pair,
                                const FeatureConfig& config) {
  ChannelBlocks out;
  const std::size_t block = config.block_size();
  if (pair.empty()) {
    out.vr.assign(block, 0.0);
    out.alpha.assign(block, 0.0);
    out.empty = true;
    return out;
  }
  std::vector<LabeledPoint> points;
  std::vector<int> set_a, set_b;
  for (std::size_t i : pair.first) {
    points.push_back({static_cast<int>(i), atoms[i].coords, atoms[i].charge, atoms[i].element});
    set_a.push_back(static_cast<int>(i));
  }
  for (std::size_t i : pair.second) {
    points.push_back({static_cast<int>(i), atoms[i].coords, atoms[i].charge, atoms[i].element});
    set_b.push_back(static_cast<int>(i));
  }
  CloudOptions copts;
  copts.jitter = config.jitter;
  copts.jitter_seed = config.jitter_seed;
  const LabeledPointCloud cloud(std::move(points), copts);
  const SheafWeighting w = SheafWeighting::from_cloud(cloud, config.f_kind);

  SweepOptions sopts;
  sopts.delta = config.delta;
  sopts.tol = config.tol;
  sopts.threads = 1;

  const DistanceMatrix dist =
      pairwise_distances(cloud, DistanceSpec::bipartite(std::move(set_a), std::move(set_b)));
  const FilteredComplex vr = build_vr(dist, 1);
  const auto vr_sweep = psl_over_filtration(vr, cloud, w, config.vr_grid, 0, sopts);

  const FilteredComplex alpha = build_alpha(cloud);
  const auto alpha_sweep = psl_over_filtration(alpha, cloud, w, config.vr_grid, 1, sopts);

  auto block_of = [&](const std::vector<SweepRecord>& sweep) {
    std::vector<SpectrumSummary> summaries;
    summaries.reserve(sweep.size());
    for (const auto& r : sweep) summaries.push_back(r.summary);
    return stats_block(summaries, config.vr_grid.size());
  };
  out.vr = block_of(vr_sweep);
  out.alpha = block_of(alpha_sweep);
  return out;
}

SiteFeatureVector featurize_site(std::span<const PqrAtom> wt_atoms,
                                 std::span<const PqrAtom> mt_atoms, const MutationSpec& spec,
                                 const FeatureConfig& config) {
  config.validate();
  check_identity(wt_atoms, spec, spec.wild_aa, "wild-type");
  check_identity(mt_atoms, spec, spec.mutant_aa, "mutant");

  SiteFeatureVector fv;
  fv.spec = spec;
  fv.layout = make_layout(config);
  fv.layout_version = config.layout_version;
  fv.values.assign(config.feature_length(), 0.0);

  const std::span<const PqrAtom> structures[2] = {wt_atoms, mt_atoms};
  if (spec.wild_aa == spec.mutant_aa) {
    fv.warnings.push_back("mutation " + spec.to_string() + " does not change the residue");
  }
  std::vector<ElementPair> pairs[2];
  for (int s = 0; s < 2; ++s) {
    const AtomSets sets = select_atom_sets(structures[s], spec, config.cutoff_r);
    if (sets.empty_neighborhood) {
      fv.warnings.push_back(std::string(s == 0 ? "WT" : "MT") +
                            ": empty neighborhood within cutoff");
    }
    pairs[s] = element_pair_sets(structures[s], sets, config.elements);
  }

  const std::size_t npairs = fv.layout.pairs;
  const auto blocks = parallel_map<ChannelBlocks>(2 * npairs, config.threads, [&](std::size_t task) {
    const std::size_t s = task / npairs;
    const std::size_t p = task % npairs;
    return featurize_channel(structures[s], pairs[s][p], config);
  });

  const std::size_t width = fv.layout.block;
  for (std::size_t task = 0; task < blocks.size(); ++task) {
    const std::size_t s = task / npairs;
    const std::size_t p = task % npairs;
    const Structure st = s == 0 ? Structure::WildType : Structure::Mutant;
    std::copy(blocks[task].vr.begin(), blocks[task].vr.end(),
              fv.values.begin() + static_cast<std::ptrdiff_t>(
                                      fv.layout.block_offset(st, ComplexModel::VrDegree0, p)));
    std::copy(blocks[task].alpha.begin(), blocks[task].alpha.end(),
              fv.values.begin() + static_cast<std::ptrdiff_t>(
                                      fv.layout.block_offset(st, ComplexModel::AlphaDegree1, p)));
    if (blocks[task].empty) {
      fv.empty_channels.push_back(std::string(s == 0 ? "WT:" : "MT:") + pairs[s][p].label());
    }
  }
  const std::size_t third = 2 * npairs * width;
  for (std::size_t i = 0; i < third; ++i) {
    fv.values[2 * third + i] = fv.values[i] - fv.values[third + i];
  }
  return fv;
}

std::string features_csv_header(const FeatureLayout& layout) {
  std::string out = "mutation";
  for (const auto& name : layout.names) {
    out += ',';
    out += name;
  }
  out += '\n';
  return out;
}

std::string features_csv_row(const SiteFeatureVector& fv) {
  std::string out = fv.spec.to_string();
  for (double v : fv.values) {
    out += ',';
    out += format_double(v);
  }
  out += '\n';
  return out;
}

std::string features_to_json(const SiteFeatureVector& fv, const FeatureConfig& config,
                             int indent) {
  nlohmann::ordered_json j;
  j["spec"] = fv.spec.to_string();
  nlohmann::ordered_json cfg;
  cfg["cutoff_r"] = config.cutoff_r;
  cfg["grid"] = config.vr_grid;
  cfg["elements"] = config.elements;
  cfg["delta"] = config.delta;
  cfg["tol_rel"] = config.tol.rel;
  cfg["tol_abs"] = config.tol.abs;
  cfg["f_kind"] = std::string(to_string(config.f_kind));
  cfg["alpha_convention"] = "radius";
  cfg["vr_convention"] = "diameter";
  j["config"] = std::move(cfg);
  j["layout_version"] = fv.layout_version;
  j["empty_channels"] = fv.empty_channels;
  j["values"] = fv.values;
  return j.dump(indent);
}

}  // namespace psheaf
