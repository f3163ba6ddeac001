#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psheaf/geometry.hpp"
#include "psheaf/psl.hpp"

namespace psheaf {

struct PqrAtom {
  int serial = 0;
  std::string atom_name;
  std::string residue_name;
  std::string chain;  // empty when the record has no chain column
  int residue_seq = 0;
  Vec3 coords = Vec3::Zero();
  double charge = 0.0;
  double radius = 0.0;
  std::string element;  // uppercase
  bool hetatm = false;
};

// Whitespace-delimited ATOM/HETATM records with 10 (no chain) or 11 fields:
//   record serial name resName [chain] resSeq x y z charge radius
// Other record types are skipped. Throws MalformedRecord naming the line.
std::vector<PqrAtom> parse_pqr(std::istream& in);
std::vector<PqrAtom> parse_pqr_text(std::string_view text);
std::vector<PqrAtom> read_pqr_file(const std::string& path);

// Element symbol from a PDB atom name; HETATM records whose atom name equals
// the residue name (ions such as ZN, CA) keep the two-letter symbol.
std::string infer_element(std::string_view atom_name, std::string_view residue_name,
                          bool hetatm);
bool is_element_symbol(std::string_view symbol);

// One-letter amino-acid code for a residue name, including common
// protonation variants (HID/HIE/HIP, CYX, ASH, GLH, LYN); nullopt if unknown.
std::optional<char> one_letter_code(std::string_view residue_name);

struct MutationSpec {
  std::string chain;
  int residue_seq = 0;
  char wild_aa = 'A';
  char mutant_aa = 'A';

  // "CHAIN:POS:WT:MT", e.g. "A:39:Q:G". Throws InvalidArgument.
  static MutationSpec parse(std::string_view text);
  std::string to_string() const;
};

struct FeatureConfig {
  double cutoff_r = 16.0;
  std::vector<double> vr_grid{3, 4, 5, 6, 7, 8, 9};
  std::vector<std::string> elements{"C", "N", "O"};
  double delta = 0.0;
  SpectrumTolerance tol;
  FKind f_kind = FKind::ProductOfPairwiseDistances;
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
  std::size_t threads = 1;
  std::string layout_version = "psl-v1:betti7+stats8x7(max,min,mean,median,sum,std,var,count)";

  // Throws InvalidArgument: grid ascending & nonempty, cutoff > max(grid).
  void validate() const;
  std::size_t block_size() const { return vr_grid.size() * (1 + SpectrumStats::kSize); }
  std::size_t feature_length() const;
};

struct AtomSets {
  std::vector<std::size_t> site;          // A_m, indices into the atom list
  std::vector<std::size_t> neighborhood;  // A_mn(r)
  bool empty_neighborhood = false;
};

// A_m = atoms of the mutated residue; A_mn = other atoms within cutoff_r
// (inclusive) of at least one A_m atom. Throws ResidueNotFound.
AtomSets select_atom_sets(std::span<const PqrAtom> atoms, const MutationSpec& spec,
                          double cutoff_r);

struct ElementPair {
  std::string first_element;   // filter on A_m
  std::string second_element;  // filter on A_mn
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::string label() const { return first_element + "-" + second_element; }
  bool empty() const { return first.empty() || second.empty(); }
};

// [(E1, E2) for E1 in elements for E2 in elements].
std::vector<ElementPair> element_pair_sets(std::span<const PqrAtom> atoms,
                                           const AtomSets& sets,
                                           std::span<const std::string> elements);

// betti at each grid point, then the 8 statistics at each grid point.
// Throws GridMismatch when summaries.size() != grid_size.
std::vector<double> stats_block(std::span<const SpectrumSummary> summaries,
                                std::size_t grid_size);

enum class Structure { WildType, Mutant, Difference };
enum class ComplexModel { VrDegree0, AlphaDegree1 };

struct FeatureLayout {
  std::vector<std::string> names;
  // Offsets of the (structure, model, pair) 63-value blocks.
  std::size_t block_offset(Structure s, ComplexModel m, std::size_t pair) const;
  std::size_t pairs = 0;
  std::size_t block = 0;
};

FeatureLayout make_layout(const FeatureConfig& config);

struct SiteFeatureVector {
  MutationSpec spec;
  std::vector<double> values;
  FeatureLayout layout;
  std::string layout_version;
  // Channels zero-filled because one side of the pair was empty, e.g.
  // "WT:N-C".
  std::vector<std::string> empty_channels;
  std::vector<std::string> warnings;
};

// Descriptor block for one element pair of one structure.
struct ChannelBlocks {
  std::vector<double> vr;
  std::vector<double> alpha;
  bool empty = false;
};

ChannelBlocks featurize_channel(std::span<const PqrAtom> atoms, const ElementPair& pair,
                                const FeatureConfig& config);

// Throws ResidueNotFound / ResidueIdentityMismatch and propagates geometry
// errors.
SiteFeatureVector featurize_site(std::span<const PqrAtom> wt_atoms,
                                 std::span<const PqrAtom> mt_atoms, const MutationSpec& spec,
                                 const FeatureConfig& config);

std::string features_csv_header(const FeatureLayout& layout);
std::string features_csv_row(const SiteFeatureVector& fv);
std::string features_to_json(const SiteFeatureVector& fv, const FeatureConfig& config,
                             int indent = -1);

}  // namespace psheaf
