#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_util.hpp"
#include "psheaf/demo.hpp"
#include "psheaf/errors.hpp"
#include "psheaf/format.hpp"
#include "psheaf/oracle.hpp"
#include "psheaf/points_io.hpp"
#include "psheaf/protein.hpp"
#include "psheaf/psl.hpp"

namespace fs = std::filesystem;
using namespace psheaf;

namespace {

constexpr const char* kVersion = "0.1.0";

// Writes to `path`, or stdout when empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SpectraArgs {
  std::string points;
  std::string charges = "file";
  std::string f_kind = "product";
  bool trivial = false;
  std::string distance = "euclidean";
  std::string set_a, set_b;
  std::string complex = "vr";
  int max_dim = -1;
  std::string grid = "3:9:1";
  double delta = 0.0;
  int q = 0;
  double tol_rel = 1e-8, tol_abs = 1e-12;
  bool jitter = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string format = "json";
  bool pretty = false;
  std::string output, dump_complex;
};

struct FeaturizeArgs {
  std::string wt, mt, mutation, batch;
  bool keep_going = false;
  double cutoff = 16.0;
  std::string grid = "3:9:1";
  std::string elements = "C,N,O";
  double delta = 0.0;
  std::string f_kind = "product";
  double tol_rel = 1e-8, tol_abs = 1e-12;
  bool jitter = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string format = "csv";
  std::string output;
};

struct DemoArgs {
  double delta = 0.0;
  std::string charges = "1,0.01";
  std::string out = ".";
  std::size_t threads = 1;
};

struct VerifyArgs {
  std::size_t trials = 50;
  std::uint64_t seed = 7;
  std::string output;
  bool inject_fault = false;
};

int run_spectra(const SpectraArgs& a) {
  CloudOptions cloud_opts;
  cloud_opts.jitter = a.jitter;
  cloud_opts.jitter_seed = a.seed;
  auto points = read_points_file(a.points);
  if (a.trivial || a.charges == "unit") {
    for (auto& p : points) p.charge = 1.0;
  }
  const LabeledPointCloud cloud(std::move(points), cloud_opts);
  const FKind f_kind = a.trivial ? FKind::ConstantOne : cli::parse_f_kind(a.f_kind);
  const SheafWeighting w = SheafWeighting::from_cloud(cloud, f_kind);

  DistanceSpec spec = DistanceSpec::euclidean();
  if (a.distance == "bipartite") {
    if (a.set_a.empty()) throw Error(ErrorCode::InvalidPartition, "bipartite distance needs --set-a");
    std::vector<int> set_a = cli::parse_int_list(a.set_a), set_b;
    if (!a.set_b.empty()) {
      set_b = cli::parse_int_list(a.set_b);
    } else {
      for (const auto& p : cloud.points()) {
        if (std::find(set_a.begin(), set_a.end(), p.id) == set_a.end()) set_b.push_back(p.id);
      }
    }
    spec = DistanceSpec::bipartite(std::move(set_a), std::move(set_b));
  }

  const int max_dim = a.max_dim >= 0 ? a.max_dim : a.q + 1;
  FilteredComplex fc;
  if (a.complex == "alpha") {
    if (a.distance != "euclidean") {
      throw Error(ErrorCode::InvalidArgument, "alpha complexes use the Euclidean metric only");
    }
    fc = build_alpha(cloud);
  } else {
    fc = build_vr(pairwise_distances(cloud, spec), max_dim);
  }
  if (!a.dump_complex.empty()) {
    Output dump(a.dump_complex);
    write_complex(dump.stream(), fc);
  }

  SweepDocument doc;
  doc.q = a.q;
  doc.delta = a.delta;
  doc.grid = cli::parse_grid(a.grid);
  SweepOptions opts;
  opts.delta = a.delta;
  opts.tol = {a.tol_rel, a.tol_abs};
  opts.threads = a.threads;
  doc.records = psl_over_filtration(fc, cloud, w, doc.grid, a.q, opts);
  doc.meta = {{"points", a.points},
              {"n_points", std::to_string(cloud.size())},
              {"complex", a.complex == "alpha" ? "alpha(radius)" : "vr(diameter)"},
              {"max_dim", std::to_string(fc.max_dim())},
              {"distance", a.distance},
              {"charges", a.trivial ? "unit" : a.charges},
              {"f_kind", std::string(to_string(f_kind))},
              {"tol_rel", format_double(a.tol_rel)},
              {"tol_abs", format_double(a.tol_abs)},
              {"version", kVersion}};

  Output out(a.output);
  if (a.format == "csv") {
    out.stream() << to_plot_csv(doc.records);
  } else {
    out.stream() << to_json(doc, a.pretty ? 2 : -1) << '\n';
  }
  return 0;
}

FeatureConfig feature_config(const FeaturizeArgs& a) {
  FeatureConfig c;
  c.cutoff_r = a.cutoff;
  c.vr_grid = cli::parse_grid(a.grid);
  c.elements = cli::parse_token_list(a.elements);
  c.delta = a.delta;
  c.tol = {a.tol_rel, a.tol_abs};
  c.f_kind = cli::parse_f_kind(a.f_kind);
  c.jitter = a.jitter;
  c.jitter_seed = a.seed;
  c.threads = a.threads;
  c.validate();
  return c;
}

SiteFeatureVector featurize_files(const std::string& wt, const std::string& mt,
                                  const std::string& mutation, const FeatureConfig& config) {
  const auto spec = MutationSpec::parse(mutation);
  const auto wt_atoms = read_pqr_file(wt);
  const auto mt_atoms = read_pqr_file(mt);
  return featurize_site(wt_atoms, mt_atoms, spec, config);
}

void emit_features(std::ostream& os, const SiteFeatureVector& fv, const FeatureConfig& config,
                   const std::string& format) {
  if (format == "json") {
    os << features_to_json(fv, config) << '\n';
  } else {
    os << features_csv_row(fv);
  }
}

int run_featurize(const FeaturizeArgs& a) {
  const FeatureConfig config = feature_config(a);
  const FeatureLayout layout = make_layout(config);

  if (a.batch.empty()) {
    if (a.wt.empty() || a.mt.empty() || a.mutation.empty()) {
      throw Error(ErrorCode::InvalidArgument, "featurize needs WT and MT files and --mutation, or --batch");
    }
    const auto fv = featurize_files(a.wt, a.mt, a.mutation, config);
    for (const auto& warning : fv.warnings) std::cerr << "psheaf: warning: " << warning << '\n';
    Output out(a.output);
    if (a.format == "csv") out.stream() << features_csv_header(layout);
    emit_features(out.stream(), fv, config, a.format);
    return 0;
  }

  const auto entries = cli::read_manifest(a.batch);
  Output out(a.output);
  if (a.format == "csv") out.stream() << features_csv_header(layout);
  std::size_t ok = 0;
  std::vector<std::string> failures;
  int first_code = 0;
  for (const auto& e : entries) {
    try {
      const auto fv = featurize_files(e.wt.string(), e.mt.string(), e.mutation, config);
      emit_features(out.stream(), fv, config, a.format);
      ++ok;
    } catch (const Error& err) {
      failures.push_back("line " + std::to_string(e.line) + " " + e.mutation + ": " +
                         std::string(to_string(err.code())) + ": " + err.what());
      if (first_code == 0) first_code = exit_code_for(err.code());
      if (!a.keep_going) break;
    }
  }
  out.stream().flush();
  std::cerr << "batch summary: " << ok << " ok, " << failures.size() << " failed\n";
  for (const auto& f : failures) std::cerr << "  failed " << f << '\n';
  if (!failures.empty() && !a.keep_going) return first_code;
  return 0;
}

int run_demo(const DemoArgs& a) {
  const auto charges = cli::parse_real_list(a.charges);
  if (charges.size() != 2) throw Error(ErrorCode::InvalidArgument, "--charges expects 'hi,lo'");
  const DemoResult result = psheaf::run_demo(charges[0], charges[1], a.delta, a.threads);
  fs::create_directories(a.out);
  const fs::path dir(a.out);
  {
    Output cloud_out((dir / "demo_cloud.xyz").string());
    write_points(cloud_out.stream(), result.cloud);
  }
  for (int q = 0; q <= 1; ++q) {
    const fs::path path = dir / ("demo_q" + std::to_string(q) + ".csv");
    Output csv(path.string());
    csv.stream() << to_plot_csv(q == 0 ? result.q0 : result.q1);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_verify(const VerifyArgs& a) {
  testing::set_coboundary_fault(a.inject_fault);
  oracle::VerifyOptions opts;
  opts.trials = a.trials;
  opts.seed = a.seed;
  const auto reports = oracle::run_verification(opts);
  Output out(a.output);
  std::size_t passed = 0;
  for (const auto& r : reports) {
    out.stream() << oracle::to_json(r) << '\n';
    if (r.pass) {
      ++passed;
    } else {
      std::cerr << "FAIL " << r.instance << '\n';
      const std::size_t shown = std::min<std::size_t>(r.failures.size(), 5);
      for (std::size_t i = 0; i < shown; ++i) std::cerr << "  " << r.failures[i] << '\n';
      if (r.failures.size() > shown) {
        std::cerr << "  ... " << r.failures.size() - shown << " more\n";
      }
    }
  }
  std::cerr << "verify: " << passed << "/" << reports.size() << " instances passed\n";
  return passed == reports.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent sheaf Laplacian spectra and protein mutation features"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "INI/TOML file with defaults; [section] per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  SpectraArgs sa;
  auto* spectra = app.add_subcommand("spectra", "PSL spectra over a filtration grid");
  spectra->add_option("--points", sa.points, "Point file: x y z charge [element]")->required();
  spectra->add_option("--charges", sa.charges, "file: charges from the point file; unit: all 1")
      ->check(CLI::IsMember({"file", "unit"}))->capture_default_str();
  spectra->add_option("--f-kind", sa.f_kind, "Normalization F: product of distances or one")
      ->check(CLI::IsMember({"product", "one"}))->capture_default_str();
  spectra->add_flag("--trivial", sa.trivial, "Unit charges and F = 1 (plain persistent homology)");
  spectra->add_option("--distance", sa.distance)->check(CLI::IsMember({"euclidean", "bipartite"}))
      ->capture_default_str();
  spectra->add_option("--set-a", sa.set_a, "Comma list of point ids (bipartite)");
  spectra->add_option("--set-b", sa.set_b, "Comma list of point ids; default is the complement");
  spectra->add_option("--complex", sa.complex)->check(CLI::IsMember({"vr", "alpha"}))->capture_default_str();
  spectra->add_option("--max-dim", sa.max_dim, "VR skeleton dimension (default q + 1)");
  spectra->add_option("--grid", sa.grid, "start:stop:step or comma list")->capture_default_str();
  spectra->add_option("--delta", sa.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
  spectra->add_option("-q,--q", sa.q)->check(CLI::Range(0, 1))->capture_default_str();
  spectra->add_option("--tol-rel", sa.tol_rel)->capture_default_str();
  spectra->add_option("--tol-abs", sa.tol_abs)->capture_default_str();
  spectra->add_flag("--jitter", sa.jitter, "Seeded 1e-6 coordinate jitter");
  spectra->add_option("--seed", sa.seed, "Jitter seed")->capture_default_str();
  spectra->add_option("--threads", sa.threads, "0 = all cores")->envname("PSHEAF_THREADS")->capture_default_str();
  spectra->add_option("--format", sa.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  spectra->add_flag("--pretty", sa.pretty, "Indented JSON");
  spectra->add_option("-o,--output", sa.output, "Output file (default stdout)");
  spectra->add_option("--dump-complex", sa.dump_complex, "Write the filtered complex to a file");

  FeaturizeArgs fa;
  auto* featurize = app.add_subcommand("featurize", "3402-value mutation-site features from WT/MT PQR files");
  featurize->add_option("wt", fa.wt, "Wild-type PQR");
  featurize->add_option("mt", fa.mt, "Mutant PQR");
  featurize->add_option("-m,--mutation", fa.mutation, "CHAIN:POS:WT:MT, e.g. A:39:Q:G");
  featurize->add_option("--batch", fa.batch, "Manifest: 'wt.pqr mt.pqr CHAIN:POS:WT:MT' per line");
  featurize->add_flag("--keep-going", fa.keep_going, "Batch: continue past failing rows");
  featurize->add_option("--cutoff", fa.cutoff, "Neighborhood cutoff (A)")->capture_default_str();
  featurize->add_option("--grid", fa.grid)->capture_default_str();
  featurize->add_option("--elements", fa.elements)->capture_default_str();
  featurize->add_option("--delta", fa.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
  featurize->add_option("--f-kind", fa.f_kind)->check(CLI::IsMember({"product", "one"}))->capture_default_str();
  featurize->add_option("--tol-rel", fa.tol_rel)->capture_default_str();
  featurize->add_option("--tol-abs", fa.tol_abs)->capture_default_str();
  featurize->add_flag("--jitter", fa.jitter);
  featurize->add_option("--seed", fa.seed)->capture_default_str();
  featurize->add_option("--threads", fa.threads)->envname("PSHEAF_THREADS")->capture_default_str();
  featurize->add_option("--format", fa.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  featurize->add_option("-o,--output", fa.output);

  DemoArgs da;
  auto* demo = app.add_subcommand("demo", "Two-cluster sweep; writes plot CSVs");
  demo->add_option("--delta", da.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
  demo->add_option("--charges", da.charges, "hi,lo")->capture_default_str();
  demo->add_option("--out", da.out, "Output directory")->capture_default_str();
  demo->add_option("--threads", da.threads)->envname("PSHEAF_THREADS")->capture_default_str();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Randomized engine-vs-oracle checks");
  verify->add_option("--trials", va.trials)->capture_default_str();
  verify->add_option("--seed", va.seed)->capture_default_str();
  verify->add_option("-o,--output", va.output, "JSON-lines report file (default stdout)");
  verify->add_flag("--inject-fault", va.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectra->parsed()) return run_spectra(sa);
    if (featurize->parsed()) return run_featurize(fa);
    if (demo->parsed()) return run_demo(da);
    if (verify->parsed()) return run_verify(va);
  } catch (const Error& e) {
    std::cerr << "psheaf: error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "psheaf: error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
