#include <benchmark/benchmark.h>

#include <random>

#include "psheaf/delaunay.hpp"
#include "psheaf/filtration.hpp"
#include "psheaf/protein.hpp"
#include "psheaf/psl.hpp"

using namespace psheaf;

namespace {

LabeledPointCloud bench_cloud(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0), q(-1.0, 1.0);
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back({i, Vec3(u(rng), u(rng), u(rng)), q(rng), ""});
  return LabeledPointCloud(std::move(pts));
}

void BM_AssemblePsl(benchmark::State& state) {
  const auto cloud = bench_cloud(static_cast<int>(state.range(0)), 1);
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 2);
  const auto w = SheafWeighting::from_cloud(cloud);
  const auto pair = snapshot_pair(fc, 4.0, 1.0);
  for (auto _ : state) {
    auto op = assemble_psl(fc, pair, 0, cloud, w);
    benchmark::DoNotOptimize(op);
  }
}
BENCHMARK(BM_AssemblePsl)->Arg(16)->Arg(32)->Arg(64);

void BM_Spectrum(benchmark::State& state) {
  const auto cloud = bench_cloud(static_cast<int>(state.range(0)), 2);
  const auto fc = build_vr(pairwise_distances(cloud, DistanceSpec::euclidean()), 2);
  const auto op = assemble_psl(fc, snapshot_pair(fc, 4.0, 1.0), 1, cloud, SheafWeighting::from_cloud(cloud));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(op));
}
BENCHMARK(BM_Spectrum)->Arg(16)->Arg(32);

void BM_Delaunay(benchmark::State& state) {
  const auto cloud = bench_cloud(static_cast<int>(state.range(0)), 3);
  std::vector<Vec3> pts;
  for (const auto& p : cloud.points()) pts.push_back(p.coords);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay_3d(pts));
}
BENCHMARK(BM_Delaunay)->Arg(100)->Arg(1000);

void BM_BuildAlpha(benchmark::State& state) {
  const auto cloud = bench_cloud(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(build_alpha(cloud));
}
BENCHMARK(BM_BuildAlpha)->Arg(100)->Arg(500);

void BM_FeaturizeSite(benchmark::State& state) {
  const std::string dir = PSHEAF_FIXTURE_DIR;
  const auto wt = read_pqr_file(dir + "/micro_wt.pqr");
  const auto mt = read_pqr_file(dir + "/micro_mt.pqr");
  const auto spec = MutationSpec::parse("A:39:Q:G");
  FeatureConfig config;
  config.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(featurize_site(wt, mt, spec, config));
}
BENCHMARK(BM_FeaturizeSite)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
