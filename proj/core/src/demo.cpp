#include "psheaf/demo.hpp"

#include <array>

namespace psheaf {

LabeledPointCloud demo_cloud(double charge_even, double charge_odd) {
  // Literal coordinates so the fixture file and the code agree bit for bit.
  static constexpr double h = 0.4330127018922193;  // 0.5 * sin(60 deg)
  static constexpr std::array<std::array<double, 2>, 6> hex = {{
      {0.5, 0.0}, {0.25, h}, {-0.25, h}, {-0.5, 0.0}, {-0.25, -h}, {0.25, -h}}};
  std::vector<LabeledPoint> pts;
  for (int cluster = 0; cluster < 2; ++cluster) {
    const double cx = cluster == 0 ? 0.0 : 6.0;
    for (int k = 0; k < 6; ++k) {
      const int id = cluster * 6 + k;
      const double charge = (k % 2 == 0) ? charge_even : charge_odd;
      pts.push_back({id, Vec3(cx + hex[static_cast<std::size_t>(k)][0],
                              hex[static_cast<std::size_t>(k)][1], 0.0),
                     charge, "C"});
    }
  }
  return LabeledPointCloud(std::move(pts));
}

std::vector<double> demo_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 28; ++i) grid.push_back(0.25 * i);
  return grid;
}

DemoResult run_demo(double charge_even, double charge_odd, double delta, std::size_t threads) {
  DemoResult out{demo_cloud(charge_even, charge_odd), demo_grid(), {}, {}};
  const FilteredComplex fc =
      build_vr(pairwise_distances(out.cloud, DistanceSpec::euclidean()), 2);
  const SheafWeighting w = SheafWeighting::from_cloud(out.cloud);
  SweepOptions options;
  options.delta = delta;
  options.threads = threads;
  out.q0 = psl_over_filtration(fc, out.cloud, w, out.grid, 0, options);
  out.q1 = psl_over_filtration(fc, out.cloud, w, out.grid, 1, options);
  return out;
}

}  // namespace psheaf
