#pragma once

#include <vector>

#include "psheaf/geometry.hpp"
#include "psheaf/psl.hpp"

namespace psheaf {

// Two planar hexagons of circumradius 0.5 (diameter 1) whose centres sit 6
// apart, so the closest inter-cluster pair is 5 apart. Charges alternate
// between `charge_even` and `charge_odd` inside each hexagon.
LabeledPointCloud demo_cloud(double charge_even = 1.0, double charge_odd = 0.01);

// 0, 0.25, ..., 7.
std::vector<double> demo_grid();

struct DemoResult {
  LabeledPointCloud cloud;
  std::vector<double> grid;
  std::vector<SweepRecord> q0;
  std::vector<SweepRecord> q1;
};

// VR sweeps (Euclidean, max_dim 2) at q = 0 and q = 1.
DemoResult run_demo(double charge_even, double charge_odd, double delta = 0.0,
                    std::size_t threads = 1);

}  // namespace psheaf
