#pragma once

#include <vector>

#include "otl/types.hpp"

namespace otl {

// Desk-scale covariate-shift generator: class-conditional Gaussians in the
// target; source i sees class means rotated by rotation*(i+1)/n (in the
// leading 2-plane) and translated by shift*(i+1)/n along a fixed direction.
struct SyntheticSpec {
  int num_sources = 3;
  int dim = 20;
  int classes = 4;
  int per_class_count = 100;      // per class, per source domain
  int target_per_class = 200;
  double shift = 3.0;
  double rotation = 0.6;          // radians
  double noise_std = 1.0;
  double class_sep = 3.0;         // spread of class means
  unsigned long long seed = 1;
};

struct SyntheticTask {
  std::vector<Dataset> sources;
  Dataset target;
};

SyntheticTask gen_synthetic(const SyntheticSpec& spec);

}  // namespace otl
