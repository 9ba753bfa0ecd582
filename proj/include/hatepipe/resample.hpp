#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hatepipe/feature_matrix.hpp"

namespace hatepipe {

struct SmoteConfig {
  std::size_t k_neighbors = 5;
  std::uint64_t seed = 0;
};

// Where a synthetic row came from: parent + u * (neighbor - parent), with
// parent/neighbor given as row indices of the input matrix.
struct SyntheticOrigin {
  std::size_t parent;
  std::size_t neighbor;
  double u;
};

struct SmoteResult {
  FeatureMatrix x;
  std::vector<int> y;
  std::vector<SyntheticOrigin> origins;  // one per appended row
};

// For every row, the k nearest other rows (Euclidean); ties go to the lower index.
// k is clamped to rows - 1.
std::vector<std::vector<std::size_t>> knn_minority(const FeatureMatrix& x_min, std::size_t k);

// Oversamples the minority class until both classes have the majority count.
// Original rows form an unmodified prefix of the result. Deterministic in cfg.seed.
SmoteResult smote(const FeatureMatrix& x, std::span<const int> y, const SmoteConfig& cfg = {});

}  // namespace hatepipe
