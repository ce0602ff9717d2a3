#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ddh/types.hpp"

namespace ddh {

// Gaussian clusters: centers ~ N(0, I_dim), points = center + noise * N(0, I_dim),
// so every coordinate has unit scale. Items are cluster-major; label = cluster id.
struct SynthConfig {
  std::size_t clusters = 10;
  std::size_t per_cluster = 200;
  std::size_t dim = 64;
  double noise = 0.7;
  std::uint64_t seed = 0;
};

struct SynthData {
  FeatureMatrix features;
  LabelSet labels;
};

// Throws DomainError on zero sizes or negative noise.
SynthData make_clusters(const SynthConfig& cfg);

// Seeded random split of [0, n) into `n_queries` query indices and the rest
// as database indices; both returned in ascending order.
struct Split {
  std::vector<std::size_t> queries;
  std::vector<std::size_t> database;
};
Split holdout_split(std::size_t n, std::size_t n_queries, std::uint64_t seed);

}  // namespace ddh
