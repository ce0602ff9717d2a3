#include "ddh/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ddh/errors.hpp"
#include "ddh/vector_math.hpp"

namespace ddh {

SynthData make_clusters(const SynthConfig& cfg) {
  if (cfg.clusters == 0 || cfg.per_cluster == 0 || cfg.dim == 0) {
    throw DomainError("synthetic benchmark needs clusters, per-cluster count and dim >= 1");
  }
  if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise)) throw DomainError("noise must be finite and >= 0");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> centers(cfg.clusters * cfg.dim);
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    std::span<double> center(centers.data() + c * cfg.dim, cfg.dim);
    do {
      for (auto& v : center) v = gauss(rng);
    } while (norm(center) == 0.0);
  }

  const double sigma = cfg.noise;
  const std::size_t n = cfg.clusters * cfg.per_cluster;
  std::vector<double> values(n * cfg.dim);
  LabelSet labels;
  labels.labels.reserve(n);
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    for (std::size_t p = 0; p < cfg.per_cluster; ++p) {
      double* row = values.data() + (c * cfg.per_cluster + p) * cfg.dim;
      for (std::size_t d = 0; d < cfg.dim; ++d) row[d] = centers[c * cfg.dim + d] + sigma * gauss(rng);
      labels.labels.push_back(static_cast<std::int64_t>(c));
    }
  }
  return {FeatureMatrix(n, cfg.dim, std::move(values)), std::move(labels)};
}

Split holdout_split(std::size_t n, std::size_t n_queries, std::uint64_t seed) {
  if (n_queries >= n) throw DomainError("holdout must leave at least one database item");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Split s;
  s.queries.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_queries));
  s.database.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_queries), perm.end());
  std::sort(s.queries.begin(), s.queries.end());
  std::sort(s.database.begin(), s.database.end());
  return s;
}

}  // namespace ddh
