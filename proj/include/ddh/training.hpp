#pragma once

// Pairwise + quantization objective over minibatches and the SGD loop that
// fits a HashModel to a PairSet.
//
// For a batch B with activations z_i = W^T x_i + c and codes b_i = sgn(z_i):
//
//   J(B) = sum_{i<j in B} 1/2 (z_i.z_j / L - s_ij)^2
//        + lambda1 * sum_{i in B} 1/2 |z_i - b_i|^2
//        + lambda2 / 2 * (|W|_F^2 + |c|^2)
//
// with s_ij = +1 for pairs in the PairSet and -1 otherwise. In the gradient b
// is held constant at the current sign of z.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddh/hash_model.hpp"
#include "ddh/neighborhood.hpp"
#include "ddh/types.hpp"

namespace ddh {

struct TrainConfig {
  double lambda1 = 15.0;
  double lambda2 = 1e-5;
  double learning_rate = 1e-3;
  std::size_t batch_size = 128;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;

  // Throws DomainError naming the offending field.
  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;         // 1-based
  double objective = 0.0;        // mean batch objective
  double quantization = 0.0;     // mean per-item 1/2 |z - b|^2
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
};

// 1/2 (z_i.z_j / L - s)^2.
double pair_loss(std::span<const double> zi, std::span<const double> zj, int s, std::size_t code_len);

// 1/2 |z - b|^2. Throws ContractError unless b == sign_binarize(z).
double quantization_loss(std::span<const double> z, std::span<const int> b);

double batch_objective(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                       const HashModel& model, const TrainConfig& cfg);

struct Gradient {
  std::vector<double> weights;  // D x L row-major, same layout as HashModel
  std::vector<double> bias;
};

Gradient batch_gradient(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                        const HashModel& model, const TrainConfig& cfg);

// dJ/dz_a for every batch position a, |batch| x L row-major. Each pair term
// contributes to both of its endpoints.
std::vector<double> activation_gradient(std::span<const std::size_t> batch, const FeatureMatrix& features,
                                        const PairSet& pairs, const HashModel& model, const TrainConfig& cfg);

// Start point used by train(): W ~ N(0, 1/dim), c = 0 from a generator seeded
// with seed.
HashModel initial_model(std::size_t dim, std::size_t code_len, std::uint64_t seed);

struct TrainResult {
  HashModel model;
  TrainReport report;
};

// Plain SGD over shuffled consecutive minibatches:
//   params -= learning_rate * batch_gradient / |batch|
// i.e. the step follows the per-item mean of the batch objective. A trailing
// batch with a single item is skipped. Throws DivergenceError on a non-finite
// objective.
TrainResult train(const FeatureMatrix& features, const PairSet& pairs, const TrainConfig& cfg, std::size_t code_len);

// One line per epoch: "epoch=<k> objective=<mean> quant=<mean> seconds=<t>".
void write_report(const TrainReport& report, const std::string& path);

}  // namespace ddh
