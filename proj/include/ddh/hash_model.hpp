#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ddh/types.hpp"

namespace ddh {

// Affine hash layer z = W^T x + c with b = sgn(z).
class HashModel {
 public:
  HashModel() = default;
  // Zero-initialized model. Throws DomainError if either size is zero.
  HashModel(std::size_t dim, std::size_t code_len);
  // weights is D x L row-major, bias has length L. Throws ShapeError on size
  // mismatch and DataError on non-finite parameters.
  HashModel(std::size_t dim, std::size_t code_len, std::vector<double> weights, std::vector<double> bias);

  std::size_t dim() const { return dim_; }
  std::size_t code_len() const { return code_len_; }

  // W(d, l): weight from input d to output bit l.
  double weight(std::size_t d, std::size_t l) const { return weights_[d * code_len_ + l]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  std::vector<double>& mutable_weights() { return weights_; }
  std::vector<double>& mutable_bias() { return bias_; }

  bool all_finite() const;

  friend bool operator==(const HashModel&, const HashModel&) = default;

 private:
  std::size_t dim_ = 0;
  std::size_t code_len_ = 0;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// z = W^T x + c. Throws ShapeError if x.size() != dim.
std::vector<double> forward(const HashModel& model, std::span<const double> x);
void forward_into(const HashModel& model, std::span<const double> x, std::span<double> z);

// +1 where u >= 0 (including -0.0), -1 elsewhere.
std::vector<int> sign_binarize(std::span<const double> u);

// Row i is sign_binarize(forward(model, x_i)). Works for any item, seen in
// training or not. Throws ShapeError on a dimension mismatch.
BinaryCodeSet encode(const HashModel& model, const FeatureMatrix& features, unsigned threads = 1);

// Random-hyperplane baseline: W_ij ~ N(0, 1) from a generator seeded with
// seed, c = 0.
HashModel lsh_init(std::size_t dim, std::size_t code_len, std::uint64_t seed);

// W_ij ~ N(0, stddev^2), c = 0, drawn from the caller's generator so
// training can keep using the same stream afterwards.
HashModel random_init(std::size_t dim, std::size_t code_len, double stddev, std::mt19937_64& rng);

// Model file (.ddhm): "DDHM", version 0x01, u32 dim, u32 code_len, float32 W
// row-major (D x L), float32 c (L). Parameters round to float32 on write.
void write_model(const HashModel& model, const std::string& path);
HashModel load_model(const std::string& path);

}  // namespace ddh
