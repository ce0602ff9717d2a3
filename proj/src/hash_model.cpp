#include "ddh/hash_model.hpp"

#include <cmath>

#include "binary_stream.hpp"
#include "ddh/errors.hpp"
#include "ddh/parallel.hpp"

namespace ddh {

namespace {
constexpr std::string_view kModelMagic = "DDHM";
}

HashModel::HashModel(std::size_t dim, std::size_t code_len)
    : dim_(dim), code_len_(code_len), weights_(dim * code_len, 0.0), bias_(code_len, 0.0) {
  if (dim == 0 || code_len == 0) throw DomainError("hash model needs dim >= 1 and code_len >= 1");
}

HashModel::HashModel(std::size_t dim, std::size_t code_len, std::vector<double> weights, std::vector<double> bias)
    : dim_(dim), code_len_(code_len), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (dim == 0 || code_len == 0) throw DomainError("hash model needs dim >= 1 and code_len >= 1");
  if (weights_.size() != dim * code_len || bias_.size() != code_len) {
    throw ShapeError("hash model parameter sizes do not match " + std::to_string(dim) + "x" +
                     std::to_string(code_len));
  }
  if (!all_finite()) throw DataError("hash model has non-finite parameters");
}

bool HashModel::all_finite() const {
  for (double w : weights_) {
    if (!std::isfinite(w)) return false;
  }
  for (double c : bias_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

void forward_into(const HashModel& model, std::span<const double> x, std::span<double> z) {
  if (x.size() != model.dim()) {
    throw ShapeError("input has dimension " + std::to_string(x.size()) + ", model expects " +
                     std::to_string(model.dim()));
  }
  const std::size_t L = model.code_len();
  const auto& w = model.weights();
  std::copy(model.bias().begin(), model.bias().end(), z.begin());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double xd = x[d];
    const double* row = w.data() + d * L;
    for (std::size_t l = 0; l < L; ++l) z[l] += xd * row[l];
  }
}

std::vector<double> forward(const HashModel& model, std::span<const double> x) {
  std::vector<double> z(model.code_len());
  forward_into(model, x, z);
  return z;
}

std::vector<int> sign_binarize(std::span<const double> u) {
  std::vector<int> b(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) b[k] = u[k] >= 0.0 ? 1 : -1;
  return b;
}

BinaryCodeSet encode(const HashModel& model, const FeatureMatrix& features, unsigned threads) {
  if (features.dim() != model.dim()) {
    throw ShapeError("features have dimension " + std::to_string(features.dim()) + ", model expects " +
                     std::to_string(model.dim()));
  }
  const std::size_t L = model.code_len();
  const std::size_t rb = packed_bytes(L);
  std::vector<std::uint8_t> packed(features.n_items() * rb, 0);
  parallel_for(features.n_items(), threads, [&](std::size_t i) {
    std::vector<double> z(L);
    forward_into(model, features.row(i), z);
    std::uint8_t* out = packed.data() + i * rb;
    for (std::size_t l = 0; l < L; ++l) {
      if (z[l] >= 0.0) out[l >> 3] |= static_cast<std::uint8_t>(0x80u >> (l & 7));
    }
  });
  return BinaryCodeSet(features.n_items(), L, std::move(packed));
}

HashModel random_init(std::size_t dim, std::size_t code_len, double stddev, std::mt19937_64& rng) {
  HashModel model(dim, code_len);
  std::normal_distribution<double> gauss(0.0, stddev);
  for (auto& w : model.mutable_weights()) w = gauss(rng);
  return model;
}

HashModel lsh_init(std::size_t dim, std::size_t code_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_init(dim, code_len, 1.0, rng);
}

void write_model(const HashModel& model, const std::string& path) {
  detail::BinaryWriter out(path);
  out.magic(kModelMagic);
  out.u32(static_cast<std::uint32_t>(model.dim()));
  out.u32(static_cast<std::uint32_t>(model.code_len()));
  for (double w : model.weights()) out.f32(static_cast<float>(w));
  for (double c : model.bias()) out.f32(static_cast<float>(c));
  out.close();
}

HashModel load_model(const std::string& path) {
  detail::BinaryReader in(path);
  in.expect_magic(kModelMagic);
  const std::uint32_t dim = in.u32();
  const std::uint32_t len = in.u32();
  if (dim == 0 || len == 0) throw FormatError(path + ": header declares an empty model");
  std::vector<double> w(static_cast<std::size_t>(dim) * len);
  std::vector<double> c(len);
  for (auto& v : w) v = in.f32();
  for (auto& v : c) v = in.f32();
  in.expect_eof();
  return HashModel(dim, len, std::move(w), std::move(c));
}

}  // namespace ddh
