#include "ddh/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "ddh/errors.hpp"
#include "ddh/vector_math.hpp"

namespace ddh {

namespace {

struct BatchEval {
  double objective = 0.0;
  double quantization = 0.0;  // unweighted sum of 1/2 |z - b|^2
};

void check_batch(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                 const HashModel& model) {
  if (batch.size() < 2) throw DomainError("batch needs at least two items");
  if (features.dim() != model.dim()) throw ShapeError("feature dimension differs from model dimension");
  if (pairs.n_items() != features.n_items()) throw ShapeError("pair set and features cover different item counts");
  for (auto i : batch) {
    if (i >= features.n_items()) throw DomainError("batch index " + std::to_string(i) + " out of range");
  }
}

// Shared forward/backward pass. dz_out and grad may be null.
BatchEval evaluate_batch(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                         const HashModel& model, const TrainConfig& cfg, std::vector<double>* dz_out,
                         Gradient* grad) {
  check_batch(batch, features, pairs, model);
  const std::size_t B = batch.size();
  const std::size_t L = model.code_len();
  const std::size_t D = model.dim();
  const double inv_l = 1.0 / static_cast<double>(L);

  std::vector<double> z(B * L);
  for (std::size_t a = 0; a < B; ++a) {
    forward_into(model, features.row(batch[a]), std::span<double>(z.data() + a * L, L));
  }
  auto za = [&](std::size_t a) { return std::span<const double>(z.data() + a * L, L); };

  const bool backward = grad || dz_out;
  std::vector<double> dz(backward ? B * L : 0, 0.0);
  BatchEval out;

  for (std::size_t a = 0; a < B; ++a) {
    for (std::size_t b = a + 1; b < B; ++b) {
      const double theta = dot(za(a), za(b));
      const double r = theta * inv_l - pairs.similarity(batch[a], batch[b]);
      out.objective += 0.5 * r * r;
      if (backward) {
        const double coef = r * inv_l;
        double* ga = dz.data() + a * L;
        double* gb = dz.data() + b * L;
        const double* zap = z.data() + a * L;
        const double* zbp = z.data() + b * L;
        for (std::size_t l = 0; l < L; ++l) {
          ga[l] += coef * zbp[l];
          gb[l] += coef * zap[l];
        }
      }
    }
  }

  for (std::size_t a = 0; a < B; ++a) {
    double q = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const double zl = z[a * L + l];
      const double diff = zl - (zl >= 0.0 ? 1.0 : -1.0);
      q += diff * diff;
      if (backward) dz[a * L + l] += cfg.lambda1 * diff;
    }
    out.quantization += 0.5 * q;
  }
  out.objective += cfg.lambda1 * out.quantization;

  const auto& w = model.weights();
  const auto& c = model.bias();
  const double reg = std::inner_product(w.begin(), w.end(), w.begin(), 0.0) +
                     std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
  out.objective += 0.5 * cfg.lambda2 * reg;

  if (grad) {
    grad->weights.assign(D * L, 0.0);
    grad->bias.assign(L, 0.0);
    for (std::size_t a = 0; a < B; ++a) {
      auto x = features.row(batch[a]);
      const double* g = dz.data() + a * L;
      for (std::size_t d = 0; d < D; ++d) {
        double* row = grad->weights.data() + d * L;
        for (std::size_t l = 0; l < L; ++l) row[l] += x[d] * g[l];
      }
      for (std::size_t l = 0; l < L; ++l) grad->bias[l] += g[l];
    }
    for (std::size_t k = 0; k < w.size(); ++k) grad->weights[k] += cfg.lambda2 * w[k];
    for (std::size_t l = 0; l < L; ++l) grad->bias[l] += cfg.lambda2 * c[l];
  }
  if (dz_out) *dz_out = std::move(dz);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) throw DomainError("lambda1 must be finite and >= 0");
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2)) throw DomainError("lambda2 must be finite and >= 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw DomainError("learning rate must be finite and >= 0");
  }
  if (batch_size < 2) throw DomainError("batch size must be at least 2");
  if (epochs < 1) throw DomainError("epochs must be at least 1");
}

double pair_loss(std::span<const double> zi, std::span<const double> zj, int s, std::size_t code_len) {
  if (zi.size() != zj.size()) throw ShapeError("pair_loss: activations differ in length");
  const double r = dot(zi, zj) / static_cast<double>(code_len) - s;
  return 0.5 * r * r;
}

double quantization_loss(std::span<const double> z, std::span<const int> b) {
  if (z.size() != b.size()) throw ShapeError("quantization_loss: length mismatch");
  double q = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const int expected = z[k] >= 0.0 ? 1 : -1;
    if (b[k] != expected) throw ContractError("quantization_loss: code is not the sign of z at " + std::to_string(k));
    const double diff = z[k] - b[k];
    q += diff * diff;
  }
  return 0.5 * q;
}

double batch_objective(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                       const HashModel& model, const TrainConfig& cfg) {
  return evaluate_batch(batch, features, pairs, model, cfg, nullptr, nullptr).objective;
}

Gradient batch_gradient(std::span<const std::size_t> batch, const FeatureMatrix& features, const PairSet& pairs,
                        const HashModel& model, const TrainConfig& cfg) {
  Gradient g;
  evaluate_batch(batch, features, pairs, model, cfg, nullptr, &g);
  return g;
}

std::vector<double> activation_gradient(std::span<const std::size_t> batch, const FeatureMatrix& features,
                                        const PairSet& pairs, const HashModel& model, const TrainConfig& cfg) {
  std::vector<double> dz;
  evaluate_batch(batch, features, pairs, model, cfg, &dz, nullptr);
  return dz;
}

HashModel initial_model(std::size_t dim, std::size_t code_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_init(dim, code_len, 1.0 / std::sqrt(static_cast<double>(dim)), rng);
}

TrainResult train(const FeatureMatrix& features, const PairSet& pairs, const TrainConfig& cfg, std::size_t code_len) {
  cfg.validate();
  if (pairs.n_items() != features.n_items()) throw ShapeError("pair set and features cover different item counts");
  const std::size_t n = features.n_items();
  if (n < 2) throw DomainError("training needs at least two items");

  std::mt19937_64 rng(cfg.seed);
  TrainResult result{random_init(features.dim(), code_len, 1.0 / std::sqrt(static_cast<double>(features.dim())), rng),
                     {}};
  HashModel& model = result.model;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t step = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    double objective_sum = 0.0;
    double quant_sum = 0.0;
    std::size_t batches = 0;
    std::size_t items = 0;

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, n - start);
      if (len < 2) continue;
      std::span<const std::size_t> batch(order.data() + start, len);
      Gradient grad;
      const BatchEval ev = evaluate_batch(batch, features, pairs, model, cfg, nullptr, &grad);
      ++step;
      if (!std::isfinite(ev.objective)) {
        throw DivergenceError("non-finite objective at epoch " + std::to_string(epoch) + ", step " +
                              std::to_string(step));
      }
      objective_sum += ev.objective;
      quant_sum += ev.quantization;
      ++batches;
      items += len;

      // Step on the per-item mean of the batch objective.
      const double step_size = cfg.learning_rate / static_cast<double>(len);
      auto& w = model.mutable_weights();
      auto& c = model.mutable_bias();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= step_size * grad.weights[k];
      for (std::size_t l = 0; l < c.size(); ++l) c[l] -= step_size * grad.bias[l];
    }
    if (!model.all_finite()) {
      throw DivergenceError("non-finite parameters after epoch " + std::to_string(epoch) + ", step " +
                            std::to_string(step));
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.report.epochs.push_back({epoch, objective_sum / static_cast<double>(batches),
                                    quant_sum / static_cast<double>(items), secs});
  }
  return result;
}

void write_report(const TrainReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  for (const auto& e : report.epochs) {
    out << "epoch=" << e.epoch << " objective=" << e.objective << " quant=" << e.quantization
        << " seconds=" << e.seconds << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace ddh
