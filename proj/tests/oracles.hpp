#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Deliberately naive: full sorts, std::set unions, double loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ddh/hash_model.hpp"
#include "ddh/neighborhood.hpp"
#include "ddh/training.hpp"
#include "ddh/types.hpp"
#include "ddh/vector_math.hpp"

namespace ddh::oracle {

inline std::vector<NeighborList> brute_force_rankings(const FeatureMatrix& f, std::size_t k1) {
  const std::size_t n = f.n_items();
  std::vector<NeighborList> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) all.emplace_back(cosine_similarity(f.row(i), f.row(j)), static_cast<std::uint32_t>(j));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::size_t k = 0; k < std::min(k1, all.size()); ++k) out[i].push_back(all[k].second);
  }
  return out;
}

inline std::vector<NeighborList> brute_force_expand(const std::vector<NeighborList>& lists, std::size_t k2) {
  const std::size_t n = lists.size();
  std::vector<NeighborList> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::uint32_t> li(lists[i].begin(), lists[i].end());
    std::vector<std::pair<std::size_t, std::uint32_t>> num;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t c = 0;
      for (auto m : lists[j]) c += li.count(m);
      num.emplace_back(c, static_cast<std::uint32_t>(j));
    }
    std::stable_sort(num.begin(), num.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::set<std::uint32_t> merged;
    for (std::size_t k = 0; k < std::min(k2, n); ++k) {
      const auto& lj = lists[num[k].second];
      merged.insert(lj.begin(), lj.end());
    }
    out[i].assign(merged.begin(), merged.end());
  }
  return out;
}

inline std::vector<double> naive_forward(const HashModel& m, std::span<const double> x) {
  std::vector<double> z(m.code_len());
  for (std::size_t l = 0; l < m.code_len(); ++l) {
    double s = 0.0;
    for (std::size_t d = 0; d < m.dim(); ++d) s += m.weight(d, l) * x[d];
    z[l] = s + m.bias()[l];
  }
  return z;
}

// Direct transcription of the batch objective.
inline double naive_objective(std::span<const std::size_t> batch, const FeatureMatrix& f, const PairSet& pairs,
                              const HashModel& m, const TrainConfig& cfg) {
  const double L = static_cast<double>(m.code_len());
  std::vector<std::vector<double>> z;
  for (auto i : batch) z.push_back(naive_forward(m, f.row(i)));
  double pair_term = 0.0;
  for (std::size_t a = 0; a < batch.size(); ++a) {
    for (std::size_t b = a + 1; b < batch.size(); ++b) {
      double theta = 0.0;
      for (std::size_t l = 0; l < z[a].size(); ++l) theta += z[a][l] * z[b][l];
      const double s = pairs.is_positive(batch[a], batch[b]) ? 1.0 : -1.0;
      pair_term += 0.5 * (theta / L - s) * (theta / L - s);
    }
  }
  double quant = 0.0;
  for (const auto& za : z) {
    for (double v : za) {
      const double bit = v >= 0.0 ? 1.0 : -1.0;
      quant += 0.5 * (v - bit) * (v - bit);
    }
  }
  double reg = 0.0;
  for (double w : m.weights()) reg += w * w;
  for (double c : m.bias()) reg += c * c;
  return pair_term + cfg.lambda1 * quant + 0.5 * cfg.lambda2 * reg;
}

// Central differences of `f` over every parameter of `m` (weights then bias).
inline std::vector<double> finite_difference_gradient(const HashModel& m, double h,
                                                      const std::function<double(const HashModel&)>& f) {
  std::vector<double> grad;
  const std::size_t nw = m.weights().size();
  for (std::size_t k = 0; k < nw + m.bias().size(); ++k) {
    HashModel plus = m;
    HashModel minus = m;
    double& p = k < nw ? plus.mutable_weights()[k] : plus.mutable_bias()[k - nw];
    double& q = k < nw ? minus.mutable_weights()[k] : minus.mutable_bias()[k - nw];
    p += h;
    q -= h;
    grad.push_back((f(plus) - f(minus)) / (2.0 * h));
  }
  return grad;
}

// AP straight from the definition on a 0/1 relevance vector.
inline double brute_force_ap(const std::vector<int>& relevant, std::size_t cutoff, std::size_t total_relevant) {
  double sum = 0.0;
  for (std::size_t k = 0; k < std::min(cutoff, relevant.size()); ++k) {
    if (!relevant[k]) continue;
    std::size_t hits = 0;
    for (std::size_t t = 0; t <= k; ++t) hits += relevant[t] ? 1 : 0;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(std::min(cutoff, total_relevant));
}

inline long signed_inner_product(const std::vector<int>& a, const std::vector<int>& b) {
  long s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline std::vector<int> random_signs(std::size_t len, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> v(len);
  for (auto& s : v) s = coin(rng) ? 1 : -1;
  return v;
}

inline FeatureMatrix random_features(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n * d);
  for (auto& x : v) x = g(rng);
  return FeatureMatrix(n, d, std::move(v));
}

inline std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("ddh_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace ddh::oracle
