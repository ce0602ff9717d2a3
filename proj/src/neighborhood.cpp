#include "ddh/neighborhood.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "binary_stream.hpp"
#include "ddh/errors.hpp"
#include "ddh/parallel.hpp"
#include "ddh/vector_math.hpp"

namespace ddh {

namespace {

constexpr std::string_view kPairMagic = "DDHP";

struct Candidate {
  double score;
  std::uint32_t index;
};

// Descending score, ascending index.
bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.index < b.index;
}

}  // namespace

RankingLists build_ranking_lists(const FeatureMatrix& features, std::size_t k1, unsigned threads) {
  if (k1 == 0) throw DomainError("k1 must be at least 1");
  const std::size_t n = features.n_items();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw DataError("too many items for u32 indices");

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = norm(features.row(i));
    if (norms[i] == 0.0) throw DataError("feature row " + std::to_string(i) + " has zero norm");
  }

  RankingLists out;
  out.k1 = k1;
  out.lists.resize(n);
  const std::size_t keep = std::min(k1, n - 1);

  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<Candidate> cand;
    cand.reserve(n - 1);
    auto xi = features.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      // Same expression as cosine_similarity with cached norms.
      const double sim = std::clamp(dot(xi, features.row(j)) / (norms[i] * norms[j]), -1.0, 1.0);
      cand.push_back({sim, static_cast<std::uint32_t>(j)});
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(), ranks_before);
    auto& list = out.lists[i];
    list.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) list.push_back(cand[k].index);
  });
  return out;
}

std::vector<NeighborList> expand_neighbors(const RankingLists& rankings, std::size_t k2, unsigned threads) {
  if (k2 == 0) throw DomainError("k2 must be at least 1");
  const std::size_t n = rankings.n_items();
  const std::size_t keep = std::min(k2, n);

  // containing[m] = items whose ranking list contains m.
  std::vector<NeighborList> containing(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto m : rankings.lists[j]) containing[m].push_back(static_cast<std::uint32_t>(j));
  }

  std::vector<NeighborList> expanded(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::uint32_t> overlap(n, 0);
    NeighborList touched;
    for (auto m : rankings.lists[i]) {
      for (auto j : containing[m]) {
        if (overlap[j]++ == 0) touched.push_back(j);
      }
    }
    std::vector<Candidate> cand;
    cand.reserve(touched.size());
    for (auto j : touched) cand.push_back({static_cast<double>(overlap[j]), j});
    std::sort(cand.begin(), cand.end(), ranks_before);
    if (cand.size() > keep) cand.resize(keep);
    // Lists with zero overlap fill any remaining slots in index order.
    for (std::uint32_t j = 0; cand.size() < keep && j < n; ++j) {
      if (overlap[j] == 0) cand.push_back({0.0, j});
    }

    NeighborList& merged = expanded[i];
    for (const auto& c : cand) {
      const auto& lj = rankings.lists[c.index];
      merged.insert(merged.end(), lj.begin(), lj.end());
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  });
  return expanded;
}

PairSet::PairSet(std::vector<NeighborList> positives) : positives_(std::move(positives)) {
  const std::size_t n = positives_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = positives_[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k] >= n) throw DataError("pair index " + std::to_string(p[k]) + " out of range");
      if (p[k] == i) throw DataError("self pair at item " + std::to_string(i));
      if (k > 0 && p[k - 1] >= p[k]) throw DataError("unsorted or duplicate positives at item " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j : positives_[i]) {
      if (!is_positive(j, i)) {
        throw DataError("asymmetric pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

bool PairSet::is_positive(std::size_t i, std::size_t j) const {
  const auto& p = positives_[i];
  return std::binary_search(p.begin(), p.end(), static_cast<std::uint32_t>(j));
}

std::size_t PairSet::n_pairs() const {
  std::size_t total = 0;
  for (const auto& p : positives_) total += p.size();
  return total / 2;
}

PairSet build_pair_set(const std::vector<NeighborList>& expanded, std::size_t n_items) {
  if (expanded.size() != n_items) throw DataError("expanded list count differs from n_items");
  std::vector<NeighborList> adj(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    for (auto j : expanded[i]) {
      if (j >= n_items) throw DataError("neighbor index " + std::to_string(j) + " out of range");
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return PairSet(std::move(adj));
}

PairSet build_neighborhood(const FeatureMatrix& features, std::size_t k1, std::size_t k2, unsigned threads) {
  const auto rankings = build_ranking_lists(features, k1, threads);
  return build_pair_set(expand_neighbors(rankings, k2, threads), features.n_items());
}

double label_precision(const PairSet& pairs, const LabelSet& truth) {
  if (truth.n_items() != pairs.n_items()) throw ShapeError("label count differs from pair set size");
  std::size_t total = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < pairs.n_items(); ++i) {
    for (auto j : pairs.positives(i)) {
      if (j <= i) continue;
      ++total;
      if (truth[i] == truth[j]) ++agree;
    }
  }
  if (total == 0) throw DomainError("label precision undefined without positive pairs");
  return static_cast<double>(agree) / static_cast<double>(total);
}

void write_pairs(const PairSet& pairs, const std::string& path) {
  detail::BinaryWriter out(path);
  out.magic(kPairMagic);
  out.u64(pairs.n_items());
  for (std::size_t i = 0; i < pairs.n_items(); ++i) {
    const auto& p = pairs.positives(i);
    out.u32(static_cast<std::uint32_t>(p.size()));
    for (auto j : p) out.u32(j);
  }
  out.close();
}

PairSet load_pairs(const std::string& path) {
  detail::BinaryReader in(path);
  in.expect_magic(kPairMagic);
  const std::uint64_t n = in.u64();
  std::vector<NeighborList> adj(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t count = in.u32();
    if (count >= n) throw FormatError(path + ": neighbor count exceeds item count at item " + std::to_string(i));
    adj[i].resize(count);
    for (auto& j : adj[i]) j = in.u32();
  }
  in.expect_eof();
  return PairSet(std::move(adj));
}

}  // namespace ddh
