#pragma once

// Self-supervised pairwise labels from feature-space neighborhoods.
//
// Construction runs in three steps:
//   1. ranking lists: the k1 most cosine-similar items of every item;
//   2. expansion: for item i, score every j by |L_i ∩ L_j| (j = i included),
//      keep the k2 best-scoring lists and take their union L'_i;
//   3. pair set: s_ij = +1 iff j ∈ L'_i or i ∈ L'_j, i != j. Every other pair
//      is an implicit negative (s_ij = -1).
//
// Ties are always broken by ascending item index, so every step is
// deterministic and independent of the thread count.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ddh/types.hpp"

namespace ddh {

using NeighborList = std::vector<std::uint32_t>;

struct RankingLists {
  std::size_t k1 = 0;
  // lists[i] holds min(k1, n-1) distinct indices != i, by descending cosine
  // similarity to item i.
  std::vector<NeighborList> lists;

  std::size_t n_items() const { return lists.size(); }
};

// Throws DataError naming the first zero-norm row, DomainError if k1 == 0.
RankingLists build_ranking_lists(const FeatureMatrix& features, std::size_t k1, unsigned threads = 1);

// Returns L'_i for every i as a sorted index set. L'_i may contain i itself.
// k2 is clamped to n_items. Throws DomainError if k2 == 0.
std::vector<NeighborList> expand_neighbors(const RankingLists& rankings, std::size_t k2, unsigned threads = 1);

// Symmetric positive adjacency without self loops.
class PairSet {
 public:
  PairSet() = default;
  // Validates and takes ownership of per-item sorted adjacency lists. Throws
  // DataError if a list is unsorted, has duplicates, contains its own index,
  // points out of range, or the adjacency is not symmetric.
  explicit PairSet(std::vector<NeighborList> positives);

  std::size_t n_items() const { return positives_.size(); }
  const NeighborList& positives(std::size_t i) const { return positives_[i]; }
  bool is_positive(std::size_t i, std::size_t j) const;
  // s_ij in {-1, +1}.
  int similarity(std::size_t i, std::size_t j) const { return is_positive(i, j) ? 1 : -1; }
  // Number of unordered positive pairs.
  std::size_t n_pairs() const;

  friend bool operator==(const PairSet&, const PairSet&) = default;

 private:
  std::vector<NeighborList> positives_;
};

// Symmetrizes the expanded lists and drops the diagonal. Throws DataError on
// an index >= n_items.
PairSet build_pair_set(const std::vector<NeighborList>& expanded, std::size_t n_items);

// Convenience wrapper for the full construction.
PairSet build_neighborhood(const FeatureMatrix& features, std::size_t k1, std::size_t k2, unsigned threads = 1);

// Fraction of positive pairs whose endpoints carry the same label. Diagnostic
// only. Throws DomainError if there are no positive pairs, ShapeError if the
// label count differs from n_items.
double label_precision(const PairSet& pairs, const LabelSet& truth);

// Pair file (.ddhp): "DDHP", version 0x01, u64 n_items, then per item a u32
// count followed by that many sorted u32 indices.
void write_pairs(const PairSet& pairs, const std::string& path);
PairSet load_pairs(const std::string& path);

}  // namespace ddh
