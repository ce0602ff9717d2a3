#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddh/types.hpp"

namespace ddh {

// Number of differing bits. Padding bits are zero in every well-formed code,
// so they never contribute. Throws ShapeError on differing byte lengths.
std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& b);

struct RetrievalOptions {
  std::size_t cutoff = 1000;
  // Self-retrieval: query q is database item q + query_offset and is skipped
  // in its own ranking.
  bool exclude_self = false;
  std::size_t query_offset = 0;
  unsigned threads = 1;
};

// Per query: database indices by ascending Hamming distance, ties by
// ascending index, truncated at the cutoff.
struct RetrievalResult {
  std::size_t cutoff = 0;
  bool exclude_self = false;
  std::size_t query_offset = 0;
  std::vector<std::vector<std::uint32_t>> ranked;
  std::vector<std::vector<std::uint32_t>> distances;

  std::size_t n_queries() const { return ranked.size(); }
  // Database index of query q under self-retrieval, -1 otherwise.
  std::ptrdiff_t self_index(std::size_t q) const {
    return exclude_self ? static_cast<std::ptrdiff_t>(q + query_offset) : -1;
  }
};

// Exhaustive scan. Throws ShapeError on code-length mismatch (or, with
// exclude_self, queries running past the database) and DomainError if
// cutoff == 0.
RetrievalResult retrieve(const BinaryCodeSet& queries, const BinaryCodeSet& database, const RetrievalOptions& opts);

// Relevant items for a query: database labels equal to query_label, minus the
// query itself when self_index >= 0.
std::size_t count_relevant(std::int64_t query_label, const LabelSet& db_labels,
                           std::ptrdiff_t self_index = -1);

// AP of one ranking over its first `cutoff` entries, normalized by
// min(cutoff, total_relevant). total_relevant must be > 0.
double average_precision(std::span<const std::uint32_t> ranked, std::int64_t query_label, const LabelSet& db_labels,
                         std::size_t cutoff, std::size_t total_relevant);

// AP_q = sum over relevant ranks k <= R of precision@k, divided by
// min(R, relevant items for q in the database). mAP averages queries with at
// least one relevant item. Throws DomainError if no query has one.
double mean_average_precision(const RetrievalResult& result, const LabelSet& query_labels, const LabelSet& db_labels,
                              std::size_t cutoff);

struct PrPoint {
  std::size_t rank = 0;  // 1-based
  double recall = 0.0;
  double precision = 0.0;
};

// Streams queries into per-rank recall/precision sums so large query sets
// need not hold every full ranking at once.
class PrCurveAccumulator {
 public:
  explicit PrCurveAccumulator(std::size_t ranking_len);

  // ranked must be a full ranking of length ranking_len. Queries without
  // relevant items are skipped.
  void add(std::span<const std::uint32_t> ranked, std::int64_t query_label, const LabelSet& db_labels,
           std::size_t total_relevant);
  std::size_t n_queries() const { return queries_; }
  // Throws DomainError if no query was accumulated.
  std::vector<PrPoint> curve() const;

 private:
  std::size_t queries_ = 0;
  std::vector<double> recall_sum_;
  std::vector<double> precision_sum_;
};

// One point per rank, averaged over queries. Needs a full (untruncated)
// ranking; throws DomainError otherwise or if no query has a relevant item.
std::vector<PrPoint> precision_recall_curve(const RetrievalResult& result, const LabelSet& query_labels,
                                            const LabelSet& db_labels);

// CSV "rank,recall,precision" with a header line.
void write_pr_curve(std::span<const PrPoint> curve, const std::string& path);

// "map@<R>=<value> queries=<n> bits=<L>"
std::string eval_summary(double map_value, std::size_t cutoff, std::size_t n_queries, std::size_t bits);

}  // namespace ddh
