#include "ddh/retrieval.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ddh/errors.hpp"
#include "ddh/parallel.hpp"

namespace ddh {

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw ShapeError("hamming_distance: codes differ in length");
  std::size_t dist = 0;
  std::size_t k = 0;
  for (; k + 8 <= a.size(); k += 8) {
    std::uint64_t wa = 0;
    std::uint64_t wb = 0;
    std::memcpy(&wa, a.data() + k, 8);
    std::memcpy(&wb, b.data() + k, 8);
    dist += static_cast<std::size_t>(std::popcount(wa ^ wb));
  }
  for (; k < a.size(); ++k) dist += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a[k] ^ b[k])));
  return dist;
}

std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& b) {
  if (a.size() != b.size()) throw ShapeError("hamming_distance: codes differ in length");
  return hamming_distance(a.bytes(), b.bytes());
}

RetrievalResult retrieve(const BinaryCodeSet& queries, const BinaryCodeSet& database, const RetrievalOptions& opts) {
  if (opts.cutoff == 0) throw DomainError("retrieval cutoff must be at least 1");
  if (queries.code_len() != database.code_len()) throw ShapeError("query and database code lengths differ");
  if (opts.exclude_self && opts.query_offset + queries.n_items() > database.n_items()) {
    throw ShapeError("self-retrieval queries run past the end of the database");
  }
  const std::size_t n_db = database.n_items();
  const std::size_t L = database.code_len();

  RetrievalResult out;
  out.cutoff = opts.cutoff;
  out.exclude_self = opts.exclude_self;
  out.query_offset = opts.query_offset;
  out.ranked.resize(queries.n_items());
  out.distances.resize(queries.n_items());

  parallel_for(queries.n_items(), opts.threads, [&](std::size_t q) {
    // Counting sort on distance keeps ascending index order within a bucket.
    std::vector<std::uint32_t> dist(n_db);
    std::vector<std::size_t> bucket_start(L + 2, 0);
    const std::size_t self = opts.exclude_self ? q + opts.query_offset : n_db;
    auto qrow = queries.row(q);
    for (std::size_t d = 0; d < n_db; ++d) {
      if (d == self) continue;
      dist[d] = static_cast<std::uint32_t>(hamming_distance(qrow, database.row(d)));
      ++bucket_start[dist[d] + 1];
    }
    for (std::size_t h = 1; h < bucket_start.size(); ++h) bucket_start[h] += bucket_start[h - 1];
    const std::size_t total = bucket_start.back();
    std::vector<std::uint32_t> order(total);
    for (std::size_t d = 0; d < n_db; ++d) {
      if (d == self) continue;
      order[bucket_start[dist[d]]++] = static_cast<std::uint32_t>(d);
    }
    order.resize(std::min(total, opts.cutoff));
    auto& ds = out.distances[q];
    ds.reserve(order.size());
    for (auto d : order) ds.push_back(dist[d]);
    out.ranked[q] = std::move(order);
  });
  return out;
}

std::size_t count_relevant(std::int64_t query_label, const LabelSet& db_labels, std::ptrdiff_t self_index) {
  std::size_t n = 0;
  for (std::size_t d = 0; d < db_labels.n_items(); ++d) {
    if (static_cast<std::ptrdiff_t>(d) == self_index) continue;
    if (db_labels[d] == query_label) ++n;
  }
  return n;
}

double average_precision(std::span<const std::uint32_t> ranked, std::int64_t query_label, const LabelSet& db_labels,
                         std::size_t cutoff, std::size_t total_relevant) {
  if (total_relevant == 0) throw DomainError("average precision undefined without relevant items");
  const std::size_t depth = std::min(cutoff, ranked.size());
  double precision_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    if (ranked[k] >= db_labels.n_items()) throw ShapeError("ranked index outside database labels");
    if (db_labels[ranked[k]] == query_label) {
      ++hits;
      precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return precision_sum / static_cast<double>(std::min(cutoff, total_relevant));
}

double mean_average_precision(const RetrievalResult& result, const LabelSet& query_labels, const LabelSet& db_labels,
                              std::size_t cutoff) {
  if (query_labels.n_items() != result.n_queries()) throw ShapeError("query label count differs from query count");
  if (cutoff == 0) throw DomainError("mAP cutoff must be at least 1");
  double ap_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t q = 0; q < result.n_queries(); ++q) {
    const std::size_t relevant = count_relevant(query_labels[q], db_labels, result.self_index(q));
    if (relevant == 0) continue;
    ap_sum += average_precision(result.ranked[q], query_labels[q], db_labels, cutoff, relevant);
    ++counted;
  }
  if (counted == 0) throw DomainError("no query has a relevant database item");
  return ap_sum / static_cast<double>(counted);
}

PrCurveAccumulator::PrCurveAccumulator(std::size_t ranking_len)
    : recall_sum_(ranking_len, 0.0), precision_sum_(ranking_len, 0.0) {}

void PrCurveAccumulator::add(std::span<const std::uint32_t> ranked, std::int64_t query_label,
                             const LabelSet& db_labels, std::size_t total_relevant) {
  if (ranked.size() != recall_sum_.size()) throw DomainError("precision/recall needs a full ranking");
  if (total_relevant == 0) return;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (db_labels[ranked[k]] == query_label) ++hits;
    recall_sum_[k] += static_cast<double>(hits) / static_cast<double>(total_relevant);
    precision_sum_[k] += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  ++queries_;
}

std::vector<PrPoint> PrCurveAccumulator::curve() const {
  if (queries_ == 0) throw DomainError("no query has a relevant database item");
  std::vector<PrPoint> out(recall_sum_.size());
  const double nq = static_cast<double>(queries_);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {k + 1, recall_sum_[k] / nq, precision_sum_[k] / nq};
  }
  return out;
}

std::vector<PrPoint> precision_recall_curve(const RetrievalResult& result, const LabelSet& query_labels,
                                            const LabelSet& db_labels) {
  if (query_labels.n_items() != result.n_queries()) throw ShapeError("query label count differs from query count");
  const std::size_t full = db_labels.n_items() - (result.exclude_self ? 1 : 0);
  PrCurveAccumulator acc(full);
  for (std::size_t q = 0; q < result.n_queries(); ++q) {
    acc.add(result.ranked[q], query_labels[q], db_labels,
            count_relevant(query_labels[q], db_labels, result.self_index(q)));
  }
  return acc.curve();
}

void write_pr_curve(std::span<const PrPoint> curve, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "rank,recall,precision\n";
  char buf[96];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", p.rank, p.recall, p.precision);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path);
}

std::string eval_summary(double map_value, std::size_t cutoff, std::size_t n_queries, std::size_t bits) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "map@%zu=%.6f queries=%zu bits=%zu", cutoff, map_value, n_queries, bits);
  return buf;
}

}  // namespace ddh
