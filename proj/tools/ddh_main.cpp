// ddh: self-supervised binary hashing pipeline.
//
//   ddh synth  -> features + labels for a clustered benchmark
//   ddh labels -> pseudo pairwise labels (.ddhp) from features
//   ddh train  -> hash model (.ddhm) + per-epoch report
//   ddh encode -> binary codes (.ddhb)
//   ddh lsh    -> random-hyperplane baseline codes
//   ddh eval   -> mAP@R summary and optional precision/recall CSV

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ddh/errors.hpp"
#include "ddh/hash_model.hpp"
#include "ddh/io.hpp"
#include "ddh/neighborhood.hpp"
#include "ddh/retrieval.hpp"
#include "ddh/synth.hpp"
#include "ddh/training.hpp"

namespace {

constexpr const char* kVersion =
    "ddh 1.0.0 (features DDHF v1, codes DDHB v1, pairs DDHP v1, model DDHM v1)";

ddh::FeatureMatrix read_features(const std::string& path) {
  return ddh::load_features(path, ddh::feature_format_from_path(path));
}

struct LabelsArgs {
  std::string features;
  std::size_t k1 = 15;
  std::size_t k2 = 6;
  std::string out;
  std::string truth;
};

struct TrainArgs {
  std::string features;
  std::string pairs;
  std::size_t bits = 64;
  ddh::TrainConfig cfg;
  std::string out;
  std::string report;
};

struct EncodeArgs {
  std::string model;
  std::string features;
  std::string out;
};

struct EvalArgs {
  std::string query_codes;
  std::string db_codes;
  std::string query_labels;
  std::string db_labels;
  std::size_t map_at = 1000;
  std::string pr_out;
  bool self_retrieval = false;
};

struct LshArgs {
  std::string features;
  std::size_t bits = 64;
  std::uint64_t seed = 0;
  std::string out;
};

struct SynthArgs {
  ddh::SynthConfig cfg;
  std::string out_features;
  std::string out_labels;
  std::size_t queries = 0;
  std::uint64_t split_seed = 0;
  std::string out_query_features;
  std::string out_query_labels;
};

void run_labels(const LabelsArgs& a, unsigned threads) {
  const auto features = read_features(a.features);
  std::optional<ddh::LabelSet> truth;
  if (!a.truth.empty()) {
    truth = ddh::load_labels(a.truth);
    if (truth->n_items() != features.n_items()) throw ddh::ShapeError("--truth label count differs from feature rows");
  }
  const auto pairs = ddh::build_neighborhood(features, a.k1, a.k2, threads);
  ddh::write_pairs(pairs, a.out);
  std::cout << "items=" << pairs.n_items() << " positive_pairs=" << pairs.n_pairs() << '\n';
  if (truth) std::cout << "label_precision=" << ddh::label_precision(pairs, *truth) << '\n';
}

void run_train(const TrainArgs& a) {
  a.cfg.validate();
  const auto features = read_features(a.features);
  const auto pairs = ddh::load_pairs(a.pairs);
  auto result = ddh::train(features, pairs, a.cfg, a.bits);
  ddh::write_model(result.model, a.out);
  ddh::write_report(result.report, a.report.empty() ? a.out + ".report" : a.report);
  const auto& last = result.report.epochs.back();
  std::cout << "epochs=" << result.report.epochs.size() << " final_objective=" << last.objective
            << " final_quant=" << last.quantization << '\n';
}

void run_encode(const EncodeArgs& a, unsigned threads) {
  const auto model = ddh::load_model(a.model);
  const auto features = read_features(a.features);
  ddh::write_codes(ddh::encode(model, features, threads), a.out);
}

void run_lsh(const LshArgs& a, unsigned threads) {
  const auto features = read_features(a.features);
  const auto model = ddh::lsh_init(features.dim(), a.bits, a.seed);
  ddh::write_codes(ddh::encode(model, features, threads), a.out);
}

void run_eval(const EvalArgs& a, unsigned threads) {
  const auto queries = ddh::load_codes(a.query_codes);
  const auto db = ddh::load_codes(a.db_codes);
  const auto qlabels = ddh::load_labels(a.query_labels);
  const auto dblabels = ddh::load_labels(a.db_labels);
  if (qlabels.n_items() != queries.n_items()) throw ddh::ShapeError("query label count differs from query codes");
  if (dblabels.n_items() != db.n_items()) throw ddh::ShapeError("database label count differs from database codes");
  if (a.self_retrieval && queries.n_items() != db.n_items()) {
    throw ddh::ShapeError("--self-retrieval needs identical query and database sets");
  }

  const bool want_pr = !a.pr_out.empty();
  const std::size_t full = db.n_items() - (a.self_retrieval ? 1 : 0);
  std::optional<ddh::PrCurveAccumulator> pr;
  if (want_pr) pr.emplace(full);

  // Chunked so that full rankings for the PR curve stay bounded in memory.
  constexpr std::size_t kChunk = 256;
  double ap_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t start = 0; start < queries.n_items(); start += kChunk) {
    const std::size_t len = std::min(kChunk, queries.n_items() - start);
    std::vector<std::size_t> rows(len);
    for (std::size_t k = 0; k < len; ++k) rows[k] = start + k;
    ddh::RetrievalOptions opts;
    opts.cutoff = want_pr ? std::max(full, a.map_at) : a.map_at;
    opts.exclude_self = a.self_retrieval;
    opts.query_offset = start;
    opts.threads = threads;
    const auto result = ddh::retrieve(queries.select_rows(rows), db, opts);
    for (std::size_t q = 0; q < len; ++q) {
      const auto label = qlabels[start + q];
      const std::size_t relevant = ddh::count_relevant(label, dblabels, result.self_index(q));
      if (relevant == 0) continue;
      ap_sum += ddh::average_precision(result.ranked[q], label, dblabels, a.map_at, relevant);
      ++counted;
      if (pr) pr->add(result.ranked[q], label, dblabels, relevant);
    }
  }
  if (counted == 0) throw ddh::DomainError("no query has a relevant database item");
  std::cout << ddh::eval_summary(ap_sum / static_cast<double>(counted), a.map_at, counted, db.code_len()) << '\n';
  if (pr) {
    const auto curve = pr->curve();
    ddh::write_pr_curve(curve, a.pr_out);
  }
}

void run_synth(const SynthArgs& a) {
  const bool split = a.queries > 0;
  if (split && (a.out_query_features.empty() || a.out_query_labels.empty())) {
    throw ddh::DomainError("--queries needs --out-query-features and --out-query-labels");
  }
  const auto data = ddh::make_clusters(a.cfg);
  if (!split) {
    ddh::write_features(data.features, a.out_features, ddh::feature_format_from_path(a.out_features));
    ddh::write_labels(data.labels, a.out_labels);
    return;
  }
  const auto s = ddh::holdout_split(data.features.n_items(), a.queries, a.split_seed);
  ddh::write_features(data.features.select_rows(s.database), a.out_features,
                      ddh::feature_format_from_path(a.out_features));
  ddh::write_labels(data.labels.select_rows(s.database), a.out_labels);
  ddh::write_features(data.features.select_rows(s.queries), a.out_query_features,
                      ddh::feature_format_from_path(a.out_query_features));
  ddh::write_labels(data.labels.select_rows(s.queries), a.out_query_labels);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised binary hashing: label construction, training, encoding and evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  LabelsArgs la;
  auto* labels = app.add_subcommand("labels", "Build pseudo pairwise labels from feature neighborhoods");
  labels->add_option("--features", la.features, "Feature file (.ddhf or .csv)")->required()->check(CLI::ExistingFile);
  labels->add_option("--k1", la.k1, "Neighbors per ranking list")->capture_default_str()->check(CLI::PositiveNumber);
  labels->add_option("--k2", la.k2, "Ranking lists merged per item")->capture_default_str()->check(CLI::PositiveNumber);
  labels->add_option("--out", la.out, "Output pair file (.ddhp)")->required();
  labels->add_option("--truth", la.truth, "Ground-truth labels for a precision diagnostic")->check(CLI::ExistingFile);

  TrainArgs ta;
  auto* trainc = app.add_subcommand("train", "Train the hash layer");
  trainc->add_option("--features", ta.features, "Feature file")->required()->check(CLI::ExistingFile);
  trainc->add_option("--pairs", ta.pairs, "Pair file (.ddhp)")->required()->check(CLI::ExistingFile);
  trainc->add_option("--bits", ta.bits, "Code length")->capture_default_str()->check(CLI::PositiveNumber);
  trainc->add_option("--lambda1", ta.cfg.lambda1, "Quantization weight")->capture_default_str()->check(CLI::NonNegativeNumber);
  trainc->add_option("--lambda2", ta.cfg.lambda2, "Weight decay")->capture_default_str()->check(CLI::NonNegativeNumber);
  trainc->add_option("--lr", ta.cfg.learning_rate, "Learning rate")->capture_default_str()->check(CLI::NonNegativeNumber);
  trainc->add_option("--batch", ta.cfg.batch_size, "Batch size")->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  trainc->add_option("--epochs", ta.cfg.epochs, "Epochs")->capture_default_str()->check(CLI::PositiveNumber);
  trainc->add_option("--seed", ta.cfg.seed, "Seed for init and shuffling")->capture_default_str();
  trainc->add_option("--out", ta.out, "Output model file (.ddhm)")->required();
  trainc->add_option("--report", ta.report, "Per-epoch report (default: <out>.report)");

  EncodeArgs ea;
  auto* encodec = app.add_subcommand("encode", "Encode features with a trained model");
  encodec->add_option("--model", ea.model, "Model file (.ddhm)")->required()->check(CLI::ExistingFile);
  encodec->add_option("--features", ea.features, "Feature file")->required()->check(CLI::ExistingFile);
  encodec->add_option("--out", ea.out, "Output code file (.ddhb)")->required();

  EvalArgs va;
  auto* evalc = app.add_subcommand("eval", "Hamming ranking evaluation");
  evalc->add_option("--query-codes", va.query_codes)->required()->check(CLI::ExistingFile);
  evalc->add_option("--db-codes", va.db_codes)->required()->check(CLI::ExistingFile);
  evalc->add_option("--query-labels", va.query_labels)->required()->check(CLI::ExistingFile);
  evalc->add_option("--db-labels", va.db_labels)->required()->check(CLI::ExistingFile);
  evalc->add_option("--map-at", va.map_at, "mAP cutoff R")->capture_default_str()->check(CLI::PositiveNumber);
  evalc->add_option("--pr-out", va.pr_out, "Write precision/recall CSV here");
  evalc->add_flag("--self-retrieval", va.self_retrieval, "Queries are the database; skip each query's own entry");

  LshArgs sa;
  auto* lshc = app.add_subcommand("lsh", "Random-hyperplane baseline codes");
  lshc->add_option("--features", sa.features)->required()->check(CLI::ExistingFile);
  lshc->add_option("--bits", sa.bits)->capture_default_str()->check(CLI::PositiveNumber);
  lshc->add_option("--seed", sa.seed)->capture_default_str();
  lshc->add_option("--out", sa.out, "Output code file (.ddhb)")->required();

  SynthArgs ya;
  auto* synthc = app.add_subcommand("synth", "Generate a Gaussian-cluster benchmark");
  synthc->add_option("--clusters", ya.cfg.clusters)->capture_default_str()->check(CLI::PositiveNumber);
  synthc->add_option("--per-cluster", ya.cfg.per_cluster)->capture_default_str()->check(CLI::PositiveNumber);
  synthc->add_option("--dim", ya.cfg.dim)->capture_default_str()->check(CLI::PositiveNumber);
  synthc->add_option("--noise", ya.cfg.noise, "Per-coordinate noise std")->capture_default_str()->check(CLI::NonNegativeNumber);
  synthc->add_option("--seed", ya.cfg.seed)->capture_default_str();
  synthc->add_option("--out-features", ya.out_features)->required();
  synthc->add_option("--out-labels", ya.out_labels)->required();
  synthc->add_option("--queries", ya.queries, "Hold out this many random items as queries")->capture_default_str();
  synthc->add_option("--split-seed", ya.split_seed)->capture_default_str();
  synthc->add_option("--out-query-features", ya.out_query_features);
  synthc->add_option("--out-query-labels", ya.out_query_labels);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*labels) run_labels(la, threads);
    if (*trainc) run_train(ta);
    if (*encodec) run_encode(ea, threads);
    if (*evalc) run_eval(va, threads);
    if (*lshc) run_lsh(sa, threads);
    if (*synthc) run_synth(ya);
  } catch (const ddh::Error& e) {
    std::cerr << "ddh: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ddh: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
