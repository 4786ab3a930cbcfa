#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "driftrec/apriori.hpp"
#include "driftrec/config.hpp"
#include "driftrec/features.hpp"
#include "driftrec/fusion.hpp"
#include "driftrec/types.hpp"

namespace driftrec {

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// P = hits/|recommended| (0 when nothing was recommended), R = hits/|relevant|,
// F1 = 2PR/(P+R) or 0. The relevant set must be nonempty; callers filter
// ineligible users beforehand.
Metrics precision_recall_f1(const std::vector<ItemId>& recommended,
                            const std::set<ItemId>& relevant);

// Seeded shuffle of [0,n) then contiguous partition into k test folds whose
// sizes differ by at most 1. Test folds are stored sorted.
struct SplitPlan {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> test_folds;

  std::vector<std::size_t> train_of(std::size_t fold) const;  // complement, sorted
};

SplitPlan kfold_split(std::size_t n_interactions, int k, std::uint64_t seed);

struct LatencyStats {
  double mean_ms = 0;
  double p95_ms = 0;  // nearest-rank
  std::size_t n_calls = 0;
  friend bool operator==(const LatencyStats&, const LatencyStats&) = default;
};

LatencyStats summarize_latency(std::vector<double> samples_ms);

// Wall-clock per call; the first `warmup` samples are discarded. Requests must
// outnumber warmup. Single-threaded by contract.
LatencyStats measure_latency(const std::function<void(UserId)>& recommender,
                             const std::vector<UserId>& requests, std::size_t warmup);

// Every per-algorithm model built over one interaction set, with the per-user
// ranked-list entry point shared by the CLI and the evaluation harness.
// Immutable after build; recommend() is const and thread-safe.
struct PipelineModels {
  ItemFeatureIndex features;  // catalog TF-IDF, shared across folds
  RatingMatrix matrix;
  std::vector<AssociationRule> rules;
  std::map<UserId, std::vector<Interaction>> events_by_user;
  std::map<UserId, std::set<ItemId>> seen_items;
  std::int64_t max_ts = 0;  // profile reference time

  static PipelineModels build(const ItemFeatureIndex& features,
                              std::span<const Interaction> interactions, const Config& cfg);

  bool has_user(UserId u) const { return seen_items.count(u) != 0; }

  // algorithm in {content, cf, rules}; hybrid goes through recommend_hybrid.
  RankedList recommend(const std::string& algorithm, UserId u, std::size_t k,
                       const Config& cfg) const;
  RankedList recommend_hybrid(UserId u, std::size_t k, const Config& cfg,
                              const FusionWeights& w) const;
};

struct ReportRow {
  std::string algorithm;
  std::string dataset;
  Metrics metrics;
  std::optional<LatencyStats> latency;  // present only when measured
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  Config config;
  std::uint64_t seed = 0;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// K-fold protocol: per fold, build models on train, evaluate top-K per
// algorithm plus the hybrid (weights fit on an inner 80/20 split of train,
// never on test) over test users with at least one relevant held-out item
// (rating >= threshold or any purchase). Metrics are macro-averaged over users
// then folds. Pure function of (dataset, config) except the latency fields,
// which exist only when cfg.eval_measure_latency is set.
EvalReport run_experiment(const Dataset& dataset, const Config& cfg);

// CSV columns exactly: algorithm,dataset,precision,recall,f1,response_time_ms
// (reals with 3 decimals). JSON mirrors the rows plus config snapshot and seed.
std::string report_to_csv(const EvalReport& r);
std::string report_to_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);

enum class ReportFormat { json, csv };
std::string emit_report(const EvalReport& r, ReportFormat format);

}  // namespace driftrec
