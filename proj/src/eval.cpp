#include "driftrec/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"

#include "driftrec/content.hpp"
#include "driftrec/errors.hpp"
#include "driftrec/profile.hpp"
#include "driftrec/rng.hpp"

namespace driftrec {

Metrics precision_recall_f1(const std::vector<ItemId>& recommended,
                            const std::set<ItemId>& relevant) {
  if (relevant.empty())
    throw PreconditionError("metrics: empty relevant set (filter ineligible users upstream)");
  std::set<ItemId> seen;
  std::size_t hits = 0;
  for (ItemId id : recommended) {
    if (!seen.insert(id).second) throw PreconditionError("metrics: duplicate recommended item");
    if (relevant.contains(id)) ++hits;
  }
  Metrics m;
  m.precision = recommended.empty()
                    ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(recommended.size());
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  m.f1 = m.precision + m.recall > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

std::vector<std::size_t> SplitPlan::train_of(std::size_t fold) const {
  std::vector<bool> in_test(n, false);
  for (std::size_t i : test_folds.at(fold)) in_test[i] = true;
  std::vector<std::size_t> train;
  train.reserve(n - test_folds.at(fold).size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in_test[i]) train.push_back(i);
  return train;
}

SplitPlan kfold_split(std::size_t n_interactions, int k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("kfold: k must be >= 2");
  if (n_interactions < static_cast<std::size_t>(k))
    throw PreconditionError("kfold: need at least k interactions (n=" +
                            std::to_string(n_interactions) + ", k=" + std::to_string(k) + ")");
  std::vector<std::size_t> idx(n_interactions);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  SplitPlan plan;
  plan.n = n_interactions;
  plan.seed = seed;
  std::size_t base = n_interactions / static_cast<std::size_t>(k);
  std::size_t extra = n_interactions % static_cast<std::size_t>(k);
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    std::vector<std::size_t> fold(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                                  idx.begin() + static_cast<std::ptrdiff_t>(pos + len));
    std::sort(fold.begin(), fold.end());
    plan.test_folds.push_back(std::move(fold));
    pos += len;
  }
  return plan;
}

LatencyStats summarize_latency(std::vector<double> samples_ms) {
  if (samples_ms.empty()) throw PreconditionError("latency: no samples");
  LatencyStats s;
  s.n_calls = samples_ms.size();
  double sum = 0.0;
  for (double v : samples_ms) sum += v;
  s.mean_ms = sum / static_cast<double>(samples_ms.size());
  std::sort(samples_ms.begin(), samples_ms.end());
  // nearest-rank p95
  auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(samples_ms.size())));
  s.p95_ms = samples_ms[rank - 1];
  return s;
}

LatencyStats measure_latency(const std::function<void(UserId)>& recommender,
                             const std::vector<UserId>& requests, std::size_t warmup) {
  if (requests.empty()) throw PreconditionError("latency: no requests");
  if (warmup >= requests.size())
    throw PreconditionError("latency: warmup must leave at least one measured call");
  std::vector<double> samples;
  samples.reserve(requests.size() - warmup);
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    recommender(requests[i]);
    auto t1 = std::chrono::steady_clock::now();
    if (i >= warmup)
      samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return summarize_latency(std::move(samples));
}

PipelineModels PipelineModels::build(const ItemFeatureIndex& features,
                                     std::span<const Interaction> interactions,
                                     const Config& cfg) {
  PipelineModels m;
  m.features = features;
  m.matrix = RatingMatrix::from_interactions(interactions);
  m.rules = mine_rules(user_transactions(interactions), cfg.rules_min_support,
                       cfg.rules_min_confidence, cfg.rules_max_len, cfg.rules_max_consequent);
  for (const Interaction& ev : interactions) {
    m.events_by_user[ev.user].push_back(ev);
    m.seen_items[ev.user].insert(ev.item);
    m.max_ts = std::max(m.max_ts, ev.ts);
  }
  return m;
}

RankedList PipelineModels::recommend(const std::string& algorithm, UserId u, std::size_t k,
                                     const Config& cfg) const {
  if (!has_user(u)) throw NotFoundError("recommend: unknown user " + std::to_string(u));
  RankedList out;
  out.algorithm = algorithm;
  if (algorithm == kAlgoContent) {
    UserInterestProfile p;
    p.user = u;
    p = update_profile(p, events_by_user.at(u), features, max_ts, decay_config(cfg));
    out.items = recommend_content(p, features, seen_items.at(u), k);
  } else if (algorithm == kAlgoCf) {
    out.items = recommend_cf(matrix, u, cf_config(cfg), k);
  } else if (algorithm == kAlgoRules) {
    out.items = recommend_rules(rules, seen_items.at(u), k);
  } else {
    throw ConfigError("recommend: unknown algorithm '" + algorithm + "'");
  }
  return out;
}

RankedList PipelineModels::recommend_hybrid(UserId u, std::size_t k, const Config& cfg,
                                            const FusionWeights& w) const {
  std::vector<RankedList> lists;
  lists.push_back(normalize_scores(recommend(kAlgoContent, u, k, cfg)));
  lists.push_back(normalize_scores(recommend(kAlgoCf, u, k, cfg)));
  lists.push_back(normalize_scores(recommend(kAlgoRules, u, k, cfg)));
  return fuse(lists, w, k);
}

namespace {

const char* const kAlgoOrder[] = {kAlgoContent, kAlgoCf, kAlgoRules, kAlgoHybrid};

bool relevant_event(const Interaction& ev, int threshold) {
  return ev.kind == Behavior::purchase ||
         (ev.kind == Behavior::rating && ev.rating >= threshold);
}

std::vector<Interaction> gather(const std::vector<Interaction>& all,
                                const std::vector<std::size_t>& idx) {
  std::vector<Interaction> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

// Test users worth scoring: present in train, with at least one relevant
// held-out item they have not already touched in train.
std::map<UserId, std::set<ItemId>> eligible_users(const PipelineModels& models,
                                                  const std::vector<Interaction>& test,
                                                  int threshold) {
  std::map<UserId, std::set<ItemId>> relevant;
  for (const Interaction& ev : test)
    if (relevant_event(ev, threshold)) relevant[ev.user].insert(ev.item);

  std::map<UserId, std::set<ItemId>> eligible;
  for (const auto& [u, items] : relevant) {
    auto seen = models.seen_items.find(u);
    if (seen == models.seen_items.end()) continue;
    std::set<ItemId> held;
    for (ItemId id : items)
      if (!seen->second.contains(id)) held.insert(id);
    if (!held.empty()) eligible.emplace(u, std::move(held));
  }
  return eligible;
}

std::vector<ItemId> item_ids_of(const RankedList& list) {
  std::vector<ItemId> ids;
  ids.reserve(list.items.size());
  for (const ScoredItem& it : list.items) ids.push_back(it.item);
  return ids;
}

// Hybrid weights from an 80/20 split of the fold's train data; uniform when
// the split is too small or finds no eligible validation user.
FusionWeights fit_inner_weights(const ItemFeatureIndex& features,
                                const std::vector<Interaction>& train, const Config& cfg,
                                std::uint64_t seed) {
  std::map<std::string, double> f1s{{kAlgoContent, 0.0}, {kAlgoCf, 0.0}, {kAlgoRules, 0.0}};
  if (train.size() >= 5) {
    SplitPlan inner = kfold_split(train.size(), 5, seed);
    std::vector<Interaction> fit = gather(train, inner.train_of(0));
    std::vector<Interaction> val = gather(train, inner.test_folds[0]);
    PipelineModels models = PipelineModels::build(features, fit, cfg);
    auto eligible = eligible_users(models, val, cfg.eval_relevance_threshold);
    if (!eligible.empty()) {
      auto k = static_cast<std::size_t>(cfg.eval_k);
      for (const char* algo : {kAlgoContent, kAlgoCf, kAlgoRules}) {
        double sum = 0.0;
        for (const auto& [u, held] : eligible) {
          RankedList list = models.recommend(algo, u, k, cfg);
          sum += precision_recall_f1(item_ids_of(list), held).f1;
        }
        f1s[algo] = sum / static_cast<double>(eligible.size());
      }
    }
  }
  return derive_weights(f1s);  // all-zero F1 falls back to uniform
}

struct FoldTally {
  double precision = 0, recall = 0, f1 = 0;  // macro sums over users
  std::size_t users = 0;
  std::size_t hits = 0, recommended = 0, relevant = 0;  // micro pools

  Metrics fold_metrics(const std::string& averaging) const {
    Metrics m;
    if (averaging == "micro") {
      m.precision = recommended > 0
                        ? static_cast<double>(hits) / static_cast<double>(recommended)
                        : 0.0;
      m.recall = relevant > 0 ? static_cast<double>(hits) / static_cast<double>(relevant) : 0.0;
      m.f1 = m.precision + m.recall > 0.0
                 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                 : 0.0;
    } else {
      auto n = static_cast<double>(users);
      m.precision = precision / n;
      m.recall = recall / n;
      m.f1 = f1 / n;
    }
    return m;
  }
};

}  // namespace

EvalReport run_experiment(const Dataset& dataset, const Config& cfg) {
  validate_config(cfg);
  try {
    validate_dataset(dataset);
  } catch (const Error& e) {
    throw PreconditionError(std::string("evaluate: dataset failed validation: ") + e.what());
  }
  if (dataset.catalog.empty())
    throw PreconditionError("evaluate: dataset has no catalog; content scoring needs item terms");

  ItemFeatureIndex features = build_item_features(dataset.catalog);
  SplitPlan plan = kfold_split(dataset.interactions.size(), cfg.eval_folds, cfg.eval_seed);
  auto k = static_cast<std::size_t>(cfg.eval_k);

  std::map<std::string, std::vector<Metrics>> per_fold;
  int last_fold = -1;
  FusionWeights last_weights;
  std::vector<UserId> last_users;

  for (std::size_t fold = 0; fold < plan.test_folds.size(); ++fold) {
    std::vector<Interaction> train = gather(dataset.interactions, plan.train_of(fold));
    std::vector<Interaction> test = gather(dataset.interactions, plan.test_folds[fold]);
    PipelineModels models = PipelineModels::build(features, train, cfg);
    auto eligible = eligible_users(models, test, cfg.eval_relevance_threshold);
    if (eligible.empty()) continue;  // fold contributes nothing; fail later only if all do

    FusionWeights weights =
        cfg.fusion_weights
            ? FusionWeights{*cfg.fusion_weights}
            : fit_inner_weights(features, train, cfg, mix_seed(cfg.eval_seed, fold));

    std::map<std::string, FoldTally> tally;
    for (const auto& [u, held] : eligible) {  // ascending user id: fixed reduction order
      for (const char* algo : kAlgoOrder) {
        RankedList list = algo == std::string(kAlgoHybrid)
                              ? models.recommend_hybrid(u, k, cfg, weights)
                              : models.recommend(algo, u, k, cfg);
        std::vector<ItemId> ids = item_ids_of(list);
        Metrics m = precision_recall_f1(ids, held);
        FoldTally& t = tally[algo];
        t.precision += m.precision;
        t.recall += m.recall;
        t.f1 += m.f1;
        t.users += 1;
        t.recommended += ids.size();
        t.relevant += held.size();
        for (ItemId id : ids)
          if (held.contains(id)) t.hits += 1;
      }
    }
    for (const char* algo : kAlgoOrder)
      per_fold[algo].push_back(tally[algo].fold_metrics(cfg.eval_averaging));
    last_fold = static_cast<int>(fold);
    last_weights = weights;
    last_users.clear();
    for (const auto& [u, held] : eligible) last_users.push_back(u);
  }

  if (last_fold < 0)
    throw PreconditionError(
        "evaluate: no eligible test users in any fold (need a user with train history and a "
        "held-out item rated >= threshold or purchased)");

  EvalReport report;
  report.config = cfg;
  report.seed = cfg.eval_seed;
  for (const char* algo : kAlgoOrder) {
    const std::vector<Metrics>& folds = per_fold[algo];
    Metrics avg;
    for (const Metrics& m : folds) {
      avg.precision += m.precision;
      avg.recall += m.recall;
      avg.f1 += m.f1;
    }
    auto n = static_cast<double>(folds.size());
    avg.precision /= n;
    avg.recall /= n;
    avg.f1 /= n;
    report.rows.push_back({algo, dataset.name, avg, std::nullopt});
  }

  if (cfg.eval_measure_latency) {
    // Re-derive the last evaluated fold's models and time the per-user calls.
    std::vector<Interaction> train =
        gather(dataset.interactions, plan.train_of(static_cast<std::size_t>(last_fold)));
    PipelineModels models = PipelineModels::build(features, train, cfg);
    std::vector<UserId> requests = last_users;
    if (requests.size() > 100) requests.resize(100);
    std::size_t warmup = requests.size() / 10;
    for (ReportRow& row : report.rows) {
      auto fn = [&, algo = row.algorithm](UserId u) {
        if (algo == kAlgoHybrid)
          models.recommend_hybrid(u, k, cfg, last_weights);  // end-to-end: three lists + fusion
        else
          models.recommend(algo, u, k, cfg);
      };
      row.latency = measure_latency(fn, requests, warmup);
    }
  }
  return report;
}

namespace {

std::string three_decimals(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

nlohmann::json latency_to_json(const LatencyStats& s) {
  nlohmann::json j;
  j["mean_ms"] = s.mean_ms;
  j["p95_ms"] = s.p95_ms;
  j["n_calls"] = s.n_calls;
  return j;
}

}  // namespace

std::string report_to_csv(const EvalReport& r) {
  std::string out = "algorithm,dataset,precision,recall,f1,response_time_ms\n";
  for (const ReportRow& row : r.rows) {
    out += row.algorithm;
    out += ',';
    out += row.dataset;
    out += ',';
    out += three_decimals(row.metrics.precision);
    out += ',';
    out += three_decimals(row.metrics.recall);
    out += ',';
    out += three_decimals(row.metrics.f1);
    out += ',';
    out += three_decimals(row.latency ? row.latency->mean_ms : 0.0);
    out += '\n';
  }
  return out;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json doc;
  doc["seed"] = r.seed;
  doc["config"] = nlohmann::json::parse(config_to_json(r.config));
  doc["rows"] = nlohmann::json::array();
  for (const ReportRow& row : r.rows) {
    nlohmann::json j;
    j["algorithm"] = row.algorithm;
    j["dataset"] = row.dataset;
    j["precision"] = row.metrics.precision;
    j["recall"] = row.metrics.recall;
    j["f1"] = row.metrics.f1;
    j["response_time_ms"] = row.latency ? row.latency->mean_ms : 0.0;
    j["latency"] = row.latency ? latency_to_json(*row.latency) : nlohmann::json(nullptr);
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what());
  }
  EvalReport r;
  try {
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.config = config_from_json(doc.at("config").dump());
    for (const auto& j : doc.at("rows")) {
      ReportRow row;
      row.algorithm = j.at("algorithm").get<std::string>();
      row.dataset = j.at("dataset").get<std::string>();
      row.metrics.precision = j.at("precision").get<double>();
      row.metrics.recall = j.at("recall").get<double>();
      row.metrics.f1 = j.at("f1").get<double>();
      if (!j.at("latency").is_null()) {
        LatencyStats s;
        s.mean_ms = j.at("latency").at("mean_ms").get<double>();
        s.p95_ms = j.at("latency").at("p95_ms").get<double>();
        s.n_calls = j.at("latency").at("n_calls").get<std::size_t>();
        row.latency = s;
      }
      r.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report json: ") + e.what());
  }
  return r;
}

std::string emit_report(const EvalReport& r, ReportFormat format) {
  return format == ReportFormat::csv ? report_to_csv(r) : report_to_json(r);
}

}  // namespace driftrec
