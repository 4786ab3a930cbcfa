#include "driftrec/fusion.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "driftrec/errors.hpp"

namespace driftrec {

RankedList normalize_scores(RankedList list) {
  if (list.items.empty()) return list;
  double lo = list.items.front().score, hi = lo;
  for (const ScoredItem& it : list.items) {
    lo = std::min(lo, it.score);
    hi = std::max(hi, it.score);
  }
  if (hi == lo) {
    for (ScoredItem& it : list.items) it.score = 1.0;
    return list;
  }
  double range = hi - lo;
  for (ScoredItem& it : list.items) it.score = (it.score - lo) / range;
  return list;
}

std::vector<FusedItem> fuse_detailed(const std::vector<RankedList>& lists, const FusionWeights& w,
                                     std::size_t n) {
  // Canonical processing order: sort list indices by algorithm name so caller
  // permutations can never reorder the floating-point accumulation.
  std::vector<const RankedList*> ordered;
  ordered.reserve(lists.size());
  for (const RankedList& l : lists) ordered.push_back(&l);
  std::sort(ordered.begin(), ordered.end(),
            [](const RankedList* a, const RankedList* b) { return a->algorithm < b->algorithm; });
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (ordered[i]->algorithm == ordered[i - 1]->algorithm)
      throw PreconditionError("fuse: duplicate list for algorithm " + ordered[i]->algorithm);

  double total = 0.0;
  for (const RankedList* l : ordered) {
    auto it = w.weights.find(l->algorithm);
    if (it != w.weights.end()) {
      if (it->second < 0.0) throw PreconditionError("fuse: negative weight");
      total += it->second;
    }
  }
  // Weight mass pointing at algorithms with no list is dropped by renormalizing
  // over the lists we actually have; with no usable mass fall back to uniform.
  auto effective = [&](const RankedList* l) {
    if (total > 0.0) {
      auto it = w.weights.find(l->algorithm);
      return it != w.weights.end() ? it->second / total : 0.0;
    }
    return ordered.empty() ? 0.0 : 1.0 / static_cast<double>(ordered.size());
  };

  std::map<ItemId, FusedItem> acc;
  for (const RankedList* l : ordered) {
    double wl = effective(l);
    if (wl <= 0.0) continue;  // zero-weight lists contribute nothing, including candidates
    std::set<ItemId> seen;
    for (const ScoredItem& it : l->items) {
      if (!seen.insert(it.item).second)
        throw PreconditionError("fuse: duplicate item in list " + l->algorithm);
      FusedItem& f = acc[it.item];
      f.item = it.item;
      f.score += wl * it.score;
      f.sources.push_back(l->algorithm);
    }
  }

  std::vector<FusedItem> out;
  out.reserve(acc.size());
  for (auto& [id, f] : acc) {
    f.score = std::clamp(f.score, 0.0, 1.0);
    out.push_back(std::move(f));  // sources already name-ordered by construction
  }
  std::sort(out.begin(), out.end(), [](const FusedItem& a, const FusedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

RankedList fuse(const std::vector<RankedList>& lists, const FusionWeights& w, std::size_t n) {
  RankedList out;
  out.algorithm = kAlgoHybrid;
  for (FusedItem& f : fuse_detailed(lists, w, n)) out.items.push_back({f.item, f.score});
  return out;
}

FusionWeights derive_weights(const std::map<std::string, double>& per_algorithm_f1) {
  FusionWeights w;
  if (per_algorithm_f1.empty()) return w;
  double total = 0.0;
  for (const auto& [name, f1] : per_algorithm_f1) {
    if (!(f1 >= 0.0 && f1 <= 1.0)) throw PreconditionError("derive_weights: F1 outside [0,1]");
    total += f1;
  }
  for (const auto& [name, f1] : per_algorithm_f1)
    w.weights[name] = total > 0.0 ? f1 / total
                                  : 1.0 / static_cast<double>(per_algorithm_f1.size());
  return w;
}

std::string fused_to_csv(const std::vector<FusedItem>& items) {
  std::string out = "rank,item_id,score,contributing_algorithms\n";
  char buf[64];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const FusedItem& f = items[i];
    std::snprintf(buf, sizeof buf, "%zu,%u,%.6f,", i + 1, f.item, f.score);
    out += buf;
    for (std::size_t j = 0; j < f.sources.size(); ++j) {
      if (j) out += '|';
      out += f.sources[j];
    }
    out += '\n';
  }
  return out;
}

}  // namespace driftrec
