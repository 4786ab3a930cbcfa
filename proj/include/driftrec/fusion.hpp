#pragma once

#include <map>
#include <string>
#include <vector>

#include "driftrec/cf.hpp"  // ScoredItem

namespace driftrec {

inline constexpr const char* kAlgoContent = "content";
inline constexpr const char* kAlgoCf = "cf";
inline constexpr const char* kAlgoRules = "rules";
inline constexpr const char* kAlgoHybrid = "hybrid";

// Nonnegative per-algorithm weights summing to 1.
struct FusionWeights {
  std::map<std::string, double> weights;
  friend bool operator==(const FusionWeights&, const FusionWeights&) = default;
};

// One algorithm's ranked output: strictly ordered by (score desc, item id asc),
// no duplicate items.
struct RankedList {
  std::string algorithm;
  std::vector<ScoredItem> items;
  friend bool operator==(const RankedList&, const RankedList&) = default;
};

// Min-max to [0,1]; a single-item or constant-score list maps every score to 1.
RankedList normalize_scores(RankedList list);

struct FusedItem {
  ItemId item = 0;
  double score = 0.0;
  std::vector<std::string> sources;  // contributing algorithms, sorted
  friend bool operator==(const FusedItem&, const FusedItem&) = default;
};

// Weighted sum over pre-normalized lists, items absent from a list scoring 0.
// Weight mass naming absent algorithms is renormalized over the present ones.
// Lists are processed in algorithm-name order, so input permutation never
// changes the output. Top-n by (score desc, item id asc).
std::vector<FusedItem> fuse_detailed(const std::vector<RankedList>& lists, const FusionWeights& w,
                                     std::size_t n);
RankedList fuse(const std::vector<RankedList>& lists, const FusionWeights& w, std::size_t n);

// w_a = F1_a / sum(F1); uniform when every F1 is zero. Inputs must be in [0,1].
FusionWeights derive_weights(const std::map<std::string, double>& per_algorithm_f1);

// CSV `rank,item_id,score,contributing_algorithms` (sources joined by '|').
std::string fused_to_csv(const std::vector<FusedItem>& items);

}  // namespace driftrec
