#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "driftrec/cf.hpp"  // ScoredItem
#include "driftrec/types.hpp"

namespace driftrec {

using Itemset = std::vector<ItemId>;  // sorted ascending, unique

struct AssociationRule {
  Itemset antecedent;
  Itemset consequent;   // disjoint from antecedent
  double support = 0;   // support of antecedent+consequent together
  double confidence = 0;
  friend bool operator==(const AssociationRule&, const AssociationRule&) = default;
};

struct FrequentItemset {
  Itemset items;
  double support = 0;
  friend bool operator==(const FrequentItemset&, const FrequentItemset&) = default;
};

// Per-user baskets for mining: the items a user purchased, clicked, or rated
// at least `min_rating`. Users with an empty basket are omitted; baskets come
// out in ascending user id order, members sorted and unique.
std::vector<Itemset> user_transactions(std::span<const Interaction> interactions,
                                       int min_rating = 4);

// Level-wise Apriori: candidate generation from the previous level plus
// downward-closure pruning; supports counted via transaction-id lists.
// Output sorted by (size ascending, lexicographic).
std::vector<FrequentItemset> mine_frequent_itemsets(const std::vector<Itemset>& transactions,
                                                    double min_support, int max_len);

// Frequent itemsets first, then every rule X -> Y with |Y| <= max_consequent
// meeting both thresholds. Sorted by (confidence desc, support desc,
// lexicographic antecedent, lexicographic consequent).
std::vector<AssociationRule> mine_rules(const std::vector<Itemset>& transactions,
                                        double min_support, double min_confidence, int max_len,
                                        int max_consequent = 1);

// Fires every rule whose antecedent is owned; consequent items outside the
// owned set are scored by the best (confidence, support) among firing rules.
// Top-n by (confidence desc, support desc, ascending item id).
std::vector<ScoredItem> recommend_rules(const std::vector<AssociationRule>& rules,
                                        const std::set<ItemId>& owned, std::size_t n);

// CSV `antecedent,consequent,support,confidence`; itemset members ascending,
// joined by '|'; reals printed with round-trip precision.
std::string rules_to_csv(const std::vector<AssociationRule>& rules);
std::vector<AssociationRule> rules_from_csv(const std::string& csv);

}  // namespace driftrec
