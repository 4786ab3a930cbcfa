#pragma once

#include <set>
#include <vector>

#include "driftrec/cf.hpp"  // ScoredItem
#include "driftrec/features.hpp"
#include "driftrec/profile.hpp"

namespace driftrec {

// Cosine between the profile weights and an item vector; 0 for an empty
// profile or a zero-flagged item. In [0,1] for nonnegative vectors.
double score_content(const UserInterestProfile& profile, const FeatureVector& item);

// Top-n items from the index not in `exclude`, by (score desc, item id asc).
std::vector<ScoredItem> recommend_content(const UserInterestProfile& profile,
                                          const ItemFeatureIndex& index,
                                          const std::set<ItemId>& exclude, std::size_t n);

}  // namespace driftrec
