#include "driftrec/content.hpp"

#include <algorithm>

namespace driftrec {

double score_content(const UserInterestProfile& profile, const FeatureVector& item) {
  double np = profile.weights.norm();
  double ni = item.norm();
  if (np == 0.0 || ni == 0.0) return 0.0;
  return profile.weights.dot(item) / (np * ni);
}

std::vector<ScoredItem> recommend_content(const UserInterestProfile& profile,
                                          const ItemFeatureIndex& index,
                                          const std::set<ItemId>& exclude, std::size_t n) {
  std::vector<ScoredItem> scored;
  scored.reserve(index.vectors.size());
  for (const auto& [id, vec] : index.vectors) {
    if (exclude.contains(id)) continue;
    scored.push_back({id, score_content(profile, vec)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  if (scored.size() > n) scored.resize(n);
  return scored;
}

}  // namespace driftrec
