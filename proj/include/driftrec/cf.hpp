#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "driftrec/types.hpp"

namespace driftrec {

struct ScoredItem {
  ItemId item = 0;
  double score = 0.0;
  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

// Pseudo-rating levels for behavior events on pairs without an explicit rating.
inline constexpr double kBrowsePseudoRating = 2.0;
inline constexpr double kClickPseudoRating = 3.0;
inline constexpr double kPurchasePseudoRating = 5.0;

// Sparse user x item ratings with cached per-user means.
// Immutable after build; all query operations are const and thread-safe.
struct RatingMatrix {
  using ItemRatings = std::vector<std::pair<ItemId, double>>;  // sorted by item
  using UserRatings = std::vector<std::pair<UserId, double>>;  // sorted by user

  std::map<UserId, ItemRatings> by_user;
  std::map<ItemId, UserRatings> by_item;
  std::map<UserId, double> user_means;

  // Explicit ratings (last one wins per pair) plus pseudo-ratings derived from
  // behavior events for pairs that have no explicit rating.
  static RatingMatrix from_interactions(std::span<const Interaction> interactions);

  bool has_user(UserId u) const { return by_user.count(u) != 0; }
  double mean(UserId u) const;                     // throws NotFoundError
  const ItemRatings* ratings_of(UserId u) const;   // nullptr when absent
  std::vector<ItemId> item_ids() const;
};

enum class Similarity { pearson, cosine };

struct CfConfig {
  int k_neighbors = 40;
  int min_overlap = 2;
  double sim_floor = 0.0;
  Similarity sim = Similarity::pearson;
};

// Pearson correlation over co-rated items only. Returns 0 when the overlap is
// below min_overlap or either co-rated subvector has zero variance.
double pearson_sim(const RatingMatrix::ItemRatings& a, const RatingMatrix::ItemRatings& b,
                   int min_overlap = 2);

// Cosine over co-rated items, same degenerate rules as pearson_sim.
double cosine_sim(const RatingMatrix::ItemRatings& a, const RatingMatrix::ItemRatings& b,
                  int min_overlap = 2);

// Users similar to a target, sorted by descending |sim| (ties: ascending id),
// capped at k. Zero similarities are excluded.
struct Neighborhood {
  std::vector<std::pair<UserId, double>> members;  // |sim| descending
  std::vector<std::pair<UserId, double>> by_id;    // same members, id ascending
};

Neighborhood build_neighborhood(const RatingMatrix& m, UserId u, const CfConfig& cfg);

// Mean-centered weighted deviation over neighbors who rated the item, clamped
// to [1,5]; falls back to the user's mean when no neighbor rated it.
// Neighbor contributions are summed in ascending user id order.
double predict_cf(const RatingMatrix& m, UserId u, ItemId i, const Neighborhood& hood);

// Top-n unseen items by predicted rating (ties: ascending item id).
std::vector<ScoredItem> recommend_cf(const RatingMatrix& m, UserId u, const CfConfig& cfg,
                                     std::size_t n);

}  // namespace driftrec
