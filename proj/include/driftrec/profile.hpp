#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "driftrec/features.hpp"
#include "driftrec/types.hpp"

namespace driftrec {

struct DecayConfig {
  double half_life_seconds = 30.0 * 86400.0;
  double weight_browse = 0.2;
  double weight_click = 0.5;
  double weight_purchase = 1.0;
  double weight_rating = 1.0;
};

double behavior_weight(const DecayConfig& cfg, Behavior kind);

// 2^(-delta_t / half_life). delta_t must be >= 0 (callers clamp clock skew).
double decay_weight(double delta_t_seconds, const DecayConfig& cfg);

// Decayed, behavior-weighted feature vector for one user. Single writer per
// profile; distinct users may update in parallel.
struct UserInterestProfile {
  UserId user = 0;
  FeatureVector weights;          // nonnegative, zeros absent
  std::int64_t last_updated = 0;  // never decreases

  friend bool operator==(const UserInterestProfile&, const UserInterestProfile&) = default;
};

// Decays the existing weights to `now`, then applies the events in order:
//   weights += behavior_weight(kind) * signal * decay(now - event.ts) * item_vector
// where signal is 1 for behaviors and (rating - 3) / 2 for rating events, with
// weights floored at 0 after each event. Events whose item is missing from the
// index are skipped and counted into *skipped (when non-null).
UserInterestProfile update_profile(const UserInterestProfile& p, std::span<const Interaction> events,
                                   const ItemFeatureIndex& index, std::int64_t now,
                                   const DecayConfig& cfg, std::size_t* skipped = nullptr);

// JSON export: {user_id, last_updated, weights:{term: weight}}, terms sorted
// lexicographically.
std::string profile_to_json(const UserInterestProfile& p, const ItemFeatureIndex& index);

}  // namespace driftrec
