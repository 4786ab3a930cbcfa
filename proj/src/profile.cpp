#include "driftrec/profile.hpp"

#include <cmath>
#include <map>

#include "json.hpp"

#include "driftrec/errors.hpp"

namespace driftrec {

double behavior_weight(const DecayConfig& cfg, Behavior kind) {
  switch (kind) {
    case Behavior::browse: return cfg.weight_browse;
    case Behavior::click: return cfg.weight_click;
    case Behavior::purchase: return cfg.weight_purchase;
    case Behavior::rating: return cfg.weight_rating;
  }
  throw Error("behavior_weight: bad kind");
}

double decay_weight(double delta_t_seconds, const DecayConfig& cfg) {
  if (!(cfg.half_life_seconds > 0.0)) throw ConfigError("decay half-life must be positive");
  if (delta_t_seconds < 0.0)
    throw PreconditionError("decay_weight: negative delta_t (clamp clock skew before calling)");
  return std::exp2(-delta_t_seconds / cfg.half_life_seconds);
}

UserInterestProfile update_profile(const UserInterestProfile& p, std::span<const Interaction> events,
                                   const ItemFeatureIndex& index, std::int64_t now,
                                   const DecayConfig& cfg, std::size_t* skipped) {
  if (now < p.last_updated)
    throw PreconditionError("update_profile: now precedes last_updated");

  UserInterestProfile out = p;
  out.last_updated = now;
  if (out.user == 0 && !events.empty()) out.user = events.front().user;

  out.weights.scale(decay_weight(static_cast<double>(now - p.last_updated), cfg));
  out.weights.drop_nonpositive();  // underflowed components vanish

  std::size_t skip_count = 0;
  for (const Interaction& ev : events) {
    if (ev.user != out.user)
      throw PreconditionError("update_profile: event belongs to another user");
    if (ev.ts > now)
      throw PreconditionError("update_profile: event timestamp after now");
    const FeatureVector* v = index.find(ev.item);
    if (v == nullptr) {
      ++skip_count;
      continue;
    }
    double signal = ev.kind == Behavior::rating ? (static_cast<double>(ev.rating) - 3.0) / 2.0 : 1.0;
    double s = behavior_weight(cfg, ev.kind) * signal *
               decay_weight(static_cast<double>(now - ev.ts), cfg);
    if (s != 0.0) {
      out.weights.add_scaled(*v, s);
      out.weights.drop_nonpositive();  // floor at zero after every event
    }
  }
  if (skipped != nullptr) *skipped = skip_count;
  return out;
}

std::string profile_to_json(const UserInterestProfile& p, const ItemFeatureIndex& index) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [fid, w] : p.weights.entries()) {
    if (fid >= index.terms.size()) throw Error("profile_to_json: feature id outside index");
    weights[index.terms[fid]] = w;
  }
  nlohmann::json doc;
  doc["user_id"] = p.user;
  doc["last_updated"] = p.last_updated;
  doc["weights"] = std::move(weights);
  return doc.dump(2) + "\n";
}

}  // namespace driftrec
