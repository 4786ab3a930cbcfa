#include "driftrec/cf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "driftrec/errors.hpp"

namespace driftrec {

namespace {

double pseudo_rating(Behavior kind) {
  switch (kind) {
    case Behavior::browse: return kBrowsePseudoRating;
    case Behavior::click: return kClickPseudoRating;
    case Behavior::purchase: return kPurchasePseudoRating;
    case Behavior::rating: break;
  }
  throw Error("pseudo_rating: bad kind");
}

// Rating of `item` inside a by-item-sorted rating row, or nullptr.
const double* find_rating(const RatingMatrix::ItemRatings& row, ItemId item) {
  auto it = std::lower_bound(row.begin(), row.end(), item,
                             [](const auto& e, ItemId key) { return e.first < key; });
  return it != row.end() && it->first == item ? &it->second : nullptr;
}

double clamp_rating(double r) { return std::clamp(r, 1.0, 5.0); }

}  // namespace

RatingMatrix RatingMatrix::from_interactions(std::span<const Interaction> interactions) {
  // Explicit ratings dominate; behavior events fall back to pseudo-rating
  // levels, keeping the strongest signal seen for the pair.
  std::map<std::pair<UserId, ItemId>, double> explicit_r;
  std::map<std::pair<UserId, ItemId>, double> pseudo_r;
  for (const Interaction& ev : interactions) {
    std::pair<UserId, ItemId> key{ev.user, ev.item};
    if (ev.kind == Behavior::rating) {
      explicit_r[key] = static_cast<double>(ev.rating);
    } else {
      double level = pseudo_rating(ev.kind);
      auto [it, inserted] = pseudo_r.emplace(key, level);
      if (!inserted && level > it->second) it->second = level;
    }
  }
  for (const auto& [key, value] : explicit_r) pseudo_r[key] = value;

  RatingMatrix m;
  for (const auto& [key, value] : pseudo_r) {
    m.by_user[key.first].push_back({key.second, value});
    m.by_item[key.second].push_back({key.first, value});
  }
  // map iteration already emits both views sorted; just compute the means
  for (const auto& [u, row] : m.by_user) {
    double sum = 0.0;
    for (const auto& [item, r] : row) sum += r;
    m.user_means[u] = sum / static_cast<double>(row.size());
  }
  return m;
}

double RatingMatrix::mean(UserId u) const {
  auto it = user_means.find(u);
  if (it == user_means.end())
    throw NotFoundError("rating matrix: unknown user " + std::to_string(u));
  return it->second;
}

const RatingMatrix::ItemRatings* RatingMatrix::ratings_of(UserId u) const {
  auto it = by_user.find(u);
  return it != by_user.end() ? &it->second : nullptr;
}

std::vector<ItemId> RatingMatrix::item_ids() const {
  std::vector<ItemId> ids;
  ids.reserve(by_item.size());
  for (const auto& [id, row] : by_item) ids.push_back(id);
  return ids;
}

double pearson_sim(const RatingMatrix::ItemRatings& a, const RatingMatrix::ItemRatings& b,
                   int min_overlap) {
  // Product-moment form over the co-rated subvectors. With integer-valued
  // ratings the sums are exact, so zero-variance cases come out exactly 0.
  double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      double x = ia->second, y = ib->second;
      n += 1;
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
      ++ia;
      ++ib;
    }
  }
  if (n < static_cast<double>(min_overlap) || n < 2) return 0.0;
  double vx = n * sxx - sx * sx;
  double vy = n * syy - sy * sy;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  double r = (n * sxy - sx * sy) / (std::sqrt(vx) * std::sqrt(vy));
  return std::clamp(r, -1.0, 1.0);
}

double cosine_sim(const RatingMatrix::ItemRatings& a, const RatingMatrix::ItemRatings& b,
                  int min_overlap) {
  double n = 0, sxx = 0, syy = 0, sxy = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      n += 1;
      sxx += ia->second * ia->second;
      syy += ib->second * ib->second;
      sxy += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (n < static_cast<double>(min_overlap) || sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

Neighborhood build_neighborhood(const RatingMatrix& m, UserId u, const CfConfig& cfg) {
  const RatingMatrix::ItemRatings* mine = m.ratings_of(u);
  if (mine == nullptr) throw NotFoundError("cf: unknown user " + std::to_string(u));

  Neighborhood hood;
  for (const auto& [v, row] : m.by_user) {
    if (v == u) continue;
    double s = cfg.sim == Similarity::pearson ? pearson_sim(*mine, row, cfg.min_overlap)
                                              : cosine_sim(*mine, row, cfg.min_overlap);
    if (s == 0.0 || std::abs(s) < cfg.sim_floor) continue;
    hood.members.push_back({v, s});
  }
  std::sort(hood.members.begin(), hood.members.end(), [](const auto& a, const auto& b) {
    double ma = std::abs(a.second), mb = std::abs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  });
  if (cfg.k_neighbors >= 0 && hood.members.size() > static_cast<std::size_t>(cfg.k_neighbors))
    hood.members.resize(static_cast<std::size_t>(cfg.k_neighbors));
  hood.by_id = hood.members;
  std::sort(hood.by_id.begin(), hood.by_id.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return hood;
}

double predict_cf(const RatingMatrix& m, UserId u, ItemId i, const Neighborhood& hood) {
  double mean_u = m.mean(u);
  double num = 0.0, den = 0.0;
  for (const auto& [v, sim] : hood.by_id) {  // ascending id: fixed reduction order
    const double* r = find_rating(*m.ratings_of(v), i);
    if (r == nullptr) continue;
    num += (*r - m.mean(v)) * sim;
    den += std::abs(sim);
  }
  if (den == 0.0) return mean_u;
  return clamp_rating(mean_u + num / den);
}

std::vector<ScoredItem> recommend_cf(const RatingMatrix& m, UserId u, const CfConfig& cfg,
                                     std::size_t n) {
  const RatingMatrix::ItemRatings* mine = m.ratings_of(u);
  if (mine == nullptr) throw NotFoundError("cf: unknown user " + std::to_string(u));
  Neighborhood hood = build_neighborhood(m, u, cfg);

  // Accumulate per-item sums neighbor by neighbor in ascending id order, so
  // each item's prediction adds the same doubles in the same order as a
  // one-item predict_cf call would.
  std::map<ItemId, std::pair<double, double>> acc;  // item -> (num, den)
  for (const auto& [v, sim] : hood.by_id) {
    for (const auto& [item, r] : *m.ratings_of(v)) {
      if (find_rating(*mine, item) != nullptr) continue;
      auto& [num, den] = acc[item];
      num += (r - m.mean(v)) * sim;
      den += std::abs(sim);
    }
  }

  double mean_u = m.mean(u);
  std::vector<ScoredItem> scored;
  for (ItemId item : m.item_ids()) {
    if (find_rating(*mine, item) != nullptr) continue;
    auto it = acc.find(item);
    double score = it != acc.end() && it->second.second != 0.0
                       ? clamp_rating(mean_u + it->second.first / it->second.second)
                       : mean_u;
    scored.push_back({item, score});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  if (scored.size() > n) scored.resize(n);
  return scored;
}

}  // namespace driftrec
