#include "driftrec/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "driftrec/errors.hpp"
#include "driftrec/rng.hpp"

namespace driftrec {

namespace {

constexpr std::int64_t kBaseTs = 1600000000;          // fixed epoch anchor
constexpr std::int64_t kSpanSeconds = 120LL * 86400;  // 120 days of activity
constexpr double kNoiseProb = 0.15;                   // off-cluster events

std::size_t cluster_count(std::size_t n_items) { return std::min<std::size_t>(8, n_items); }

std::size_t cluster_of(ItemId item, std::size_t n_clusters) {
  return static_cast<std::size_t>(item - 1) % n_clusters;
}

}  // namespace

Catalog generate_synthetic_catalog(std::size_t n_items) {
  if (n_items == 0) throw std::invalid_argument("generate_synthetic_catalog: n_items must be positive");
  std::size_t n_clusters = cluster_count(n_items);
  Catalog catalog;
  for (std::size_t i = 1; i <= n_items; ++i) {
    auto id = static_cast<ItemId>(i);
    ItemMeta meta;
    meta.id = id;
    meta.title = "item-" + std::to_string(i);
    meta.terms.push_back("cat-" + std::to_string(cluster_of(id, n_clusters)));
    meta.terms.push_back("tag-" + std::to_string((i * 31 + 7) % 5));
    catalog[id] = std::move(meta);
  }
  return catalog;
}

std::vector<Interaction> generate_synthetic_events(std::size_t n_users, std::size_t n_items,
                                                   std::size_t n_events, std::uint64_t seed,
                                                   const SynthOptions& options) {
  if (n_users == 0 || n_items == 0 || n_events == 0)
    throw std::invalid_argument("generate_synthetic_events: counts must be positive");
  if (n_events < n_users)
    throw PreconditionError("generate_synthetic_events: n_events < n_users, every user must appear");
  if (options.browse_frac < 0 || options.click_frac < 0 ||
      options.browse_frac + options.click_frac > 1.0)
    throw std::invalid_argument("generate_synthetic_events: bad behavior mix");

  std::size_t n_clusters = cluster_count(n_items);
  std::vector<std::vector<ItemId>> cluster_items(n_clusters);
  for (std::size_t i = 1; i <= n_items; ++i) {
    auto id = static_cast<ItemId>(i);
    cluster_items[cluster_of(id, n_clusters)].push_back(id);
  }

  Rng rng(seed);

  // Per-user taste: a primary cluster, a drift cluster, and the switch point.
  struct Taste {
    std::size_t before;
    std::size_t after;
    double switch_frac;
  };
  std::vector<Taste> tastes(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    std::size_t c1 = static_cast<std::size_t>(rng.bounded(n_clusters));
    std::size_t c2 = c1;
    if (n_clusters > 1) {
      c2 = static_cast<std::size_t>(rng.bounded(n_clusters - 1));
      if (c2 >= c1) ++c2;
    }
    tastes[u] = {c1, c2, 0.35 + 0.3 * rng.unit()};
  }

  std::vector<Interaction> events;
  events.reserve(n_events);
  for (std::size_t e = 0; e < n_events; ++e) {
    // first pass guarantees every user appears
    std::size_t uidx = e < n_users ? e : static_cast<std::size_t>(rng.bounded(n_users));
    const Taste& taste = tastes[uidx];

    auto offset = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(kSpanSeconds)));
    std::int64_t ts = kBaseTs + offset;
    double t_frac = static_cast<double>(offset) / static_cast<double>(kSpanSeconds);

    std::size_t cluster = t_frac < taste.switch_frac ? taste.before : taste.after;
    if (rng.unit() < kNoiseProb) cluster = static_cast<std::size_t>(rng.bounded(n_clusters));
    const auto& pool = cluster_items[cluster];
    ItemId item = pool[static_cast<std::size_t>(rng.bounded(pool.size()))];

    double b = rng.unit();
    Behavior kind = b < options.browse_frac                        ? Behavior::browse
                    : b < options.browse_frac + options.click_frac ? Behavior::click
                                                                   : Behavior::purchase;
    events.push_back({static_cast<UserId>(uidx + 1), item, kind, 0, ts});
  }

  std::sort(events.begin(), events.end(), [](const Interaction& a, const Interaction& b) {
    return std::tie(a.ts, a.user, a.item, a.kind) < std::tie(b.ts, b.user, b.item, b.kind);
  });
  return events;
}

Dataset generate_synthetic_dataset(std::string name, std::size_t n_users, std::size_t n_items,
                                   std::size_t n_events, std::uint64_t seed,
                                   const SynthOptions& options) {
  auto events = generate_synthetic_events(n_users, n_items, n_events, seed, options);
  return make_dataset(std::move(name), std::move(events), generate_synthetic_catalog(n_items));
}

}  // namespace driftrec
