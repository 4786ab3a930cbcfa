#pragma once

#include <cstdint>

#include "driftrec/types.hpp"

namespace driftrec {

struct SynthOptions {
  double browse_frac = 0.7;
  double click_frac = 0.2;  // purchase takes the remainder
};

// Seeded synthetic behavior data. Items are partitioned into interest
// clusters; each user favors one cluster, then switches to another at a
// random midpoint of the time range, so time decay has something to detect.
// Pure function of its arguments: fixed inputs give an identical event list.
std::vector<Interaction> generate_synthetic_events(std::size_t n_users, std::size_t n_items,
                                                   std::size_t n_events, std::uint64_t seed,
                                                   const SynthOptions& options = {});

// Catalog for the synthetic items: cluster term `cat-<k>` plus a `tag-<j>` token.
Catalog generate_synthetic_catalog(std::size_t n_items);

// Events plus catalog as one dataset.
Dataset generate_synthetic_dataset(std::string name, std::size_t n_users, std::size_t n_items,
                                   std::size_t n_events, std::uint64_t seed,
                                   const SynthOptions& options = {});

}  // namespace driftrec
