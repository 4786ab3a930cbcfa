#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace driftrec {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

enum class Behavior { browse, click, purchase, rating };

const char* to_string(Behavior b);
bool behavior_from_string(const std::string& s, Behavior& out);

// One user-item event. `rating` is meaningful only when kind == Behavior::rating.
struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  Behavior kind = Behavior::browse;
  int rating = 0;        // in [1,5] when kind == rating, 0 otherwise
  std::int64_t ts = 0;   // seconds since epoch

  bool valid() const;
  friend bool operator==(const Interaction&, const Interaction&) = default;
};

struct ItemMeta {
  ItemId id = 0;
  std::string title;
  std::vector<std::string> terms;  // lowercased tokens (genre labels etc.)
  friend bool operator==(const ItemMeta&, const ItemMeta&) = default;
};

using Catalog = std::map<ItemId, ItemMeta>;

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t n_items = 0;         // distinct items in the interaction stream
  std::size_t n_interactions = 0;
  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

// Immutable after construction; safe for concurrent reads.
struct Dataset {
  std::string name;
  std::vector<Interaction> interactions;
  Catalog catalog;
  DatasetStats stats;
  bool catalog_incomplete = false;  // some interaction references an item absent from catalog

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

DatasetStats compute_stats(const std::vector<Interaction>& interactions);

// Builds a Dataset with recomputed stats and catalog_incomplete flag.
Dataset make_dataset(std::string name, std::vector<Interaction> interactions, Catalog catalog);

// Throws Error if any stored invariant does not hold.
void validate_dataset(const Dataset& d);

}  // namespace driftrec
