#include "driftrec/types.hpp"

#include <set>
#include <utility>

#include "driftrec/errors.hpp"

namespace driftrec {

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::browse: return "browse";
    case Behavior::click: return "click";
    case Behavior::purchase: return "purchase";
    case Behavior::rating: return "rating";
  }
  return "?";
}

bool behavior_from_string(const std::string& s, Behavior& out) {
  if (s == "browse") out = Behavior::browse;
  else if (s == "click") out = Behavior::click;
  else if (s == "purchase") out = Behavior::purchase;
  else if (s == "rating") out = Behavior::rating;
  else return false;
  return true;
}

bool Interaction::valid() const {
  if (user == 0 || item == 0 || ts < 0) return false;
  if (kind == Behavior::rating) return rating >= 1 && rating <= 5;
  return rating == 0;
}

DatasetStats compute_stats(const std::vector<Interaction>& interactions) {
  std::set<UserId> users;
  std::set<ItemId> items;
  for (const auto& it : interactions) {
    users.insert(it.user);
    items.insert(it.item);
  }
  return DatasetStats{users.size(), items.size(), interactions.size()};
}

Dataset make_dataset(std::string name, std::vector<Interaction> interactions, Catalog catalog) {
  Dataset d;
  d.name = std::move(name);
  d.interactions = std::move(interactions);
  d.catalog = std::move(catalog);
  d.stats = compute_stats(d.interactions);
  d.catalog_incomplete = false;
  for (const auto& it : d.interactions) {
    if (d.catalog.find(it.item) == d.catalog.end()) {
      d.catalog_incomplete = true;
      break;
    }
  }
  return d;
}

void validate_dataset(const Dataset& d) {
  for (std::size_t i = 0; i < d.interactions.size(); ++i) {
    if (!d.interactions[i].valid())
      throw Error("dataset '" + d.name + "': invalid interaction at index " + std::to_string(i));
  }
  if (d.stats != compute_stats(d.interactions))
    throw Error("dataset '" + d.name + "': stored stats disagree with recomputed counts");
  for (const auto& [id, meta] : d.catalog) {
    if (id != meta.id)
      throw Error("dataset '" + d.name + "': catalog key/id mismatch for item " + std::to_string(id));
  }
  bool incomplete = false;
  for (const auto& it : d.interactions) {
    if (d.catalog.find(it.item) == d.catalog.end()) {
      incomplete = true;
      break;
    }
  }
  if (incomplete && !d.catalog_incomplete)
    throw Error("dataset '" + d.name + "': interactions reference items missing from catalog "
                "but the catalog-incomplete flag is not set");
}

}  // namespace driftrec
