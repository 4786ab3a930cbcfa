#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "driftrec/types.hpp"

namespace driftrec {

using FeatureId = std::uint32_t;

// Sparse feature->weight vector stored as entries sorted by feature id.
// Built vectors keep only strictly positive weights; transient negatives may
// appear during profile updates and are removed via drop_nonpositive().
class FeatureVector {
 public:
  using Entry = std::pair<FeatureId, double>;

  FeatureVector() = default;

  // Sorts, merges duplicate ids, drops entries <= 0.
  static FeatureVector from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  double norm() const;
  double dot(const FeatureVector& other) const;
  double at(FeatureId id) const;  // 0 when absent

  void scale(double s);
  void add_scaled(const FeatureVector& v, double s);  // *this += s * v
  void drop_nonpositive();
  void normalize();  // L2; no-op on the zero vector

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<Entry> entries_;
};

// TF-IDF index over a catalog. Immutable after build; safe for concurrent reads.
struct ItemFeatureIndex {
  std::map<ItemId, FeatureVector> vectors;  // unit norm, or empty for zero-flagged items
  std::vector<std::string> terms;           // feature id -> term
  std::unordered_map<std::string, FeatureId> vocabulary;
  std::vector<std::uint32_t> doc_freq;      // indexed by feature id
  std::size_t zero_vector_items = 0;

  const FeatureVector* find(ItemId id) const;
};

// weight(item, k) = tf * (ln((1+N)/(1+df_k)) + 1), then each vector is
// L2-normalized. An item with an empty term bag keeps a zero vector (scored 0).
ItemFeatureIndex build_item_features(const Catalog& catalog);

}  // namespace driftrec
