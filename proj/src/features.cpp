#include "driftrec/features.hpp"

#include <algorithm>
#include <cmath>

namespace driftrec {

FeatureVector FeatureVector::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  FeatureVector out;
  out.entries_.reserve(entries.size());
  for (const auto& [id, w] : entries) {
    if (!out.entries_.empty() && out.entries_.back().first == id)
      out.entries_.back().second += w;
    else
      out.entries_.push_back({id, w});
  }
  out.drop_nonpositive();
  return out;
}

double FeatureVector::norm() const {
  double ss = 0.0;
  for (const auto& [id, w] : entries_) ss += w * w;
  return std::sqrt(ss);
}

double FeatureVector::dot(const FeatureVector& other) const {
  double acc = 0.0;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() && b != other.entries_.end()) {
    if (a->first < b->first)
      ++a;
    else if (b->first < a->first)
      ++b;
    else {
      acc += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return acc;
}

double FeatureVector::at(FeatureId id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, FeatureId key) { return e.first < key; });
  return it != entries_.end() && it->first == id ? it->second : 0.0;
}

void FeatureVector::scale(double s) {
  for (auto& [id, w] : entries_) w *= s;
}

void FeatureVector::add_scaled(const FeatureVector& v, double s) {
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + v.entries_.size());
  auto a = entries_.begin();
  auto b = v.entries_.begin();
  while (a != entries_.end() || b != v.entries_.end()) {
    if (b == v.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      merged.push_back({b->first, s * b->second});
      ++b;
    } else {
      merged.push_back({a->first, a->second + s * b->second});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
}

void FeatureVector::drop_nonpositive() {
  std::erase_if(entries_, [](const Entry& e) { return !(e.second > 0.0); });
}

void FeatureVector::normalize() {
  double n = norm();
  if (n > 0.0) scale(1.0 / n);
}

const FeatureVector* ItemFeatureIndex::find(ItemId id) const {
  auto it = vectors.find(id);
  return it != vectors.end() ? &it->second : nullptr;
}

ItemFeatureIndex build_item_features(const Catalog& catalog) {
  ItemFeatureIndex index;

  // Vocabulary in lexicographic term order so feature ids are reproducible.
  std::map<std::string, FeatureId> ordered;
  for (const auto& [id, meta] : catalog)
    for (const auto& term : meta.terms) ordered.emplace(term, 0);
  FeatureId next = 0;
  for (auto& [term, fid] : ordered) {
    fid = next++;
    index.terms.push_back(term);
    index.vocabulary.emplace(term, fid);
  }
  index.doc_freq.assign(index.terms.size(), 0);

  // Document frequency counts each item once per distinct term.
  std::vector<std::vector<std::pair<FeatureId, std::uint32_t>>> counts;
  counts.reserve(catalog.size());
  std::vector<ItemId> ids;
  ids.reserve(catalog.size());
  for (const auto& [id, meta] : catalog) {
    std::map<FeatureId, std::uint32_t> tf;
    for (const auto& term : meta.terms) ++tf[ordered[term]];
    std::vector<std::pair<FeatureId, std::uint32_t>> row(tf.begin(), tf.end());
    for (const auto& [fid, n] : row) ++index.doc_freq[fid];
    counts.push_back(std::move(row));
    ids.push_back(id);
  }

  double n_docs = static_cast<double>(catalog.size());
  std::vector<double> idf(index.terms.size());
  for (std::size_t k = 0; k < idf.size(); ++k)
    idf[k] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(index.doc_freq[k]))) + 1.0;

  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<FeatureVector::Entry> entries;
    entries.reserve(counts[i].size());
    for (const auto& [fid, tf] : counts[i])
      entries.push_back({fid, static_cast<double>(tf) * idf[fid]});
    FeatureVector v = FeatureVector::from_entries(std::move(entries));
    v.normalize();
    if (v.empty()) ++index.zero_vector_items;
    index.vectors.emplace(ids[i], std::move(v));
  }
  return index;
}

}  // namespace driftrec
