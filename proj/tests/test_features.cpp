#include "doctest.h"

#include <cmath>

#include "driftrec/features.hpp"

using namespace driftrec;

namespace {

Catalog two_item_catalog() {
  // item 1 carries terms {a, b}, item 2 carries {a}: df(a)=2, df(b)=1
  Catalog cat;
  cat[1] = {1, "one", {"a", "b"}};
  cat[2] = {2, "two", {"a"}};
  return cat;
}

}  // namespace

TEST_CASE("feature vector construction sorts, merges, and drops nonpositives") {
  auto v = FeatureVector::from_entries({{3, 1.0}, {1, 2.0}, {3, 0.5}, {2, -1.0}, {4, 0.0}});
  REQUIRE(v.size() == 2);
  CHECK(v.entries()[0] == FeatureVector::Entry{1, 2.0});
  CHECK(v.entries()[1] == FeatureVector::Entry{3, 1.5});
  CHECK(v.at(1) == 2.0);
  CHECK(v.at(2) == 0.0);  // absent
}

TEST_CASE("feature vector algebra") {
  auto a = FeatureVector::from_entries({{1, 3.0}, {2, 4.0}});
  auto b = FeatureVector::from_entries({{2, 1.0}, {3, 5.0}});

  CHECK(a.norm() == 5.0);  // 3-4-5 triangle
  CHECK(a.dot(b) == 4.0);  // only feature 2 overlaps
  CHECK(a.dot(FeatureVector{}) == 0.0);

  FeatureVector sum = a;
  sum.add_scaled(b, 2.0);
  CHECK(sum.at(1) == 3.0);
  CHECK(sum.at(2) == 6.0);
  CHECK(sum.at(3) == 10.0);

  FeatureVector down = a;
  down.add_scaled(b, -4.0);  // feature 2 -> 0, feature 3 -> -20
  down.drop_nonpositive();
  REQUIRE(down.size() == 1);
  CHECK(down.at(1) == 3.0);

  FeatureVector unit = a;
  unit.normalize();
  CHECK(unit.at(1) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(unit.at(2) == doctest::Approx(0.8).epsilon(1e-12));

  FeatureVector zero;
  zero.normalize();  // no-op, no NaN
  CHECK(zero.empty());
}

TEST_CASE("single item with one term gets weight exactly 1.0") {
  Catalog cat;
  cat[1] = {1, "solo", {"only"}};
  auto index = build_item_features(cat);
  const FeatureVector* v = index.find(1);
  REQUIRE(v != nullptr);
  REQUIRE(v->size() == 1);
  CHECK(v->entries()[0].second == 1.0);
  CHECK(index.zero_vector_items == 0);
}

TEST_CASE("two-item corpus reproduces the smoothed-idf hand computation") {
  auto index = build_item_features(two_item_catalog());

  // idf(a) = ln(3/3)+1 = 1.0, idf(b) = ln(3/2)+1 ~= 1.405465
  // item 1 raw (1.0, 1.405465) -> normalized (0.579739, 0.814802)
  const FeatureVector* v1 = index.find(1);
  REQUIRE(v1 != nullptr);
  REQUIRE(v1->size() == 2);
  FeatureId a = index.vocabulary.at("a");
  FeatureId b = index.vocabulary.at("b");
  CHECK(v1->at(a) == doctest::Approx(0.579739).epsilon(1e-6));
  CHECK(v1->at(b) == doctest::Approx(0.814802).epsilon(1e-6));

  const FeatureVector* v2 = index.find(2);
  REQUIRE(v2 != nullptr);
  REQUIRE(v2->size() == 1);
  CHECK(v2->at(a) == 1.0);

  CHECK(index.doc_freq[a] == 2);
  CHECK(index.doc_freq[b] == 1);
}

TEST_CASE("ubiquitous terms weigh less than rare ones") {
  Catalog cat;
  cat[1] = {1, "x", {"common", "rare"}};
  cat[2] = {2, "y", {"common"}};
  cat[3] = {3, "z", {"common"}};
  auto index = build_item_features(cat);
  const FeatureVector* v = index.find(1);
  REQUIRE(v != nullptr);
  CHECK(v->at(index.vocabulary.at("rare")) > v->at(index.vocabulary.at("common")));
}

TEST_CASE("term frequency counts repeated tokens") {
  Catalog cat;
  cat[1] = {1, "x", {"dup", "dup", "other"}};
  cat[2] = {2, "y", {"other"}};
  auto index = build_item_features(cat);
  const FeatureVector* v = index.find(1);
  REQUIRE(v != nullptr);
  // tf(dup)=2 with the rarer idf, so it must dominate
  CHECK(v->at(index.vocabulary.at("dup")) > v->at(index.vocabulary.at("other")));
  CHECK(index.doc_freq[index.vocabulary.at("dup")] == 1);  // documents, not tokens
}

TEST_CASE("every built vector has unit norm unless zero-flagged") {
  Catalog cat;
  for (ItemId i = 1; i <= 40; ++i) {
    std::vector<std::string> terms;
    for (ItemId t = 0; t <= i % 5; ++t) terms.push_back("t" + std::to_string((i + t) % 11));
    cat[i] = {i, "item", terms};
  }
  cat[41] = {41, "bare", {}};

  auto index = build_item_features(cat);
  CHECK(index.zero_vector_items == 1);
  REQUIRE(index.find(41) != nullptr);
  CHECK(index.find(41)->empty());
  for (const auto& [id, v] : index.vectors) {
    if (v.empty()) continue;
    CHECK(std::abs(v.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("vocabulary is ordered lexicographically and doc_freq is total") {
  auto index = build_item_features(two_item_catalog());
  REQUIRE(index.terms.size() == 2);
  CHECK(index.terms[0] == "a");
  CHECK(index.terms[1] == "b");
  CHECK(index.vocabulary.at("a") == 0);
  CHECK(index.vocabulary.at("b") == 1);
  CHECK(index.find(99) == nullptr);
}
