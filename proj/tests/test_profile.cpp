#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "driftrec/errors.hpp"
#include "driftrec/features.hpp"
#include "driftrec/profile.hpp"
#include "driftrec/rng.hpp"

using namespace driftrec;

namespace {

constexpr double kHalfLife = 30.0 * 86400.0;

ItemFeatureIndex one_term_index() {
  Catalog cat;
  cat[1] = {1, "solo", {"only"}};  // vector {only: 1.0}
  return build_item_features(cat);
}

ItemFeatureIndex three_item_index() {
  Catalog cat;
  cat[1] = {1, "a", {"alpha", "both"}};
  cat[2] = {2, "b", {"beta", "both"}};
  cat[3] = {3, "c", {"gamma"}};
  return build_item_features(cat);
}

}  // namespace

TEST_CASE("behavior weights default to the declared strengths") {
  DecayConfig cfg;
  CHECK(behavior_weight(cfg, Behavior::purchase) == 1.0);
  CHECK(behavior_weight(cfg, Behavior::click) == 0.5);
  CHECK(behavior_weight(cfg, Behavior::browse) == 0.2);
  CHECK(behavior_weight(cfg, Behavior::rating) == 1.0);
  CHECK(behavior_weight(cfg, Behavior::purchase) >= behavior_weight(cfg, Behavior::click));
  CHECK(behavior_weight(cfg, Behavior::click) >= behavior_weight(cfg, Behavior::browse));
}

TEST_CASE("decay follows the half-life law") {
  DecayConfig cfg;
  CHECK(decay_weight(0.0, cfg) == 1.0);
  CHECK(decay_weight(kHalfLife, cfg) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(decay_weight(2 * kHalfLife, cfg) == doctest::Approx(0.25).epsilon(1e-12));

  DecayConfig hour;
  hour.half_life_seconds = 3600.0;
  CHECK(decay_weight(3600.0, hour) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("decay is monotone and multiplicative over sampled spans") {
  DecayConfig cfg;
  Rng rng(99);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    double w = decay_weight(i * 86400.0, cfg);
    CHECK(w <= prev);
    CHECK(w > 0.0);
    prev = w;
  }
  for (int i = 0; i < 100; ++i) {
    double a = rng.unit() * 200.0 * 86400.0;
    double b = rng.unit() * 200.0 * 86400.0;
    CHECK(decay_weight(a + b, cfg) ==
          doctest::Approx(decay_weight(a, cfg) * decay_weight(b, cfg)).epsilon(1e-12));
  }
}

TEST_CASE("decay rejects bad inputs") {
  DecayConfig cfg;
  CHECK_THROWS_AS(decay_weight(-1.0, cfg), PreconditionError);
  DecayConfig broken;
  broken.half_life_seconds = 0.0;
  CHECK_THROWS_AS(decay_weight(10.0, broken), ConfigError);
}

TEST_CASE("update with no events and unchanged clock is the identity") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;
  p.weights = FeatureVector::from_entries({{0, 1.0}});
  p.last_updated = 50;

  UserInterestProfile out = update_profile(p, {}, index, 50, {});
  CHECK(out == p);
}

TEST_CASE("a purchase at the current instant adds the full item vector") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;

  std::vector<Interaction> events = {{1, 1, Behavior::purchase, 0, 1000}};
  UserInterestProfile out = update_profile(p, events, index, 1000, {});
  REQUIRE(out.weights.size() == 1);
  CHECK(out.weights.at(0) == 1.0);
  CHECK(out.last_updated == 1000);
}

TEST_CASE("idle profiles halve per half-life") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;
  p.weights = FeatureVector::from_entries({{0, 1.0}});
  p.last_updated = 0;

  auto out = update_profile(p, {}, index, static_cast<std::int64_t>(kHalfLife), {});
  REQUIRE(out.weights.size() == 1);
  CHECK(out.weights.at(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rating events push by (value-3)/2") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;

  SUBCASE("five-star acts like a purchase") {
    std::vector<Interaction> ev = {{1, 1, Behavior::rating, 5, 100}};
    CHECK(update_profile(p, ev, index, 100, {}).weights.at(0) == 1.0);
  }
  SUBCASE("three-star is neutral") {
    std::vector<Interaction> ev = {{1, 1, Behavior::rating, 3, 100}};
    CHECK(update_profile(p, ev, index, 100, {}).weights.empty());
  }
  SUBCASE("one-star pushes down and floors at zero") {
    p.weights = FeatureVector::from_entries({{0, 0.4}});
    p.last_updated = 100;
    std::vector<Interaction> ev = {{1, 1, Behavior::rating, 1, 100}};
    auto out = update_profile(p, ev, index, 100, {});
    CHECK(out.weights.empty());  // 0.4 - 1.0 floored to 0 and dropped
  }
}

TEST_CASE("splitting an event batch does not change the outcome") {
  auto index = three_item_index();
  Rng rng(4242);
  std::vector<Interaction> events;
  for (int i = 0; i < 12; ++i) {
    Behavior kind = static_cast<Behavior>(rng.bounded(4));
    int rating = kind == Behavior::rating ? 1 + static_cast<int>(rng.bounded(5)) : 0;
    events.push_back({1, static_cast<ItemId>(1 + rng.bounded(3)), kind, rating,
                      static_cast<std::int64_t>(rng.bounded(1000))});
  }

  UserInterestProfile p;
  p.user = 1;
  p.weights = FeatureVector::from_entries({{0, 0.3}, {2, 0.8}});
  p.last_updated = 0;
  const std::int64_t now = 2000;

  auto combined = update_profile(p, events, index, now, {});
  for (std::size_t split = 0; split <= events.size(); ++split) {
    auto head = update_profile(
        p, {events.begin(), events.begin() + static_cast<std::ptrdiff_t>(split)}, index, now, {});
    auto both = update_profile(
        head, {events.begin() + static_cast<std::ptrdiff_t>(split), events.end()}, index, now, {});
    CHECK(both.last_updated == combined.last_updated);
    for (FeatureId f = 0; f < index.terms.size(); ++f)
      CHECK(both.weights.at(f) == doctest::Approx(combined.weights.at(f)).epsilon(1e-9));
  }
}

TEST_CASE("profile weights never go negative under hostile ratings") {
  auto index = three_item_index();
  Rng rng(7);
  UserInterestProfile p;
  p.user = 1;
  std::int64_t now = 0;
  for (int round = 0; round < 50; ++round) {
    now += static_cast<std::int64_t>(rng.bounded(100000));
    std::vector<Interaction> ev = {{1, static_cast<ItemId>(1 + rng.bounded(3)), Behavior::rating,
                                    1 + static_cast<int>(rng.bounded(2)),  // only 1s and 2s
                                    now}};
    p = update_profile(p, ev, index, now, {});
    for (const auto& [id, w] : p.weights.entries()) CHECK(w > 0.0);
  }
}

TEST_CASE("events for unknown items are skipped and counted") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;
  std::vector<Interaction> ev = {
      {1, 99, Behavior::purchase, 0, 10},  // item 99 not in index
      {1, 1, Behavior::purchase, 0, 10},
  };
  std::size_t skipped = 0;
  auto out = update_profile(p, ev, index, 10, {}, &skipped);
  CHECK(skipped == 1);
  CHECK(out.weights.at(0) == 1.0);
}

TEST_CASE("update rejects foreign events and clock skew") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 1;
  p.last_updated = 100;

  std::vector<Interaction> foreign = {{2, 1, Behavior::browse, 0, 150}};
  CHECK_THROWS_AS(update_profile(p, foreign, index, 200, {}), PreconditionError);

  std::vector<Interaction> future = {{1, 1, Behavior::browse, 0, 300}};
  CHECK_THROWS_AS(update_profile(p, future, index, 200, {}), PreconditionError);

  CHECK_THROWS_AS(update_profile(p, {}, index, 50, {}), PreconditionError);  // now before last_updated
}

TEST_CASE("a fresh profile adopts the first event's user") {
  auto index = one_term_index();
  UserInterestProfile blank;  // user 0
  std::vector<Interaction> ev = {{7, 1, Behavior::click, 0, 10}};
  CHECK(update_profile(blank, ev, index, 10, {}).user == 7);
}

TEST_CASE("profile JSON names terms and sorts them") {
  auto index = one_term_index();
  UserInterestProfile p;
  p.user = 7;
  p.last_updated = 100;
  p.weights = FeatureVector::from_entries({{0, 1.0}});

  CHECK(profile_to_json(p, index) ==
        "{\n"
        "  \"last_updated\": 100,\n"
        "  \"user_id\": 7,\n"
        "  \"weights\": {\n"
        "    \"only\": 1.0\n"
        "  }\n"
        "}\n");

  UserInterestProfile bad;
  bad.user = 1;
  bad.weights = FeatureVector::from_entries({{42, 1.0}});  // feature id beyond vocabulary
  CHECK_THROWS_AS(profile_to_json(bad, index), Error);
}
