#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "driftrec/apriori.hpp"
#include "driftrec/errors.hpp"
#include "driftrec/rng.hpp"
#include "oracles.hpp"

using namespace driftrec;

namespace {

// A=1, B=2, C=3 keeps the classic three-basket example readable.
const std::vector<Itemset> kThreeBaskets = {{1, 2}, {1, 2}, {1, 3}};

}  // namespace

TEST_CASE("three-basket fixture: frequent itemsets by hand") {
  auto frequent = mine_frequent_itemsets(kThreeBaskets, 0.6, 3);
  REQUIRE(frequent.size() == 3);
  CHECK(frequent[0] == FrequentItemset{{1}, 1.0});
  CHECK(frequent[1] == FrequentItemset{{2}, 2.0 / 3.0});
  CHECK(frequent[2] == FrequentItemset{{1, 2}, 2.0 / 3.0});
  // {3} at 1/3 and {1,3} at 1/3 fall below min_support 0.6
}

TEST_CASE("three-basket fixture: rules by hand, ordered by confidence") {
  auto rules = mine_rules(kThreeBaskets, 0.6, 0.6, 3, 1);
  REQUIRE(rules.size() == 2);
  CHECK(rules[0] == AssociationRule{{2}, {1}, 2.0 / 3.0, 1.0});        // B -> A
  CHECK(rules[1] == AssociationRule{{1}, {2}, 2.0 / 3.0, 2.0 / 3.0});  // A -> B
}

TEST_CASE("a threshold above every frequency yields nothing") {
  const std::vector<Itemset> spread = {{1}, {2}, {3}, {4}};  // every support 1/4
  CHECK(mine_frequent_itemsets(spread, 0.5, 3).empty());
  CHECK(mine_rules(spread, 0.5, 0.1, 3, 1).empty());
}

TEST_CASE("single transaction: every nonempty subset is frequent with support 1") {
  auto frequent = mine_frequent_itemsets({{1, 2, 3}}, 1.0, 3);
  REQUIRE(frequent.size() == 7);
  for (const auto& f : frequent) CHECK(f.support == 1.0);
  CHECK(frequent[0].items == Itemset{1});
  CHECK(frequent[6].items == Itemset{1, 2, 3});
}

TEST_CASE("max_len truncates the lattice ascent") {
  auto frequent = mine_frequent_itemsets({{1, 2, 3}}, 1.0, 2);
  REQUIRE(frequent.size() == 6);  // three singletons + three pairs
  for (const auto& f : frequent) CHECK(f.items.size() <= 2);
}

TEST_CASE("empty transaction list mines to nothing") {
  CHECK(mine_frequent_itemsets({}, 0.5, 3).empty());
  CHECK(mine_rules({}, 0.5, 0.5, 3, 1).empty());
}

TEST_CASE("mining rejects out-of-range thresholds") {
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.0, 0.5, 3, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 1.1, 0.5, 3, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.5, 0.0, 3, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.5, 1.1, 3, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.5, 0.5, 0, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.5, 0.5, 31, 1), PreconditionError);
  CHECK_THROWS_AS(mine_rules(kThreeBaskets, 0.5, 0.5, 3, 0), PreconditionError);
  CHECK_THROWS_AS(mine_frequent_itemsets(kThreeBaskets, 0.5, 0), PreconditionError);
}

TEST_CASE("downward closure holds on random instances") {
  Rng rng(606);
  for (int t = 0; t < 20; ++t) {
    auto tx = oracle::random_transactions(rng);
    auto frequent = mine_frequent_itemsets(tx, 0.2, 4);
    std::set<Itemset> seen;
    for (const auto& f : frequent) seen.insert(f.items);
    for (const auto& f : frequent) {
      if (f.items.size() < 2) continue;
      for (std::size_t drop = 0; drop < f.items.size(); ++drop) {
        Itemset subset = f.items;
        subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
        CHECK(seen.count(subset) == 1);
      }
    }
  }
}

TEST_CASE("level-wise mining equals exhaustive enumeration on small instances") {
  Rng rng(7070);
  for (int t = 0; t < 15; ++t) {
    auto tx = oracle::random_transactions(rng);
    double min_support = 0.1 + 0.4 * rng.unit();
    double min_conf = 0.2 + 0.6 * rng.unit();
    int max_len = 1 + static_cast<int>(rng.bounded(4));
    int max_consequent = 1 + static_cast<int>(rng.bounded(2));

    auto expect = oracle::exhaustive_mine(tx, min_support, min_conf, max_len, max_consequent);
    CHECK(mine_frequent_itemsets(tx, min_support, max_len) == expect.frequent);
    CHECK(mine_rules(tx, min_support, min_conf, max_len, max_consequent) == expect.rules);
  }
}

TEST_CASE("multi-item consequents appear once allowed") {
  // {1,2,3} in every basket: with max_consequent 2, rules like {1} -> {2,3} exist
  std::vector<Itemset> tx = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  auto rules = mine_rules(tx, 1.0, 1.0, 3, 2);
  bool saw_pair_consequent = false;
  for (const auto& r : rules) {
    CHECK(r.consequent.size() <= 2);
    saw_pair_consequent = saw_pair_consequent || r.consequent.size() == 2;
  }
  CHECK(saw_pair_consequent);

  for (const auto& r : mine_rules(tx, 1.0, 1.0, 3, 1)) CHECK(r.consequent.size() == 1);
}

TEST_CASE("user baskets collect purchases, clicks, and high ratings") {
  std::vector<Interaction> events = {
      {1, 10, Behavior::purchase, 0, 1},
      {1, 11, Behavior::click, 0, 2},
      {1, 12, Behavior::browse, 0, 3},        // browsing is not ownership
      {1, 13, Behavior::rating, 4, 4},        // at the threshold: in
      {1, 14, Behavior::rating, 3, 5},        // below: out
      {1, 10, Behavior::purchase, 0, 6},      // duplicate collapses
      {3, 20, Behavior::purchase, 0, 7},
      {2, 30, Behavior::rating, 5, 8},
  };
  auto baskets = user_transactions(events);
  REQUIRE(baskets.size() == 3);
  CHECK(baskets[0] == Itemset{10, 11, 13});  // user 1
  CHECK(baskets[1] == Itemset{30});          // user 2
  CHECK(baskets[2] == Itemset{20});          // user 3

  auto strict = user_transactions(events, 5);
  REQUIRE(strict.size() == 3);
  CHECK(strict[0] == Itemset{10, 11});  // the 4-star rating no longer qualifies
}

TEST_CASE("browse-only streams produce no baskets") {
  std::vector<Interaction> events = {{1, 10, Behavior::browse, 0, 1},
                                     {2, 11, Behavior::browse, 0, 2}};
  CHECK(user_transactions(events).empty());
}

TEST_CASE("rule recommendations fire only owned antecedents") {
  std::vector<AssociationRule> rules = {
      {{1}, {2}, 0.5, 0.8},
      {{1, 3}, {4}, 0.4, 0.9},
      {{7}, {8}, 0.6, 0.7},
  };

  SUBCASE("nothing owned, nothing fires") {
    CHECK(recommend_rules(rules, {}, 10).empty());
    CHECK(recommend_rules(rules, {99}, 10).empty());
  }
  SUBCASE("single firing rule") {
    auto out = recommend_rules(rules, {1}, 10);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == ScoredItem{2, 0.8});
  }
  SUBCASE("owned consequents are suppressed") {
    CHECK(recommend_rules(rules, {1, 2}, 10).empty());
  }
  SUBCASE("subset antecedents fire and rank by confidence") {
    auto out = recommend_rules(rules, {1, 3, 7}, 10);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == ScoredItem{4, 0.9});  // conf 0.9
    CHECK(out[1] == ScoredItem{2, 0.8});  // conf 0.8
    CHECK(out[2] == ScoredItem{8, 0.7});  // conf 0.7
  }
  SUBCASE("an item keeps its best confidence across firing rules") {
    std::vector<AssociationRule> dup = {
        {{1}, {9}, 0.3, 0.6},
        {{2}, {9}, 0.5, 0.9},
    };
    auto out = recommend_rules(dup, {1, 2}, 10);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == ScoredItem{9, 0.9});
  }
  SUBCASE("truncation respects the ranking") {
    auto out = recommend_rules(rules, {1, 3, 7}, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0].item == 4);
    CHECK(out[1].item == 2);
  }
}

TEST_CASE("rules CSV round-trips exactly") {
  auto rules = mine_rules(kThreeBaskets, 0.3, 0.3, 3, 2);
  REQUIRE_FALSE(rules.empty());
  std::string csv = rules_to_csv(rules);
  CHECK(rules_from_csv(csv) == rules);  // bit-exact via round-trip formatting

  Rng rng(515);
  for (int t = 0; t < 10; ++t) {
    auto tx = oracle::random_transactions(rng);
    auto mined = mine_rules(tx, 0.15, 0.3, 4, 2);
    CHECK(rules_from_csv(rules_to_csv(mined)) == mined);
  }
}

TEST_CASE("rules CSV rejects malformed input") {
  CHECK_THROWS_AS(rules_from_csv(""), ParseError);
  CHECK_THROWS_AS(rules_from_csv("wrong,header,line,x\n"), ParseError);
  const std::string header = "antecedent,consequent,support,confidence\n";
  CHECK(rules_from_csv(header).empty());
  CHECK_THROWS_AS(rules_from_csv(header + "1,2,notanumber,0.5\n"), ParseError);
  CHECK_THROWS_AS(rules_from_csv(header + "1,2,0.5\n"), ParseError);          // missing field
  CHECK_THROWS_AS(rules_from_csv(header + ",2,0.5,0.5\n"), ParseError);       // empty antecedent
  CHECK_THROWS_AS(rules_from_csv(header + "2|1,3,0.5,0.5\n"), ParseError);    // unsorted itemset
  CHECK_THROWS_AS(rules_from_csv(header + "1|1,3,0.5,0.5\n"), ParseError);    // duplicate member
  CHECK_THROWS_AS(rules_from_csv(header + "1,2,1.5,0.5\n"), ParseError);      // support out of range
}
