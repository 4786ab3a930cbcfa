#include "driftrec/apriori.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>

#include "driftrec/errors.hpp"

namespace driftrec {

namespace {

using TidList = std::vector<std::uint32_t>;  // ascending transaction ids

void check_thresholds(double min_support, double min_confidence, int max_len, int max_consequent) {
  if (!(min_support > 0.0 && min_support <= 1.0))
    throw PreconditionError("rules: min_support must be in (0,1]");
  if (!(min_confidence > 0.0 && min_confidence <= 1.0))
    throw PreconditionError("rules: min_confidence must be in (0,1]");
  if (max_len < 1 || max_len > 30)
    throw PreconditionError("rules: max_len must be in [1,30]");
  if (max_consequent < 1) throw PreconditionError("rules: max_consequent must be >= 1");
}

TidList intersect(const TidList& a, const TidList& b) {
  TidList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Frequent itemsets with their transaction-id lists, level by level.
std::vector<std::map<Itemset, TidList>> mine_levels(const std::vector<Itemset>& transactions,
                                                    double min_support, int max_len) {
  std::size_t n = transactions.size();
  auto frequent = [&](const TidList& tids) {
    return static_cast<double>(tids.size()) / static_cast<double>(n) >= min_support;
  };

  std::map<Itemset, TidList> level1;
  for (std::uint32_t tid = 0; tid < n; ++tid) {
    Itemset t = transactions[tid];
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (ItemId item : t) level1[{item}].push_back(tid);
  }
  std::erase_if(level1, [&](const auto& kv) { return !frequent(kv.second); });

  std::vector<std::map<Itemset, TidList>> levels;
  if (level1.empty()) return levels;
  levels.push_back(std::move(level1));

  while (static_cast<int>(levels.size()) < max_len) {
    const auto& prev = levels.back();
    std::map<Itemset, TidList> next;
    for (auto a = prev.begin(); a != prev.end(); ++a) {
      for (auto b = std::next(a); b != prev.end(); ++b) {
        // join: identical prefix, differing last element
        const Itemset& sa = a->first;
        const Itemset& sb = b->first;
        if (!std::equal(sa.begin(), sa.end() - 1, sb.begin(), sb.end() - 1)) continue;
        Itemset cand = sa;
        cand.push_back(sb.back());
        if (cand[cand.size() - 2] > cand.back()) std::swap(cand[cand.size() - 2], cand.back());

        // downward closure: every (k-1)-subset must be frequent
        bool closed = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && closed; ++drop) {
          Itemset sub;
          for (std::size_t j = 0; j < cand.size(); ++j)
            if (j != drop) sub.push_back(cand[j]);
          closed = prev.count(sub) != 0;
        }
        if (!closed) continue;

        TidList tids = intersect(a->second, b->second);
        if (frequent(tids)) next.emplace(std::move(cand), std::move(tids));
      }
    }
    if (next.empty()) break;
    levels.push_back(std::move(next));
  }
  return levels;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_itemset(const Itemset& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(s[i]);
  }
  return out;
}

}  // namespace

std::vector<Itemset> user_transactions(std::span<const Interaction> interactions,
                                       int min_rating) {
  std::map<UserId, std::set<ItemId>> baskets;
  for (const Interaction& ev : interactions) {
    bool strong = ev.kind == Behavior::purchase || ev.kind == Behavior::click ||
                  (ev.kind == Behavior::rating && ev.rating >= min_rating);
    if (strong) baskets[ev.user].insert(ev.item);
  }
  std::vector<Itemset> out;
  out.reserve(baskets.size());
  for (const auto& [u, items] : baskets) out.emplace_back(items.begin(), items.end());
  return out;
}

std::vector<FrequentItemset> mine_frequent_itemsets(const std::vector<Itemset>& transactions,
                                                    double min_support, int max_len) {
  check_thresholds(min_support, 1.0, max_len, 1);
  std::vector<FrequentItemset> out;
  if (transactions.empty()) return out;
  double n = static_cast<double>(transactions.size());
  for (const auto& level : mine_levels(transactions, min_support, max_len))
    for (const auto& [items, tids] : level)
      out.push_back({items, static_cast<double>(tids.size()) / n});
  return out;
}

std::vector<AssociationRule> mine_rules(const std::vector<Itemset>& transactions,
                                        double min_support, double min_confidence, int max_len,
                                        int max_consequent) {
  check_thresholds(min_support, min_confidence, max_len, max_consequent);
  std::vector<AssociationRule> rules;
  if (transactions.empty()) return rules;

  auto levels = mine_levels(transactions, min_support, max_len);
  std::map<Itemset, std::size_t> counts;
  for (const auto& level : levels)
    for (const auto& [items, tids] : level) counts.emplace(items, tids.size());

  double n = static_cast<double>(transactions.size());
  for (const auto& [whole, count_whole] : counts) {
    if (whole.size() < 2) continue;
    double support = static_cast<double>(count_whole) / n;
    // every nonempty proper subset of `whole` as consequent, size-capped
    std::uint32_t full = (1u << whole.size()) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      int bits = __builtin_popcount(mask);
      if (bits > max_consequent) continue;
      Itemset antecedent, consequent;
      for (std::size_t j = 0; j < whole.size(); ++j)
        (mask >> j & 1u ? consequent : antecedent).push_back(whole[j]);
      double confidence =
          static_cast<double>(count_whole) / static_cast<double>(counts.at(antecedent));
      if (confidence >= min_confidence)
        rules.push_back({std::move(antecedent), std::move(consequent), support, confidence});
    }
  }

  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.support != b.support) return a.support > b.support;
    if (a.antecedent != b.antecedent) return a.antecedent < b.antecedent;
    return a.consequent < b.consequent;
  });
  return rules;
}

std::vector<ScoredItem> recommend_rules(const std::vector<AssociationRule>& rules,
                                        const std::set<ItemId>& owned, std::size_t n) {
  std::map<ItemId, std::pair<double, double>> best;  // item -> (confidence, support)
  for (const AssociationRule& rule : rules) {
    bool fires = std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                             [&](ItemId id) { return owned.contains(id); });
    if (!fires) continue;
    for (ItemId c : rule.consequent) {
      if (owned.contains(c)) continue;
      std::pair<double, double> cand{rule.confidence, rule.support};
      auto [it, inserted] = best.emplace(c, cand);
      if (!inserted && cand > it->second) it->second = cand;
    }
  }
  std::vector<std::pair<ItemId, std::pair<double, double>>> ranked(best.begin(), best.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    if (a.second.second != b.second.second) return a.second.second > b.second.second;
    return a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);
  std::vector<ScoredItem> out;
  out.reserve(ranked.size());
  for (const auto& [item, cs] : ranked) out.push_back({item, cs.first});
  return out;
}

std::string rules_to_csv(const std::vector<AssociationRule>& rules) {
  std::string out = "antecedent,consequent,support,confidence\n";
  for (const AssociationRule& r : rules) {
    out += join_itemset(r.antecedent);
    out += ',';
    out += join_itemset(r.consequent);
    out += ',';
    out += format_real(r.support);
    out += ',';
    out += format_real(r.confidence);
    out += '\n';
  }
  return out;
}

namespace {

Itemset parse_itemset(const std::string& field, std::size_t line_no) {
  Itemset out;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t end = field.find('|', start);
    if (end == std::string::npos) end = field.size();
    std::uint32_t value = 0;
    auto [p, ec] = std::from_chars(field.data() + start, field.data() + end, value);
    if (ec != std::errc() || p != field.data() + end || value == 0)
      throw ParseError("rules csv line " + std::to_string(line_no) + ": bad itemset member");
    out.push_back(value);
    if (end == field.size()) break;
    start = end + 1;
  }
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end())
    throw ParseError("rules csv line " + std::to_string(line_no) + ": itemset not sorted/unique");
  return out;
}

double parse_real(const std::string& field, std::size_t line_no) {
  double value = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || p != field.data() + field.size())
    throw ParseError("rules csv line " + std::to_string(line_no) + ": bad real");
  return value;
}

}  // namespace

std::vector<AssociationRule> rules_from_csv(const std::string& csv) {
  std::vector<AssociationRule> rules;
  std::size_t pos = 0, line_no = 0;
  bool saw_header = false;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    std::string line = csv.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "antecedent,consequent,support,confidence")
        throw ParseError("rules csv: bad header");
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 4)
      throw ParseError("rules csv line " + std::to_string(line_no) + ": want 4 fields");
    AssociationRule r;
    r.antecedent = parse_itemset(fields[0], line_no);
    r.consequent = parse_itemset(fields[1], line_no);
    r.support = parse_real(fields[2], line_no);
    r.confidence = parse_real(fields[3], line_no);
    if (!(r.support > 0.0 && r.support <= 1.0) || !(r.confidence > 0.0 && r.confidence <= 1.0))
      throw ParseError("rules csv line " + std::to_string(line_no) +
                       ": support/confidence outside (0,1]");
    Itemset overlap;
    std::set_intersection(r.antecedent.begin(), r.antecedent.end(), r.consequent.begin(),
                          r.consequent.end(), std::back_inserter(overlap));
    if (!overlap.empty())
      throw ParseError("rules csv line " + std::to_string(line_no) +
                       ": antecedent and consequent overlap");
    rules.push_back(std::move(r));
  }
  if (!saw_header) throw ParseError("rules csv: empty input");
  return rules;
}

}  // namespace driftrec
