#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "driftrec/types.hpp"

namespace driftrec {

struct RejectedLine {
  std::size_t line_number = 0;  // 1-based
  std::string reason;
  friend bool operator==(const RejectedLine&, const RejectedLine&) = default;
};

// Per-stream parse outcome. Rejected lines are collected, not fatal, unless
// their share of non-blank lines exceeds max_reject_rate.
struct ParseReport {
  std::vector<RejectedLine> rejects;
  std::size_t lines_seen = 0;  // non-blank lines
  std::size_t warnings = 0;    // e.g. duplicate catalog ids (last wins)
};

struct ParseOptions {
  double max_reject_rate = 0.01;  // parse fails when rejects/lines > this
};

// MovieLens ratings.dat: `UserID::MovieID::Rating::Timestamp`.
// Throws ParseError when the reject rate exceeds options.max_reject_rate.
std::vector<Interaction> parse_movielens_ratings(std::istream& in, const ParseOptions& options,
                                                 ParseReport& report);

// MovieLens movies.dat: `MovieID::Title::Genre1|Genre2|...`. Genre tokens are
// lowercased. Duplicate ids: last occurrence wins, counted as a warning.
Catalog parse_movielens_movies(std::istream& in, const ParseOptions& options, ParseReport& report);

// Behavior event log: CSV with header `user_id,item_id,behavior,timestamp`,
// behavior in {browse, click, purchase}. Missing or wrong header is fatal.
std::vector<Interaction> parse_event_log(std::istream& in, const ParseOptions& options,
                                         ParseReport& report);

// Inverse writers; round-trip with the parsers above. All interactions must be
// rating kind (ratings writer) / non-rating kind (event writer).
void write_movielens_ratings(std::ostream& out, const std::vector<Interaction>& interactions);
void write_event_log(std::ostream& out, const std::vector<Interaction>& interactions);

// Rejects report: CSV `line_number,reason`.
std::string rejects_to_csv(const std::vector<RejectedLine>& rejects);

}  // namespace driftrec
