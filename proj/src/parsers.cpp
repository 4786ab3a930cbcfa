#include "driftrec/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "driftrec/errors.hpp"

namespace driftrec {

namespace {

// Strict integer parse: whole field, no sign/whitespace slack beyond a leading
// '-' for int64 fields.
template <typename T>
bool parse_int(const std::string& s, T& out) {
  if (s.empty()) return false;
  auto first = s.data();
  auto last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_token(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
  return out;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void finish(const ParseOptions& options, const ParseReport& report, const char* what) {
  if (report.lines_seen == 0) return;
  double rate = static_cast<double>(report.rejects.size()) / static_cast<double>(report.lines_seen);
  if (rate > options.max_reject_rate) {
    std::ostringstream msg;
    msg << what << ": " << report.rejects.size() << " of " << report.lines_seen
        << " lines rejected (rate " << rate << " > " << options.max_reject_rate << ")";
    throw ParseError(msg.str());
  }
}

}  // namespace

std::vector<Interaction> parse_movielens_ratings(std::istream& in, const ParseOptions& options,
                                                 ParseReport& report) {
  std::vector<Interaction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++report.lines_seen;

    auto fields = split_token(line, "::");
    if (fields.size() != 4) {
      report.rejects.push_back({line_no, "expected 4 '::'-separated fields, got " +
                                             std::to_string(fields.size())});
      continue;
    }
    UserId user = 0;
    ItemId item = 0;
    int rating = 0;
    std::int64_t ts = 0;
    if (!parse_int(fields[0], user) || user == 0) {
      report.rejects.push_back({line_no, "bad user id '" + fields[0] + "'"});
      continue;
    }
    if (!parse_int(fields[1], item) || item == 0) {
      report.rejects.push_back({line_no, "bad item id '" + fields[1] + "'"});
      continue;
    }
    if (!parse_int(fields[2], rating)) {
      report.rejects.push_back({line_no, "non-integer rating '" + fields[2] + "'"});
      continue;
    }
    if (rating < 1 || rating > 5) {
      report.rejects.push_back({line_no, "rating " + fields[2] + " outside [1,5]"});
      continue;
    }
    if (!parse_int(fields[3], ts) || ts < 0) {
      report.rejects.push_back({line_no, "bad timestamp '" + fields[3] + "'"});
      continue;
    }
    out.push_back({user, item, Behavior::rating, rating, ts});
  }
  finish(options, report, "ratings parse failed");
  return out;
}

Catalog parse_movielens_movies(std::istream& in, const ParseOptions& options, ParseReport& report) {
  Catalog out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++report.lines_seen;

    // Title may itself contain "::"-free colons; split on the first and last
    // separator so only the 3-field frame is fixed.
    std::size_t first = line.find("::");
    std::size_t last = line.rfind("::");
    if (first == std::string::npos || last == first) {
      report.rejects.push_back({line_no, "expected 3 '::'-separated fields"});
      continue;
    }
    std::string id_field = line.substr(0, first);
    std::string title = line.substr(first + 2, last - first - 2);
    std::string genres = line.substr(last + 2);

    ItemId id = 0;
    if (!parse_int(id_field, id) || id == 0) {
      report.rejects.push_back({line_no, "bad item id '" + id_field + "'"});
      continue;
    }
    std::vector<std::string> terms;
    for (auto& tok : split_token(genres, "|")) {
      if (!tok.empty()) terms.push_back(lowercase(tok));
    }
    if (out.count(id)) ++report.warnings;  // last occurrence wins
    out[id] = ItemMeta{id, title, std::move(terms)};
  }
  finish(options, report, "movies parse failed");
  return out;
}

std::vector<Interaction> parse_event_log(std::istream& in, const ParseOptions& options,
                                         ParseReport& report) {
  static const std::string kHeader = "user_id,item_id,behavior,timestamp";
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kHeader)
    throw ParseError("event log: missing or malformed header (expected '" + kHeader + "')");

  std::vector<Interaction> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    ++report.lines_seen;

    auto fields = split_token(line, ",");
    if (fields.size() != 4) {
      report.rejects.push_back({line_no, "expected 4 comma-separated fields, got " +
                                             std::to_string(fields.size())});
      continue;
    }
    UserId user = 0;
    ItemId item = 0;
    std::int64_t ts = 0;
    Behavior kind;
    if (!parse_int(fields[0], user) || user == 0) {
      report.rejects.push_back({line_no, "bad user id '" + fields[0] + "'"});
      continue;
    }
    if (!parse_int(fields[1], item) || item == 0) {
      report.rejects.push_back({line_no, "bad item id '" + fields[1] + "'"});
      continue;
    }
    if (!behavior_from_string(fields[2], kind) || kind == Behavior::rating) {
      report.rejects.push_back({line_no, "unknown behavior '" + fields[2] + "'"});
      continue;
    }
    if (!parse_int(fields[3], ts) || ts < 0) {
      report.rejects.push_back({line_no, "bad timestamp '" + fields[3] + "'"});
      continue;
    }
    out.push_back({user, item, kind, 0, ts});
  }
  finish(options, report, "event log parse failed");
  return out;
}

void write_movielens_ratings(std::ostream& out, const std::vector<Interaction>& interactions) {
  for (const auto& it : interactions) {
    if (it.kind != Behavior::rating)
      throw Error("write_movielens_ratings: non-rating interaction");
    out << it.user << "::" << it.item << "::" << it.rating << "::" << it.ts << "\n";
  }
}

void write_event_log(std::ostream& out, const std::vector<Interaction>& interactions) {
  out << "user_id,item_id,behavior,timestamp\n";
  for (const auto& it : interactions) {
    if (it.kind == Behavior::rating)
      throw Error("write_event_log: rating interactions are not representable");
    out << it.user << "," << it.item << "," << to_string(it.kind) << "," << it.ts << "\n";
  }
}

std::string rejects_to_csv(const std::vector<RejectedLine>& rejects) {
  std::ostringstream out;
  out << "line_number,reason\n";
  for (const auto& r : rejects) {
    std::string reason = r.reason;
    // commas and quotes in reasons get standard CSV quoting
    if (reason.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : reason) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
      }
      quoted += '"';
      reason = quoted;
    }
    out << r.line_number << "," << reason << "\n";
  }
  return out.str();
}

}  // namespace driftrec
