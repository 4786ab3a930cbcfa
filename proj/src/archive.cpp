#include "driftrec/archive.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "driftrec/errors.hpp"

namespace driftrec {

namespace {

std::string escape(const std::string& s, bool also_pipe) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '|':
        if (also_pipe) out += "\\p";
        else out += c;
        break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    ++i;
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 'p': out += '|'; break;
      default: throw ParseError("archive: bad escape sequence");
    }
  }
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

template <typename T>
T need_int(const std::string& s, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("archive: bad ") + what + " '" + s + "'");
  return v;
}

std::string need_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(std::string("archive: truncated before ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_archive(std::ostream& out, const Dataset& d) {
  out << kArchiveMagic << "\n";
  out << "name\t" << escape(d.name, false) << "\n";
  out << "catalog\t" << d.catalog.size() << "\n";
  for (const auto& [id, meta] : d.catalog) {
    out << id << "\t" << escape(meta.title, false) << "\t";
    for (std::size_t i = 0; i < meta.terms.size(); ++i) {
      if (i) out << "|";
      out << escape(meta.terms[i], true);
    }
    out << "\n";
  }
  out << "interactions\t" << d.interactions.size() << "\n";
  for (const auto& it : d.interactions) {
    out << it.user << "\t" << it.item << "\t" << to_string(it.kind) << "\t";
    if (it.kind == Behavior::rating) out << it.rating;
    else out << "-";
    out << "\t" << it.ts << "\n";
  }
  out << "end\n";
}

Dataset read_archive(std::istream& in) {
  if (need_line(in, "magic") != kArchiveMagic)
    throw ParseError(std::string("archive: bad magic (expected ") + kArchiveMagic + ")");

  auto name_fields = split_char(need_line(in, "name"), '\t');
  if (name_fields.size() != 2 || name_fields[0] != "name")
    throw ParseError("archive: expected name record");
  std::string name = unescape(name_fields[1]);

  auto cat_header = split_char(need_line(in, "catalog header"), '\t');
  if (cat_header.size() != 2 || cat_header[0] != "catalog")
    throw ParseError("archive: expected catalog header");
  auto n_catalog = need_int<std::size_t>(cat_header[1], "catalog count");

  Catalog catalog;
  for (std::size_t i = 0; i < n_catalog; ++i) {
    auto fields = split_char(need_line(in, "catalog record"), '\t');
    if (fields.size() != 3) throw ParseError("archive: catalog record needs 3 fields");
    ItemMeta meta;
    meta.id = need_int<ItemId>(fields[0], "item id");
    if (meta.id == 0) throw ParseError("archive: item id must be positive");
    meta.title = unescape(fields[1]);
    if (!fields[2].empty()) {
      for (auto& t : split_char(fields[2], '|')) meta.terms.push_back(unescape(t));
    }
    if (catalog.count(meta.id)) throw ParseError("archive: duplicate catalog id");
    catalog[meta.id] = std::move(meta);
  }

  auto int_header = split_char(need_line(in, "interactions header"), '\t');
  if (int_header.size() != 2 || int_header[0] != "interactions")
    throw ParseError("archive: expected interactions header");
  auto n_interactions = need_int<std::size_t>(int_header[1], "interaction count");

  std::vector<Interaction> interactions;
  interactions.reserve(n_interactions);
  for (std::size_t i = 0; i < n_interactions; ++i) {
    auto fields = split_char(need_line(in, "interaction record"), '\t');
    if (fields.size() != 5) throw ParseError("archive: interaction record needs 5 fields");
    Interaction it;
    it.user = need_int<UserId>(fields[0], "user id");
    it.item = need_int<ItemId>(fields[1], "item id");
    if (!behavior_from_string(fields[2], it.kind))
      throw ParseError("archive: unknown behavior '" + fields[2] + "'");
    if (it.kind == Behavior::rating) it.rating = need_int<int>(fields[3], "rating");
    else if (fields[3] != "-") throw ParseError("archive: non-rating record carries a value");
    it.ts = need_int<std::int64_t>(fields[4], "timestamp");
    if (!it.valid()) throw ParseError("archive: interaction violates invariants");
    interactions.push_back(it);
  }

  if (need_line(in, "end marker") != "end") throw ParseError("archive: missing end marker");

  Dataset d = make_dataset(std::move(name), std::move(interactions), std::move(catalog));
  validate_dataset(d);
  return d;
}

void save_archive_file(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_archive(out, d);
  if (!out) throw IoError("write failed: " + path);
}

Dataset load_archive_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return read_archive(in);
}

}  // namespace driftrec
