#pragma once

#include <iosfwd>
#include <string>

#include "driftrec/types.hpp"

namespace driftrec {

// Versioned dataset container, plain text, UTF-8, LF:
//
//   driftrec.dataset.v1
//   name\t<name>
//   catalog\t<count>
//   <item_id>\t<title>\t<term>|<term>|...        (count lines)
//   interactions\t<count>
//   <user>\t<item>\t<kind>\t<rating-or-dash>\t<ts>   (count lines)
//   end
//
// Text fields are backslash-escaped (\\ \t \n \r and \| inside terms).
// Stats and the catalog-incomplete flag are recomputed on load.

inline constexpr const char* kArchiveMagic = "driftrec.dataset.v1";

void write_archive(std::ostream& out, const Dataset& d);
Dataset read_archive(std::istream& in);  // throws ParseError on corruption

void save_archive_file(const std::string& path, const Dataset& d);
Dataset load_archive_file(const std::string& path);

}  // namespace driftrec
