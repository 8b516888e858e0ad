#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace flakelab::csv {

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Reads one record, honoring quoted fields that span lines. Returns false
/// at end of input. Throws Error(MalformedArchive) on an unterminated quote.
bool read_row(std::istream& in, std::vector<std::string>& fields);

/// Shortest text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

}  // namespace flakelab::csv
