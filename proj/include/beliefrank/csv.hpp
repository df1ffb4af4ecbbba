#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace beliefrank::csv {

struct Row {
  int line = 0;  // 1-based line in the source
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// Minimal RFC 4180 reader: comma separated, optional double quotes, fields
/// trimmed of surrounding blanks, blank lines skipped. The first non-blank
/// line is the header. Throws ParseError mentioning `source` and the line.
Table read(std::istream& in, std::string_view source);

/// Checks the header matches `expected` exactly (case-sensitive).
void expect_header(const Table& t, const std::vector<std::string>& expected, std::string_view source);

/// Parses a decimal with nothing trailing; throws ParseError naming the location.
double parse_number(std::string_view text, std::string_view source, int line, std::string_view column);

/// Shortest decimal that round-trips to the same double.
std::string shortest(double value);

/// Quotes a field when it holds a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace beliefrank::csv
