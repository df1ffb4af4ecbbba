#include "beliefrank/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

#include "beliefrank/error.hpp"

namespace beliefrank::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::string where(std::string_view source, int line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::vector<std::string> split_line(const std::string& line, std::string_view source, int line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!trim(current).empty()) throw Error(ErrorKind::ParseError, where(source, line_no) + ": stray quote");
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current += c;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, where(source, line_no) + ": unterminated quote");
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

}  // namespace

Table read(std::istream& in, std::string_view source) {
  Table t;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line, source, line_no);
    if (!have_header) {
      if (line_no == 1 && !fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        fields[0].erase(0, 3);  // UTF-8 BOM
      }
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorKind::ParseError, where(source, line_no) + ": expected " + std::to_string(t.header.size()) +
                                             " columns, found " + std::to_string(fields.size()));
    }
    t.rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!have_header) throw Error(ErrorKind::ParseError, std::string(source) + ": empty file, header expected");
  return t;
}

void expect_header(const Table& t, const std::vector<std::string>& expected, std::string_view source) {
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorKind::ParseError, std::string(source) + ":1: header must be '" + want + "'");
  }
}

double parse_number(std::string_view text, std::string_view source, int line, std::string_view column) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, where(source, line) + ": column '" + std::string(column) + "' value '" +
                                           std::string(text) + "' is not a number");
  }
  return value;
}

std::string shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace beliefrank::csv
