#pragma once

#include "lenori/timestamp.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lenori {

enum class CauseGroup
{
  tree,
  weather,
  other
};

auto to_string(CauseGroup g) -> std::string_view;
auto parse_cause_group(std::string_view text) -> std::optional<CauseGroup>;

/// One forced or planned line outage as recorded by an outage management system.
struct OutageRecord
{
  std::string outage_id;
  Minutes     start;
  Minutes     end;
  std::string cause_code;
  bool        forced = true;
  bool        momentary = false;

  friend bool operator==(OutageRecord const &, OutageRecord const &) = default;
};

/// Column names looked up in the header row. Defaults are the canonical format.
struct OutageSchema
{
  std::string outage_id = "outage_id";
  std::string start = "start";
  std::string end = "end";
  std::string cause_code = "cause_code";
  std::string forced = "forced";
  std::string momentary = "momentary";
};

struct RejectedRow
{
  std::size_t line; // 1-based physical line number in the source
  std::string reason;
};

struct ParseResult
{
  std::vector<OutageRecord> records;
  std::vector<RejectedRow>  rejects;
};

/// Parses header-bearing comma-delimited outage records.
///
/// Bad rows (malformed timestamp, end before start, empty or duplicate id, wrong field count,
/// unparseable flag) are rejected individually with their line number. Throws DataError when
/// the header lacks a required column or when more than half of the data rows are rejected.
auto parse_outages(std::istream &source, OutageSchema const &schema = {}) -> ParseResult;
auto parse_outages(std::string_view text, OutageSchema const &schema = {}) -> ParseResult;

/// Writes the canonical format: header then one row per record, booleans as true/false.
auto serialize_outages(std::vector<OutageRecord> const &records) -> std::string;

/// Keeps exactly the forced records (momentary ones included), preserving order.
auto filter_forced(std::vector<OutageRecord> const &records) -> std::vector<OutageRecord>;

/// Raw cause code -> {tree, weather, other}. Codes without an entry fall into `other`.
///
/// Without any explicit entries a code that itself names a group (case-insensitive "tree",
/// "weather" or "other") maps to that group.
class CauseGrouping
{
public:
  CauseGrouping() = default;
  using Mapping = std::map<std::string, CauseGroup, std::less<>>;

  explicit CauseGrouping(Mapping mapping);

  /// One "raw_code,group" pair per line; blank lines and lines starting with '#' are skipped.
  static auto parse(std::istream &in) -> CauseGrouping;
  static auto parse(std::string_view text) -> CauseGrouping;

  [[nodiscard]] auto group_of(std::string_view code) const -> CauseGroup;
  [[nodiscard]] auto is_mapped(std::string_view code) const -> bool;

  /// Distinct codes among `records` that had no mapping and were sent to `other`.
  [[nodiscard]] auto unmapped_codes(std::vector<OutageRecord> const &records) const -> std::set<std::string>;

  [[nodiscard]] auto entries() const -> Mapping const & { return mapping_; }

private:
  Mapping mapping_;
};

namespace csv {

/// Splits one line on commas, honouring double-quoted fields ("" escapes a quote) and trimming
/// unquoted whitespace around each field.
auto split_line(std::string_view line) -> std::vector<std::string>;

/// Quotes a field when it contains a comma, quote or leading/trailing space.
auto quote(std::string_view field) -> std::string;

auto trim(std::string_view s) -> std::string_view;

} // namespace csv

} // namespace lenori
