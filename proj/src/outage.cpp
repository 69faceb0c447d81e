#include "lenori/outage.hpp"

#include "lenori/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace lenori {

auto to_string(CauseGroup g) -> std::string_view
{
  switch (g) {
  case CauseGroup::tree: return "tree";
  case CauseGroup::weather: return "weather";
  case CauseGroup::other: return "other";
  }
  return "other";
}

namespace {

auto lower(std::string_view s) -> std::string
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

auto parse_bool(std::string_view s) -> std::optional<bool>
{
  auto const v = lower(s);
  if (v == "true" || v == "1" || v == "yes" || v == "y" || v == "t") return true;
  if (v == "false" || v == "0" || v == "no" || v == "n" || v == "f") return false;
  return std::nullopt;
}

// Reads a line, stripping a trailing '\r'.
bool next_line(std::istream &in, std::string &line)
{
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

} // namespace

auto parse_cause_group(std::string_view text) -> std::optional<CauseGroup>
{
  auto const v = lower(csv::trim(text));
  if (v == "tree") return CauseGroup::tree;
  if (v == "weather") return CauseGroup::weather;
  if (v == "other") return CauseGroup::other;
  return std::nullopt;
}

namespace csv {

auto trim(std::string_view s) -> std::string_view
{
  auto const b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto const e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

auto split_line(std::string_view line) -> std::vector<std::string>
{
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          field += line[i++];
        }
      }
      auto const comma = line.find(',', i);
      i = comma == std::string_view::npos ? line.size() : comma;
    } else {
      auto const comma = line.find(',', i);
      auto const stop = comma == std::string_view::npos ? line.size() : comma;
      field = std::string(trim(line.substr(i, stop - i)));
      i = stop;
    }
    fields.push_back(std::move(field));
    if (i >= line.size()) break;
    ++i; // skip comma
    if (i == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return fields;
}

auto quote(std::string_view field) -> std::string
{
  bool const needs = field.find_first_of(",\"") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

} // namespace csv

auto parse_outages(std::istream &in, OutageSchema const &schema) -> ParseResult
{
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;

  // Header, skipping leading blank lines.
  std::vector<std::string> header;
  while (next_line(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    header = csv::split_line(line);
    break;
  }
  if (header.empty()) throw DataError("outage file has no header row");
  if (header.front().rfind("\xEF\xBB\xBF", 0) == 0) header.front().erase(0, 3);

  auto column = [&](std::string const &name) -> std::size_t {
    auto const it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing required column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  auto const c_id = column(schema.outage_id);
  auto const c_start = column(schema.start);
  auto const c_end = column(schema.end);
  auto const c_cause = column(schema.cause_code);
  auto const c_forced = column(schema.forced);
  auto const c_momentary = column(schema.momentary);

  std::unordered_set<std::string> seen;
  std::size_t data_rows = 0;
  while (next_line(in, line)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    ++data_rows;
    auto const f = csv::split_line(line);
    auto reject = [&](std::string reason) { result.rejects.push_back({lineno, std::move(reason)}); };
    if (f.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
      continue;
    }
    OutageRecord r;
    r.outage_id = f[c_id];
    if (r.outage_id.empty()) {
      reject("empty outage_id");
      continue;
    }
    auto const start = parse_timestamp(f[c_start]);
    if (!start) {
      reject("malformed start timestamp '" + f[c_start] + "'");
      continue;
    }
    auto const end = parse_timestamp(f[c_end]);
    if (!end) {
      reject("malformed end timestamp '" + f[c_end] + "'");
      continue;
    }
    if (*end < *start) {
      reject("end precedes start");
      continue;
    }
    auto const forced = parse_bool(f[c_forced]);
    auto const momentary = parse_bool(f[c_momentary]);
    if (!forced || !momentary) {
      reject("unparseable forced/momentary flag");
      continue;
    }
    if (!seen.insert(r.outage_id).second) {
      reject("duplicate outage_id '" + r.outage_id + "'");
      continue;
    }
    r.start = *start;
    r.end = *end;
    r.cause_code = f[c_cause];
    r.forced = *forced;
    r.momentary = *momentary;
    result.records.push_back(std::move(r));
  }

  if (data_rows > 0 && 2 * result.rejects.size() > data_rows) {
    std::ostringstream msg;
    msg << result.rejects.size() << " of " << data_rows << " rows rejected (first: line " << result.rejects.front().line
        << ": " << result.rejects.front().reason << ")";
    throw DataError(msg.str());
  }
  return result;
}

auto parse_outages(std::string_view text, OutageSchema const &schema) -> ParseResult
{
  std::istringstream in{std::string(text)};
  return parse_outages(in, schema);
}

auto serialize_outages(std::vector<OutageRecord> const &records) -> std::string
{
  std::string out = "outage_id,start,end,cause_code,forced,momentary\n";
  for (auto const &r : records) {
    out += csv::quote(r.outage_id);
    out += ',';
    out += format_timestamp(r.start);
    out += ',';
    out += format_timestamp(r.end);
    out += ',';
    out += csv::quote(r.cause_code);
    out += r.forced ? ",true" : ",false";
    out += r.momentary ? ",true\n" : ",false\n";
  }
  return out;
}

auto filter_forced(std::vector<OutageRecord> const &records) -> std::vector<OutageRecord>
{
  std::vector<OutageRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out), [](auto const &r) { return r.forced; });
  return out;
}

CauseGrouping::CauseGrouping(Mapping mapping)
  : mapping_(std::move(mapping))
{
}

auto CauseGrouping::parse(std::istream &in) -> CauseGrouping
{
  Mapping mapping;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line)) {
    ++lineno;
    auto const t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto const f = csv::split_line(t);
    if (f.size() != 2) throw DataError("cause grouping line " + std::to_string(lineno) + ": expected 'raw_code,group'");
    auto const g = parse_cause_group(f[1]);
    if (!g) throw DataError("cause grouping line " + std::to_string(lineno) + ": unknown group '" + f[1] + "'");
    auto const [it, inserted] = mapping.emplace(f[0], *g);
    if (!inserted && it->second != *g) {
      throw DataError("cause grouping line " + std::to_string(lineno) + ": code '" + f[0] + "' mapped twice");
    }
  }
  return CauseGrouping{std::move(mapping)};
}

auto CauseGrouping::parse(std::string_view text) -> CauseGrouping
{
  std::istringstream in{std::string(text)};
  return parse(in);
}

auto CauseGrouping::is_mapped(std::string_view code) const -> bool
{
  if (mapping_.empty()) return parse_cause_group(code).has_value();
  return mapping_.find(code) != mapping_.end();
}

auto CauseGrouping::group_of(std::string_view code) const -> CauseGroup
{
  if (mapping_.empty()) return parse_cause_group(code).value_or(CauseGroup::other);
  auto const it = mapping_.find(code);
  return it == mapping_.end() ? CauseGroup::other : it->second;
}

auto CauseGrouping::unmapped_codes(std::vector<OutageRecord> const &records) const -> std::set<std::string>
{
  std::set<std::string> out;
  for (auto const &r : records) {
    if (!is_mapped(r.cause_code)) out.insert(r.cause_code);
  }
  return out;
}

} // namespace lenori
