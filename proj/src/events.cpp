#include "lenori/events.hpp"

#include "lenori/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace lenori {

auto to_string(Season s) -> std::string_view
{
  return s == Season::summer ? "summer" : "non_summer";
}

auto parse_season(std::string_view text) -> std::optional<Season>
{
  auto const t = csv::trim(text);
  if (t == "summer") return Season::summer;
  if (t == "non_summer" || t == "non-summer") return Season::non_summer;
  return std::nullopt;
}

auto tag_season(ResilienceEvent const &event, std::set<unsigned> const &summer_months) -> Season
{
  return summer_months.contains(month_of(event.start)) ? Season::summer : Season::non_summer;
}

auto majority_cause(std::vector<OutageRecord> const &members, CauseGrouping const &grouping) -> CauseVote
{
  std::array<std::size_t, 3> counts{};
  for (auto const &r : members) ++counts[static_cast<std::size_t>(grouping.group_of(r.cause_code))];
  auto const best = *std::max_element(counts.begin(), counts.end());
  // precedence on ties
  constexpr std::array order{CauseGroup::weather, CauseGroup::tree, CauseGroup::other};
  int winners = 0;
  std::optional<CauseGroup> pick;
  for (auto g : order) {
    if (counts[static_cast<std::size_t>(g)] == best) {
      ++winners;
      if (!pick) pick = g;
    }
  }
  return {*pick, winners > 1};
}

auto inferred_n_year(std::vector<OutageRecord> const &records) -> double
{
  if (records.empty()) throw DataError("cannot infer observation span from zero records; declare the years");
  auto first = records.front().start;
  auto last = records.front().end;
  for (auto const &r : records) {
    first = std::min(first, r.start);
    last = std::max(last, r.end);
  }
  auto const span = static_cast<double>((last - first).count()) / kMinutesPerJulianYear;
  if (!(span > 0.0)) throw DataError("observation span is zero; declare the years");
  return span;
}

auto group_events(std::vector<OutageRecord> const &records, GroupingOptions const &options) -> EventCatalog
{
  if (options.gap_tolerance.count() < 0) throw NumericError("gap tolerance must be nonnegative");
  EventCatalog catalog;
  catalog.gap_tolerance_minutes = options.gap_tolerance.count();
  catalog.source_record_count = static_cast<std::int64_t>(records.size());
  if (options.n_year) {
    if (!(*options.n_year > 0.0)) throw NumericError("n_year must be positive");
    catalog.n_year = *options.n_year;
  } else {
    catalog.n_year = inferred_n_year(records);
  }

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto const &ra = records[a];
    auto const &rb = records[b];
    if (ra.start != rb.start) return ra.start < rb.start;
    if (ra.end != rb.end) return ra.end < rb.end;
    return ra.outage_id < rb.outage_id;
  });

  std::vector<OutageRecord> members;
  auto flush = [&] {
    if (members.empty()) return;
    ResilienceEvent e;
    e.event_id = static_cast<std::int64_t>(catalog.events.size()) + 1;
    e.size = static_cast<std::int64_t>(members.size());
    e.start = members.front().start;
    e.end = members.front().end;
    for (auto const &m : members) {
      e.outage_ids.push_back(m.outage_id);
      e.end = std::max(e.end, m.end);
    }
    e.season = tag_season(e, options.summer_months);
    auto const vote = majority_cause(members, options.causes);
    e.cause_group = vote.group;
    e.tie_flag = vote.tie;
    catalog.events.push_back(std::move(e));
    members.clear();
  };

  Minutes max_end{};
  for (auto const idx : order) {
    auto const &r = records[idx];
    // start - max_end avoids overflow when gap_tolerance is kUnboundedGap
    if (!members.empty() && (r.start <= max_end || (r.start - max_end) <= options.gap_tolerance)) {
      members.push_back(r);
      max_end = std::max(max_end, r.end);
    } else {
      flush();
      members.push_back(r);
      max_end = r.end;
    }
  }
  flush();
  return catalog;
}

auto group_events(std::vector<OutageRecord> const &records, std::chrono::minutes gap_tolerance) -> EventCatalog
{
  GroupingOptions options;
  options.gap_tolerance = gap_tolerance;
  if (records.empty()) options.n_year = 1.0;
  return group_events(records, options);
}

auto merge_catalogs(EventCatalog const &a, EventCatalog const &b) -> EventCatalog
{
  EventCatalog out;
  out.n_year = std::max(a.n_year, b.n_year);
  out.gap_tolerance_minutes = a.gap_tolerance_minutes;
  out.source_record_count = a.source_record_count + b.source_record_count;
  out.events = a.events;
  out.events.insert(out.events.end(), b.events.begin(), b.events.end());
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](auto const &x, auto const &y) { return x.start < y.start; });
  std::int64_t id = 1;
  for (auto &e : out.events) e.event_id = id++;
  return out;
}

namespace {

auto format_double(double v) -> std::string
{
  char buf[64];
  auto const r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T> auto parse_number(std::string_view s) -> std::optional<T>
{
  s = csv::trim(s);
  T v{};
  auto const r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

} // namespace

auto write_catalog(EventCatalog const &catalog) -> std::string
{
  std::string out;
  out += "# n_year=" + format_double(catalog.n_year) + "\n";
  out += "# gap_tolerance_minutes=" + std::to_string(catalog.gap_tolerance_minutes) + "\n";
  out += "# source_record_count=" + std::to_string(catalog.source_record_count) + "\n";
  out += "event_id,size_N,start,end,season,cause_group,tie_flag\n";
  for (auto const &e : catalog.events) {
    out += std::to_string(e.event_id);
    out += ',';
    out += std::to_string(e.size);
    out += ',';
    out += format_timestamp(e.start);
    out += ',';
    out += format_timestamp(e.end);
    out += ',';
    out += to_string(e.season);
    out += ',';
    out += to_string(e.cause_group);
    out += e.tie_flag ? ",true\n" : ",false\n";
  }
  return out;
}

auto read_catalog(std::istream &in, std::optional<double> n_year) -> EventCatalog
{
  EventCatalog catalog;
  std::optional<double> meta_years;
  std::optional<std::int64_t> meta_records;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  auto fail = [&](std::string const &why) {
    throw DataError("catalog line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto const t = csv::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      auto const body = csv::trim(t.substr(1));
      auto const eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      auto const key = csv::trim(body.substr(0, eq));
      auto const value = body.substr(eq + 1);
      if (key == "n_year") {
        meta_years = parse_number<double>(value);
        if (!meta_years) fail("bad n_year");
      } else if (key == "gap_tolerance_minutes") {
        auto const v = parse_number<std::int64_t>(value);
        if (!v) fail("bad gap_tolerance_minutes");
        catalog.gap_tolerance_minutes = *v;
      } else if (key == "source_record_count") {
        meta_records = parse_number<std::int64_t>(value);
        if (!meta_records) fail("bad source_record_count");
      }
      continue;
    }
    auto const f = csv::split_line(t);
    if (!have_header) {
      std::vector<std::string> const expected{"event_id", "size_N", "start", "end", "season", "cause_group", "tie_flag"};
      if (f != expected) fail("unexpected header");
      have_header = true;
      continue;
    }
    if (f.size() != 7) fail("expected 7 fields");
    ResilienceEvent e;
    auto const id = parse_number<std::int64_t>(f[0]);
    auto const size = parse_number<std::int64_t>(f[1]);
    auto const start = parse_timestamp(f[2]);
    auto const end = parse_timestamp(f[3]);
    auto const season = parse_season(f[4]);
    auto const cause = parse_cause_group(f[5]);
    if (!id) fail("bad event_id");
    if (!size || *size < 1) fail("size_N must be a positive integer");
    if (!start || !end) fail("malformed timestamp");
    if (*end < *start) fail("end precedes start");
    if (!season) fail("bad season");
    if (!cause) fail("bad cause_group");
    if (f[6] != "true" && f[6] != "false") fail("bad tie_flag");
    e.event_id = *id;
    e.size = *size;
    e.start = *start;
    e.end = *end;
    e.season = *season;
    e.cause_group = *cause;
    e.tie_flag = f[6] == "true";
    catalog.events.push_back(std::move(e));
  }
  if (!have_header) throw DataError("catalog has no header row");
  std::stable_sort(catalog.events.begin(), catalog.events.end(),
                   [](auto const &x, auto const &y) { return x.start < y.start; });

  std::int64_t total = 0;
  for (auto const &e : catalog.events) total += e.size;
  catalog.source_record_count = meta_records.value_or(total);

  if (n_year) {
    catalog.n_year = *n_year;
  } else if (meta_years) {
    catalog.n_year = *meta_years;
  } else {
    if (catalog.events.empty()) throw DataError("empty catalog without n_year; declare the years");
    auto first = catalog.events.front().start;
    auto last = catalog.events.front().end;
    for (auto const &e : catalog.events) last = std::max(last, e.end);
    catalog.n_year = static_cast<double>((last - first).count()) / kMinutesPerJulianYear;
  }
  if (!(catalog.n_year > 0.0)) throw DataError("n_year must be positive");
  return catalog;
}

auto read_catalog(std::string_view text, std::optional<double> n_year) -> EventCatalog
{
  std::istringstream in{std::string(text)};
  return read_catalog(in, n_year);
}

} // namespace lenori
