#pragma once

#include "lenori/outage.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lenori {

enum class Season
{
  summer,
  non_summer
};

auto to_string(Season s) -> std::string_view;
auto parse_season(std::string_view text) -> std::optional<Season>;

/// June through September.
inline std::set<unsigned> const kDefaultSummerMonths{6, 7, 8, 9};

/// A maximal group of forced outages that bunch up and overlap in time.
struct ResilienceEvent
{
  std::int64_t             event_id = 0;
  std::vector<std::string> outage_ids; // empty for catalogs read from file or synthesized
  std::int64_t             size = 0;   // number of member outages N
  Minutes                  start;
  Minutes                  end;
  Season                   season = Season::non_summer;
  CauseGroup               cause_group = CauseGroup::other;
  bool                     tie_flag = false;

  friend bool operator==(ResilienceEvent const &, ResilienceEvent const &) = default;
};

struct EventCatalog
{
  std::vector<ResilienceEvent> events; // sorted by start
  double                       n_year = 1.0;
  std::int64_t                 gap_tolerance_minutes = 0;
  std::int64_t                 source_record_count = 0;

  friend bool operator==(EventCatalog const &, EventCatalog const &) = default;
};

/// Gap tolerance large enough that every record chains into a single event.
inline constexpr std::chrono::minutes kUnboundedGap = std::chrono::minutes::max();

struct GroupingOptions
{
  std::chrono::minutes   gap_tolerance{0};
  std::set<unsigned>     summer_months = kDefaultSummerMonths;
  CauseGrouping          causes;
  std::optional<double>  n_year; // declared coverage in years; inferred from the data span when absent
};

/// Partitions forced outages into events.
///
/// Records are visited in (start, end, id) order while tracking the running maximum end time of
/// the current event. A record joins the current event iff start <= max_end + gap_tolerance,
/// otherwise it opens a new one. Events are tagged with season (start month) and majority cause.
auto group_events(std::vector<OutageRecord> const &records, GroupingOptions const &options) -> EventCatalog;
auto group_events(std::vector<OutageRecord> const &records, std::chrono::minutes gap_tolerance) -> EventCatalog;

auto tag_season(ResilienceEvent const &event, std::set<unsigned> const &summer_months = kDefaultSummerMonths)
  -> Season;

struct CauseVote
{
  CauseGroup group;
  bool       tie;
};

/// Plurality cause group of the members. Ties resolve weather > tree > other and set `tie`.
auto majority_cause(std::vector<OutageRecord> const &members, CauseGrouping const &grouping) -> CauseVote;

/// (last end - first start) in Julian years. Throws DataError when the span is not positive.
auto inferred_n_year(std::vector<OutageRecord> const &records) -> double;

/// Combines catalogs observed over the same period; events are re-sorted and renumbered from 1.
auto merge_catalogs(EventCatalog const &a, EventCatalog const &b) -> EventCatalog;

/// Event catalog file: optional "# key=value" metadata lines (n_year, gap_tolerance_minutes,
/// source_record_count), then the header
/// "event_id,size_N,start,end,season,cause_group,tie_flag" and one row per event.
auto write_catalog(EventCatalog const &catalog) -> std::string;

/// Reads a catalog file. `n_year` overrides the metadata value; with neither present the span of
/// the events is used.
auto read_catalog(std::istream &in, std::optional<double> n_year = std::nullopt) -> EventCatalog;
auto read_catalog(std::string_view text, std::optional<double> n_year = std::nullopt) -> EventCatalog;

} // namespace lenori
