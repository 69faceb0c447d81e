#include "lenori/error.hpp"
#include "lenori/events.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

using namespace lenori;
using std::chrono::minutes;

namespace {

auto at(char const *text) -> Minutes { return *parse_timestamp(text); }

auto outage(std::string id, char const *start, char const *end, std::string cause = "TREE") -> OutageRecord
{
  return {std::move(id), at(start), at(end), std::move(cause), true, false};
}

auto random_records(std::mt19937_64 &rng, std::size_t count) -> std::vector<OutageRecord>
{
  auto const base = at("2013-01-01 00:00");
  std::vector<OutageRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    OutageRecord r;
    r.outage_id = "R" + std::to_string(i);
    r.start = base + minutes{static_cast<long>(rng() % 200'000)};
    r.end = r.start + minutes{static_cast<long>(rng() % 400)};
    r.cause_code = std::array<char const *, 3>{"tree", "weather", "other"}[rng() % 3];
    out.push_back(r);
  }
  return out;
}

auto sorted_ids(EventCatalog const &c) -> std::vector<std::vector<std::string>>
{
  std::vector<std::vector<std::string>> out;
  for (auto const &e : c.events) {
    auto ids = e.outage_ids;
    std::sort(ids.begin(), ids.end());
    out.push_back(ids);
  }
  return out;
}

auto max_size(EventCatalog const &c) -> std::int64_t
{
  std::int64_t m = 0;
  for (auto const &e : c.events) m = std::max(m, e.size);
  return m;
}

} // namespace

TEST_CASE("group_events: examples")
{
  SUBCASE("empty")
  {
    auto const c = group_events({}, minutes{0});
    CHECK(c.events.empty());
    CHECK(c.source_record_count == 0);
  }
  SUBCASE("direct overlap")
  {
    auto const c = group_events({outage("A", "2015-05-01 10:00", "2015-05-01 11:00"),
                                 outage("B", "2015-05-01 10:30", "2015-05-01 12:00")},
                                minutes{0});
    REQUIRE(c.events.size() == 1);
    CHECK(c.events[0].size == 2);
    CHECK(c.events[0].start == at("2015-05-01 10:00"));
    CHECK(c.events[0].end == at("2015-05-01 12:00"));
  }
  SUBCASE("gap tolerance chains nearby outages")
  {
    // B starts 10 min after A ends (<= 15), C starts 150 min after B ends
    auto const c = group_events({outage("C", "2015-05-01 13:00", "2015-05-01 13:05"),
                                 outage("A", "2015-05-01 10:00", "2015-05-01 10:10"),
                                 outage("B", "2015-05-01 10:20", "2015-05-01 10:30")},
                                minutes{15});
    REQUIRE(c.events.size() == 2);
    CHECK(c.events[0].outage_ids == std::vector<std::string>{"A", "B"});
    CHECK(c.events[1].outage_ids == std::vector<std::string>{"C"});
    CHECK(c.events[0].event_id == 1);
    CHECK(c.events[1].event_id == 2);
  }
  SUBCASE("abutting outages chain at zero gap, separated ones do not")
  {
    auto const c = group_events({outage("A", "2015-05-01 10:00", "2015-05-01 10:10"),
                                 outage("B", "2015-05-01 10:10", "2015-05-01 10:20"),
                                 outage("C", "2015-05-01 10:21", "2015-05-01 10:30")},
                                minutes{0});
    REQUIRE(c.events.size() == 2);
    CHECK(c.events[0].size == 2);
  }
  SUBCASE("a long outage keeps the event open")
  {
    auto const c = group_events({outage("A", "2015-05-01 10:00", "2015-05-02 10:00"),
                                 outage("B", "2015-05-01 11:00", "2015-05-01 11:05"),
                                 outage("C", "2015-05-01 20:00", "2015-05-01 20:05")},
                                minutes{0});
    REQUIRE(c.events.size() == 1);
    CHECK(c.events[0].size == 3);
  }
}

TEST_CASE("group_events: properties on random record sets")
{
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 25; ++round) {
    auto records = random_records(rng, 1 + rng() % 300);
    GroupingOptions options;
    options.n_year = 1.0;

    options.gap_tolerance = minutes{static_cast<long>(rng() % 120)};
    auto const base = group_events(records, options);

    // partition: every record lands in exactly one event
    std::int64_t total = 0;
    std::map<std::string, int> seen;
    for (auto const &e : base.events) {
      CHECK(e.size == static_cast<std::int64_t>(e.outage_ids.size()));
      CHECK(e.size >= 1);
      CHECK(e.start <= e.end);
      total += e.size;
      for (auto const &id : e.outage_ids) ++seen[id];
    }
    CHECK(total == static_cast<std::int64_t>(records.size()));
    CHECK(base.source_record_count == total);
    CHECK(seen.size() == records.size());
    CHECK(std::all_of(seen.begin(), seen.end(), [](auto const &kv) { return kv.second == 1; }));
    CHECK(std::is_sorted(base.events.begin(), base.events.end(),
                         [](auto const &a, auto const &b) { return a.start < b.start; }));

    // order independence
    std::shuffle(records.begin(), records.end(), rng);
    auto const shuffled = group_events(records, options);
    CHECK(sorted_ids(shuffled) == sorted_ids(base));
    CHECK(shuffled.events.size() == base.events.size());

    // monotone in the gap tolerance
    options.gap_tolerance += minutes{static_cast<long>(1 + rng() % 240)};
    auto const wider = group_events(records, options);
    CHECK(wider.events.size() <= base.events.size());
    CHECK(max_size(wider) >= max_size(base));

    options.gap_tolerance = kUnboundedGap;
    CHECK(group_events(records, options).events.size() == 1);
  }
}

TEST_CASE("tag_season uses the start month")
{
  ResilienceEvent e;
  e.start = at("2014-07-15 12:00");
  CHECK(tag_season(e) == Season::summer);
  e.start = at("2014-01-02 00:00");
  CHECK(tag_season(e) == Season::non_summer);
  e.start = at("2014-09-30 23:59");
  e.end = at("2014-10-02 06:00");
  CHECK(tag_season(e) == Season::summer);
  e.start = at("2014-05-31 23:59");
  CHECK(tag_season(e) == Season::non_summer);
  CHECK(tag_season(e, {5}) == Season::summer);
}

TEST_CASE("majority_cause")
{
  CauseGrouping const g;
  auto members = [](int tree, int weather, int other) {
    std::vector<OutageRecord> out;
    for (int i = 0; i < tree; ++i) out.push_back(outage("t" + std::to_string(i), "2015-01-01 00:00", "2015-01-01 00:00", "tree"));
    for (int i = 0; i < weather; ++i) out.push_back(outage("w" + std::to_string(i), "2015-01-01 00:00", "2015-01-01 00:00", "weather"));
    for (int i = 0; i < other; ++i) out.push_back(outage("o" + std::to_string(i), "2015-01-01 00:00", "2015-01-01 00:00", "other"));
    return out;
  };
  auto v = majority_cause(members(5, 2, 0), g);
  CHECK(v.group == CauseGroup::tree);
  CHECK_FALSE(v.tie);

  v = majority_cause(members(0, 1, 0), g);
  CHECK(v.group == CauseGroup::weather);
  CHECK_FALSE(v.tie);

  v = majority_cause(members(2, 2, 0), g);
  CHECK(v.group == CauseGroup::weather);
  CHECK(v.tie);

  v = majority_cause(members(3, 0, 3), g);
  CHECK(v.group == CauseGroup::tree);
  CHECK(v.tie);

  v = majority_cause(members(1, 1, 4), g);
  CHECK(v.group == CauseGroup::other);
  CHECK_FALSE(v.tie);

  // through a raw-code mapping
  auto const mapping = CauseGrouping::parse("LIMB,tree\nICE,weather\n");
  std::vector<OutageRecord> raw{outage("a", "2015-01-01 00:00", "2015-01-01 00:00", "ICE"),
                                outage("b", "2015-01-01 00:00", "2015-01-01 00:00", "ICE"),
                                outage("c", "2015-01-01 00:00", "2015-01-01 00:00", "LIMB")};
  CHECK(majority_cause(raw, mapping).group == CauseGroup::weather);
}

TEST_CASE("group_events annotates season and cause")
{
  GroupingOptions options;
  options.causes = CauseGrouping::parse("LIMB,tree\nICE,weather\n");
  options.n_year = 2.0;
  auto const c = group_events({outage("a", "2015-07-01 10:00", "2015-07-01 12:00", "LIMB"),
                               outage("b", "2015-07-01 11:00", "2015-07-01 12:00", "LIMB"),
                               outage("c", "2015-07-01 11:30", "2015-07-01 13:00", "ICE"),
                               outage("d", "2015-12-01 10:00", "2015-12-01 11:00", "ICE")},
                              options);
  REQUIRE(c.events.size() == 2);
  CHECK(c.events[0].season == Season::summer);
  CHECK(c.events[0].cause_group == CauseGroup::tree);
  CHECK(c.events[1].season == Season::non_summer);
  CHECK(c.events[1].cause_group == CauseGroup::weather);
  CHECK(c.n_year == 2.0);
}

TEST_CASE("n_year falls back to the data span in Julian years")
{
  std::vector<OutageRecord> records{outage("a", "2011-01-01 00:00", "2011-01-01 01:00"),
                                    outage("b", "2012-12-31 12:00", "2013-01-01 00:00")};
  GroupingOptions options;
  auto const c = group_events(records, options);
  double const expected = (2.0 * 365.0 + 1.0) * 24.0 * 60.0 / kMinutesPerJulianYear;
  CHECK(c.n_year == doctest::Approx(expected).epsilon(1e-15));

  CHECK_THROWS_AS(group_events({outage("m", "2011-01-01 00:00", "2011-01-01 00:00")}, options), DataError);
  options.n_year = -1.0;
  CHECK_THROWS_AS(group_events(records, options), NumericError);
}

TEST_CASE("catalog file round trip")
{
  std::mt19937_64 rng(5);
  GroupingOptions options;
  options.n_year = 3.5;
  options.gap_tolerance = minutes{30};
  auto catalog = group_events(random_records(rng, 200), options);
  auto const text = write_catalog(catalog);
  auto back = read_catalog(text);
  // ids are not part of the file
  for (auto &e : catalog.events) e.outage_ids.clear();
  CHECK(back == catalog);
  CHECK(write_catalog(back) == text);

  CHECK(read_catalog(text, 6.0).n_year == 6.0);
}

TEST_CASE("catalog reader rejects malformed files")
{
  std::string const header = "event_id,size_N,start,end,season,cause_group,tie_flag\n";
  CHECK_THROWS_AS(read_catalog(""), DataError);
  CHECK_THROWS_AS(read_catalog("id,size\n"), DataError);
  CHECK_THROWS_AS(read_catalog(header + "1,0,2015-01-01 00:00,2015-01-01 00:00,summer,tree,false\n", 1.0), DataError);
  CHECK_THROWS_AS(read_catalog(header + "1,3,2015-01-01 00:00,2014-01-01 00:00,summer,tree,false\n", 1.0), DataError);
  CHECK_THROWS_AS(read_catalog(header + "1,3,2015-01-01 00:00,2015-01-01 00:00,spring,tree,false\n", 1.0), DataError);
  CHECK_THROWS_AS(read_catalog(header), DataError); // no n_year anywhere
  CHECK(read_catalog(header, 6.0).events.empty());
}

TEST_CASE("merge_catalogs renumbers by start")
{
  EventCatalog a;
  a.n_year = 6.0;
  EventCatalog b = a;
  ResilienceEvent e;
  e.size = 12;
  e.start = e.end = at("2012-03-01 00:00");
  a.events.push_back(e);
  e.start = e.end = at("2011-03-01 00:00");
  e.cause_group = CauseGroup::weather;
  b.events.push_back(e);
  auto const m = merge_catalogs(a, b);
  REQUIRE(m.events.size() == 2);
  CHECK(m.events[0].cause_group == CauseGroup::weather);
  CHECK(m.events[0].event_id == 1);
  CHECK(m.events[1].event_id == 2);
}
