#include "lenori/error.hpp"
#include "lenori/outage.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

using namespace lenori;

namespace {

std::string const kHeader = "outage_id,start,end,cause_code,forced,momentary\n";

} // namespace

TEST_CASE("timestamps parse at minute resolution")
{
  auto const t = parse_timestamp("2015-07-01 10:00");
  REQUIRE(t);
  CHECK(format_timestamp(*t) == "2015-07-01 10:00");
  CHECK(month_of(*t) == 7);
  CHECK(year_of(*t) == 2015);

  auto const with_seconds = parse_timestamp("2015-07-01 10:00:59");
  REQUIRE(with_seconds);
  CHECK(*with_seconds == *t);

  CHECK_FALSE(parse_timestamp("2015-02-30 10:00"));
  CHECK_FALSE(parse_timestamp("2015-07-01 24:00"));
  CHECK_FALSE(parse_timestamp("2015-07-01"));
  CHECK_FALSE(parse_timestamp("2015/07/01 10:00"));
  CHECK(parse_timestamp("2016-02-29T23:59"));
}

TEST_CASE("csv splitting")
{
  CHECK(csv::split_line("a, b ,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(csv::split_line(R"("x,y","say ""hi""",)") == std::vector<std::string>{"x,y", "say \"hi\"", ""});
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
}

TEST_CASE("parse_outages: empty file with header")
{
  auto const r = parse_outages(kHeader);
  CHECK(r.records.empty());
  CHECK(r.rejects.empty());
}

TEST_CASE("parse_outages: momentary record with end = start")
{
  auto const r = parse_outages(kHeader + "O1, 2015-07-01 10:00, 2015-07-01 10:00, TREE, true, true\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.rejects.empty());
  auto const &rec = r.records.front();
  CHECK(rec.outage_id == "O1");
  CHECK(rec.start == rec.end);
  CHECK(rec.cause_code == "TREE");
  CHECK(rec.forced);
  CHECK(rec.momentary);
}

TEST_CASE("parse_outages: 100 rows with 3 bad timestamps")
{
  std::string text = kHeader;
  std::vector<std::size_t> bad_lines;
  for (int i = 0; i < 100; ++i) {
    bool const bad = i == 7 || i == 42 || i == 99;
    char row[128];
    std::snprintf(row, sizeof row, "O%d,2014-03-%02d 08:%02d,%s,WIND,true,false\n", i, 1 + i % 28, i % 60,
                  bad ? "2014-03-xx 09:00" : "2014-03-28 23:00");
    text += row;
    if (bad) bad_lines.push_back(static_cast<std::size_t>(i) + 2);
  }
  auto const r = parse_outages(text);
  CHECK(r.records.size() == 97);
  REQUIRE(r.rejects.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.rejects[i].line == bad_lines[i]);
    CHECK(r.rejects[i].reason.find("end timestamp") != std::string::npos);
  }
}

TEST_CASE("parse_outages: row-level errors")
{
  auto const r = parse_outages(kHeader + "A,2015-01-01 10:00,2015-01-01 09:00,X,true,false\n"
                                         "B,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                         "B,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                         "C,2015-01-01 10:00,2015-01-01 11:00,X,maybe,false\n"
                                         "D,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                         "E,2015-01-01 10:00,2015-01-01 11:00,X,true\n"
                                         "F,2015-01-01 10:00,2015-01-01 11:00,X,1,0\n"
                                         "G,2015-01-01 10:00,2015-01-01 11:00,X,no,yes\n");
  CHECK(r.records.size() == 4);
  REQUIRE(r.rejects.size() == 4);
  CHECK(r.rejects[0].reason == "end precedes start");
  CHECK(r.rejects[1].reason.find("duplicate") != std::string::npos);
  CHECK(r.rejects[2].reason.find("flag") != std::string::npos);
  CHECK(r.rejects[3].reason.find("fields") != std::string::npos);
}

TEST_CASE("parse_outages: hard failures")
{
  CHECK_THROWS_AS(parse_outages("outage_id,start,end,cause_code,forced\n"), DataError);
  CHECK_THROWS_AS(parse_outages(""), DataError);
  CHECK_THROWS_AS(parse_outages(kHeader + "A,bad,bad,X,true,false\n"
                                          "B,bad,bad,X,true,false\n"
                                          "C,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"),
                  DataError);
  // exactly half rejected is tolerated
  CHECK_NOTHROW(parse_outages(kHeader + "A,bad,bad,X,true,false\n"
                                        "C,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"));
}

TEST_CASE("parse_outages: custom schema and column order")
{
  OutageSchema schema;
  schema.outage_id = "id";
  schema.start = "off";
  schema.end = "on";
  schema.cause_code = "cause";
  schema.forced = "is_forced";
  schema.momentary = "is_momentary";
  auto const r = parse_outages("cause,on,off,id,is_momentary,is_forced,feeder\n"
                               "LIGHTNING,2015-07-01 12:00,2015-07-01 10:00,X9,false,true,F12\n",
                               schema);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].outage_id == "X9");
  CHECK(r.records[0].cause_code == "LIGHTNING");
  CHECK(format_timestamp(r.records[0].end) == "2015-07-01 12:00");
}

TEST_CASE("filter_forced")
{
  CHECK(filter_forced({}).empty());

  auto const parsed = parse_outages(kHeader + "F1,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                              "P1,2015-01-01 10:00,2015-01-01 11:00,X,false,false\n"
                                              "F2,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                              "F3,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                              "P2,2015-01-01 10:00,2015-01-01 11:00,X,false,true\n"
                                              "F4,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n"
                                              "F5,2015-01-01 10:00,2015-01-01 11:00,X,true,false\n");
  auto const input = parsed.records;
  auto const forced = filter_forced(input);
  REQUIRE(forced.size() == 5);
  for (auto const &r : forced) CHECK(r.outage_id.front() == 'F');
  CHECK(input == parsed.records); // input untouched
  CHECK(filter_forced(forced) == forced);

  auto const momentary = parse_outages(kHeader + "M1,2015-01-01 10:00,2015-01-01 10:00,X,true,true\n"
                                                 "M2,2015-01-01 10:05,2015-01-01 10:05,X,true,true\n"
                                                 "M3,2015-01-01 10:09,2015-01-01 10:09,X,true,true\n");
  CHECK(filter_forced(momentary.records).size() == 3);
}

TEST_CASE("serialize then parse reproduces random record sets")
{
  std::mt19937_64 rng(11);
  auto const base = *parse_timestamp("2012-01-01 00:00");
  for (int round = 0; round < 20; ++round) {
    std::vector<OutageRecord> records;
    auto const count = rng() % 60;
    for (std::size_t i = 0; i < count; ++i) {
      OutageRecord r;
      r.outage_id = "id-" + std::to_string(round) + "-" + std::to_string(i) + (i % 7 == 0 ? ",q\"x" : "");
      r.start = base + std::chrono::minutes{static_cast<long>(rng() % 3'000'000)};
      r.end = r.start + std::chrono::minutes{static_cast<long>(rng() % 5000)};
      r.cause_code = std::array<char const *, 4>{"TREE", "WIND, HIGH", "ANIMAL", ""}[rng() % 4];
      r.forced = rng() % 3 != 0;
      r.momentary = rng() % 5 == 0;
      records.push_back(r);
    }
    auto const again = parse_outages(serialize_outages(records));
    CHECK(again.rejects.empty());
    CHECK(again.records == records);
  }
}

TEST_CASE("cause grouping")
{
  auto const g = CauseGrouping::parse("# utility cause codes\n"
                                      "TREE-FALL,tree\n"
                                      "TREE-CONTACT, tree\n"
                                      "\n"
                                      "WIND,weather\n"
                                      "LIGHTNING,weather\n"
                                      "ANIMAL,other\n");
  CHECK(g.group_of("TREE-FALL") == CauseGroup::tree);
  CHECK(g.group_of("LIGHTNING") == CauseGroup::weather);
  CHECK(g.group_of("ANIMAL") == CauseGroup::other);
  CHECK(g.group_of("UNKNOWN") == CauseGroup::other);
  CHECK_FALSE(g.is_mapped("UNKNOWN"));

  auto const parsed = parse_outages(kHeader + "A,2015-01-01 10:00,2015-01-01 11:00,WIND,true,false\n"
                                              "B,2015-01-01 10:00,2015-01-01 11:00,VEHICLE,true,false\n"
                                              "C,2015-01-01 10:00,2015-01-01 11:00,VEHICLE,true,false\n");
  CHECK(g.unmapped_codes(parsed.records) == std::set<std::string>{"VEHICLE"});

  CauseGrouping const fallback;
  CHECK(fallback.group_of("Weather") == CauseGroup::weather);
  CHECK(fallback.group_of("TREE") == CauseGroup::tree);
  CHECK(fallback.group_of("VEHICLE") == CauseGroup::other);

  CHECK_THROWS_AS(CauseGrouping::parse("WIND,storm\n"), DataError);
  CHECK_THROWS_AS(CauseGrouping::parse("WIND\n"), DataError);
  CHECK_THROWS_AS(CauseGrouping::parse("WIND,weather\nWIND,tree\n"), DataError);
}
