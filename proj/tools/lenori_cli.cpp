// lenori: outage-resilience metrics from utility outage records.

#include "lenori/error.hpp"
#include "lenori/events.hpp"
#include "lenori/metrics.hpp"
#include "lenori/outage.hpp"
#include "lenori/report.hpp"
#include "lenori/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode
{
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

struct Globals
{
  std::int64_t             n_l = 10;
  std::int64_t             n_max = 5000;
  double                   rse_max = 0.1;
  std::int64_t             gap_minutes = 0;
  std::vector<unsigned>    summer_months{6, 7, 8, 9};
  std::optional<double>    years;
  std::optional<std::uint64_t> seed;
  std::string              out;
  std::string              format = "table";
};

auto read_file(std::string const &path) -> std::string
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lenori::DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes the whole document at once: to a sibling temp file renamed into place, or to stdout.
void emit(Globals const &g, std::string const &text)
{
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  auto const tmp = g.out + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw lenori::DataError("cannot write '" + g.out + "'");
    out << text;
    if (!out.flush()) throw lenori::DataError("cannot write '" + g.out + "'");
  }
  std::filesystem::rename(tmp, g.out);
}

auto format_of(Globals const &g) -> lenori::OutputFormat
{
  auto const f = lenori::parse_output_format(g.format);
  if (!f) throw CLI::ValidationError("--format", "expected table, csv or json");
  return *f;
}

auto report_options(Globals const &g) -> lenori::ReportOptions
{
  lenori::ReportOptions o;
  o.n_l = g.n_l;
  o.n_max = g.n_max;
  o.rse_max = g.rse_max;
  if (!lenori::tail_index_approximation_valid(g.n_l)) {
    std::cerr << "warning: 1/ALENO approximates the tail index only for N_L >= 6\n";
  }
  return o;
}

auto load_catalog(Globals const &g, std::string const &path) -> lenori::EventCatalog
{
  return lenori::read_catalog(read_file(path), g.years);
}

auto load_records(std::string const &path) -> std::vector<lenori::OutageRecord>
{
  auto parsed = lenori::parse_outages(read_file(path));
  for (auto const &r : parsed.rejects) std::cerr << path << ":" << r.line << ": rejected: " << r.reason << "\n";
  if (!parsed.rejects.empty()) {
    std::cerr << parsed.rejects.size() << " row(s) rejected, " << parsed.records.size() << " accepted\n";
  }
  return std::move(parsed.records);
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Large-event outage resilience metrics (LENORI, ALENO) and their statistical accuracy"};
  app.require_subcommand(1);
  Globals g;

  app.add_option("--n-l", g.n_l, "Large-event threshold N_L")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
  app.add_option("--n-max", g.n_max, "Largest possible event size N_max for the bounded law");
  app.add_option("--rse-max", g.rse_max, "Target relative standard error")->check(CLI::PositiveNumber);
  app.add_option("--gap-minutes", g.gap_minutes, "Chaining gap tolerance in minutes")->check(CLI::NonNegativeNumber);
  app.add_option("--summer-months", g.summer_months, "Comma-separated summer months")
    ->delimiter(',')
    ->check(CLI::Range(1u, 12u));
  app.add_option("--years", g.years, "Declared observation span in years")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output path (default stdout)");
  app.add_option("--format", g.format, "table | csv | json")->check(CLI::IsMember({"table", "csv", "json"}));

  std::string input;
  std::string causes_path;
  std::optional<double> alpha;
  std::string moments = "analytic";
  std::string by;
  int window = 2;
  std::optional<int> first_year;
  bool tail = false;
  std::int64_t trials = 10'000;

  auto *ingest = app.add_subcommand("ingest", "Validate outage records and write them in canonical form");
  ingest->add_option("input", input, "Outage CSV")->required()->check(CLI::ExistingFile);

  auto *events = app.add_subcommand("events", "Group forced outages into events and export the catalog");
  events->add_option("input", input, "Outage CSV")->required()->check(CLI::ExistingFile);
  events->add_option("--causes", causes_path, "Cause grouping file (raw_code,group per line)")->check(CLI::ExistingFile);

  auto *metrics = app.add_subcommand("metrics", "Full metrics and accuracy report for a catalog");
  metrics->add_option("catalog", input, "Event catalog CSV")->required()->check(CLI::ExistingFile);
  metrics->add_option("--alpha", alpha, "Tail index for the analytic rows (default 1/ALENO)")->check(CLI::PositiveNumber);
  metrics->add_option("--moments", moments, "analytic | empirical")->check(CLI::IsMember({"analytic", "empirical"}));

  auto *decompose = app.add_subcommand("decompose", "Metrics per season or cause slice");
  decompose->add_option("catalog", input, "Event catalog CSV")->required()->check(CLI::ExistingFile);
  decompose->add_option("--by", by, "season | cause")->required()->check(CLI::IsMember({"season", "cause"}));

  auto *track = app.add_subcommand("track", "Sliding-window tracking table");
  track->add_option("catalog", input, "Event catalog CSV")->required()->check(CLI::ExistingFile);
  track->add_option("--window", window, "Window length in years")->required()->check(CLI::PositiveNumber);
  track->add_option("--first-year", first_year, "First calendar year of coverage");

  auto *pmf = app.add_subcommand("pmf", "Empirical probability mass function of event sizes");
  pmf->add_option("catalog", input, "Event catalog CSV")->required()->check(CLI::ExistingFile);
  pmf->add_flag("--tail", tail, "Only events with N >= N_L, with the fitted power law");

  auto *synth = app.add_subcommand("synth", "Generate a synthetic catalog from a JSON spec");
  synth->add_option("spec", input, "Synthetic spec JSON")->required()->check(CLI::ExistingFile);

  auto *validate = app.add_subcommand("validate", "Monte Carlo validation of the accuracy formulas");
  validate->add_option("--trials", trials, "Trials per check (>= 1000)")->check(CLI::Range(std::int64_t{1000}, std::int64_t{100'000'000}));
  validate->add_option("--alpha", alpha, "Tail index (default 1.3)")->check(CLI::PositiveNumber);

  for (auto *sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e);
  } catch (CLI::ParseError const &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    auto const format = format_of(g);
    if (*ingest) {
      auto const records = load_records(input);
      emit(g, lenori::serialize_outages(records));
    } else if (*events) {
      auto const records = lenori::filter_forced(load_records(input));
      lenori::GroupingOptions options;
      options.gap_tolerance = std::chrono::minutes{g.gap_minutes};
      options.summer_months = {g.summer_months.begin(), g.summer_months.end()};
      options.n_year = g.years;
      if (!causes_path.empty()) options.causes = lenori::CauseGrouping::parse(read_file(causes_path));
      for (auto const &code : options.causes.unmapped_codes(records)) {
        std::cerr << "warning: cause code '" << code << "' has no group; counted as other\n";
      }
      emit(g, lenori::write_catalog(lenori::group_events(records, options)));
    } else if (*metrics) {
      auto const catalog = load_catalog(g, input);
      auto options = report_options(g);
      options.alpha = alpha;
      options.moments = moments == "empirical" ? lenori::MomentSource::empirical : lenori::MomentSource::analytic;
      emit(g, lenori::write_report(lenori::metrics_report(catalog, options), format));
    } else if (*decompose) {
      auto const catalog = load_catalog(g, input);
      auto const partition = by == "season" ? lenori::Partition::season : lenori::Partition::cause;
      emit(g, lenori::write_decomposition(lenori::decompose(catalog, partition, report_options(g)), format));
    } else if (*track) {
      auto const catalog = load_catalog(g, input);
      emit(g, lenori::write_tracking(lenori::sliding_window(catalog, window, report_options(g), first_year), format));
    } else if (*pmf) {
      auto const catalog = load_catalog(g, input);
      auto const table = lenori::pmf_table(catalog, tail ? lenori::PmfScope::tail : lenori::PmfScope::all, g.n_l);
      emit(g, lenori::write_pmf(table, format));
    } else if (*synth) {
      auto spec = lenori::synthetic_spec_from_json(nlohmann::json::parse(read_file(input)));
      if (g.seed) spec.seed = *g.seed;
      if (g.years) spec.years = *g.years;
      emit(g, lenori::write_catalog(lenori::synth_catalog(spec)));
    } else if (*validate) {
      lenori::ValidationConfig config;
      config.alpha = alpha.value_or(1.3);
      config.n_l = g.n_l;
      config.n_max = g.n_max;
      config.trials = trials;
      if (g.seed) config.seed = *g.seed;
      auto const checks = lenori::run_validation_suite(config);
      std::string text;
      bool all = true;
      for (auto const &c : checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%s  %-44s empirical=%.6g reference=%.6g tol=%g\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.empirical, c.analytic, c.tolerance);
        text += line;
        all = all && c.passed;
      }
      emit(g, text);
      return all ? kOk : kNumeric;
    }
  } catch (CLI::ParseError const &e) {
    std::cerr << "lenori: " << e.what() << "\n";
    return kUsage;
  } catch (lenori::NumericError const &e) {
    std::cerr << "lenori: " << e.what() << "\n";
    return kNumeric;
  } catch (nlohmann::json::exception const &e) {
    std::cerr << "lenori: " << e.what() << "\n";
    return kData;
  } catch (std::exception const &e) {
    std::cerr << "lenori: " << e.what() << "\n";
    return kData;
  }
  return kOk;
}
