#pragma once

#include "lenori/events.hpp"
#include "lenori/metrics.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lenori {

enum class OutputFormat
{
  table,
  csv,
  json
};

auto parse_output_format(std::string_view text) -> std::optional<OutputFormat>;

// ---------------------------------------------------------------------------------------------
// Empirical PMF of event sizes

enum class PmfScope
{
  all,  // every event
  tail, // events with N >= n_l, with the fitted power law alongside
};

struct PmfRow
{
  std::int64_t          n{};
  std::int64_t          count{};
  double                probability{};
  std::optional<double> idealized; // power-law pmf at the fitted tail index (tail scope only)
};

struct PmfTable
{
  PmfScope              scope = PmfScope::all;
  std::int64_t          n_l = 10;
  std::optional<double> alpha_hat;
  std::vector<PmfRow>   rows; // ascending n, observed sizes only
};

/// Throws DataError("no large events") for a tail table without any event >= n_l.
auto pmf_table(EventCatalog const &catalog, PmfScope scope, std::int64_t n_l = 10) -> PmfTable;

/// Plot-ready delimited rows: n,count,probability,log10_n,log10_p[,idealized,log10_idealized].
auto write_pmf(PmfTable const &table, OutputFormat format) -> std::string;

struct TailSlopeFit
{
  double slope{};
  double intercept{};
  int    bins{};
};

/// Least-squares line through log10(density) vs log10(bin centre) over logarithmic bins
/// [n_l r^k, n_l r^{k+1}); bins with fewer than `min_count` events are dropped. For a power law
/// of tail index alpha the slope approaches -(alpha + 1).
auto tail_slope(std::vector<std::int64_t> const &sizes, std::int64_t n_l, double bin_ratio = 2.0, int min_count = 5)
  -> TailSlopeFit;

// ---------------------------------------------------------------------------------------------
// Decomposition by season or cause

enum class Partition
{
  season,
  cause
};

struct SliceReport
{
  std::string   label;
  MetricsReport report;
};

struct Decomposition
{
  Partition                by = Partition::season;
  MetricsReport            all;
  std::vector<SliceReport> slices;
  double                   additivity_residual = 0.0; // |sum slice LENORI - all LENORI| / all LENORI
};

/// One report per slice (summer/non_summer or tree/weather/other) with the catalog's n_year and
/// threshold, plus the whole-catalog column.
auto decompose(EventCatalog const &catalog, Partition by, ReportOptions const &options = {}) -> Decomposition;

// ---------------------------------------------------------------------------------------------
// Sliding-window tracking

struct TrackingRow
{
  int           first_year{};
  int           last_year{};
  MetricsReport report;
};

struct TrackingTable
{
  int                      window_years{};
  std::vector<TrackingRow> rows;
};

/// Windows of `window_years` calendar years starting each January 1, stepped by one year, from
/// `first_year` (default: year of the first event) across floor(n_year) years of coverage.
/// Events belong to the window containing their start; each row uses n_year = window_years.
auto sliding_window(EventCatalog const &catalog,
                    int window_years,
                    ReportOptions const &options = {},
                    std::optional<int> first_year = std::nullopt) -> TrackingTable;

// ---------------------------------------------------------------------------------------------
// Serialization

/// Row names as they appear in the result tables.
auto report_keys() -> std::vector<std::string> const &;
auto report_value(MetricsReport const &r, std::string_view key) -> std::optional<double>;

auto to_json(MetricsReport const &r) -> nlohmann::json;
auto metrics_report_from_json(nlohmann::json const &j) -> MetricsReport;

auto write_report(MetricsReport const &r, OutputFormat format) -> std::string;
auto write_decomposition(Decomposition const &d, OutputFormat format) -> std::string;
auto write_tracking(TrackingTable const &t, OutputFormat format) -> std::string;

} // namespace lenori
