#include "lenori/report.hpp"

#include "lenori/error.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace lenori {

auto parse_output_format(std::string_view text) -> std::optional<OutputFormat>
{
  if (text == "table") return OutputFormat::table;
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  return std::nullopt;
}

namespace {

auto shortest(double v) -> std::string
{
  char buf[64];
  auto const r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

auto pretty(std::optional<double> v) -> std::string
{
  if (!v) return "unavailable";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

auto pad(std::string s, std::size_t width) -> std::string
{
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

auto json_or_null(std::optional<double> v) -> nlohmann::json
{
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

/// Columns of reports rendered side by side, one row per key.
auto write_columns(std::vector<std::string> const &labels,
                   std::vector<MetricsReport const *> const &reports,
                   std::vector<std::string> const &keys,
                   OutputFormat format) -> std::string
{
  std::string out;
  if (format == OutputFormat::csv) {
    out += "quantity";
    for (auto const &l : labels) out += "," + csv::quote(l);
    out += '\n';
    for (auto const &k : keys) {
      out += csv::quote(k);
      for (auto const *r : reports) {
        auto const v = report_value(*r, k);
        out += ',';
        out += v ? shortest(*v) : std::string{};
      }
      out += '\n';
    }
    return out;
  }
  std::size_t key_width = 0;
  for (auto const &k : keys) key_width = std::max(key_width, k.size());
  std::size_t col_width = 12;
  for (auto const &l : labels) col_width = std::max(col_width, l.size() + 2);
  if (!labels.empty() && !(labels.size() == 1 && labels.front().empty())) {
    out += std::string(key_width, ' ');
    for (auto const &l : labels) out += pad(l, col_width);
    out += '\n';
  }
  for (auto const &k : keys) {
    out += pad(k, key_width);
    for (auto const *r : reports) out += pad(pretty(report_value(*r, k)), col_width);
    out += '\n';
  }
  return out;
}

std::vector<std::string> const kSliceKeys{"alpha",   "ALENO",        "LENORI",  "RSE_ALE", "RSE_LEN",
                                          "n_large", "n_large^min",  "f_large", "n_year"};
std::vector<std::string> const kTrackingKeys{"alpha", "ALENO", "LENORI", "RSE_ALE", "RSE_LEN", "n_large"};

} // namespace

// ---------------------------------------------------------------------------------------------

auto pmf_table(EventCatalog const &catalog, PmfScope scope, std::int64_t n_l) -> PmfTable
{
  PmfTable t;
  t.scope = scope;
  t.n_l = n_l;
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total = 0;
  for (auto const &e : catalog.events) {
    if (scope == PmfScope::tail && e.size < n_l) continue;
    ++counts[e.size];
    ++total;
  }
  if (scope == PmfScope::tail && total == 0) throw DataError("no large events");
  std::optional<TailModel<double>> model;
  if (scope == PmfScope::tail) {
    t.alpha_hat = tail_index_estimate(select_large(catalog, n_l));
    model = TailModel<double>::unbounded(*t.alpha_hat, n_l);
  }
  for (auto const &[n, c] : counts) {
    PmfRow row{n, c, static_cast<double>(c) / static_cast<double>(total), std::nullopt};
    if (model) row.idealized = pmf_power_law(*model, n);
    t.rows.push_back(row);
  }
  return t;
}

auto write_pmf(PmfTable const &t, OutputFormat format) -> std::string
{
  bool const tail = t.scope == PmfScope::tail;
  if (format == OutputFormat::json) {
    nlohmann::json j;
    j["scope"] = tail ? "tail" : "all";
    j["N_L"] = t.n_l;
    j["alpha"] = json_or_null(t.alpha_hat);
    j["rows"] = nlohmann::json::array();
    for (auto const &r : t.rows) {
      nlohmann::json row{{"n", r.n}, {"count", r.count}, {"probability", r.probability}};
      if (r.idealized) row["idealized"] = *r.idealized;
      j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
  }
  char const sep = format == OutputFormat::csv ? ',' : '\t';
  std::string out = "n" + std::string(1, sep) + "count" + sep + "probability" + sep + "log10_n" + sep + "log10_p";
  if (tail) out += std::string(1, sep) + "idealized" + sep + "log10_idealized";
  out += '\n';
  for (auto const &r : t.rows) {
    out += std::to_string(r.n) + sep + std::to_string(r.count) + sep + shortest(r.probability) + sep +
           shortest(std::log10(static_cast<double>(r.n))) + sep + shortest(std::log10(r.probability));
    if (tail) out += std::string(1, sep) + shortest(*r.idealized) + sep + shortest(std::log10(*r.idealized));
    out += '\n';
  }
  return out;
}

auto tail_slope(std::vector<std::int64_t> const &sizes, std::int64_t n_l, double bin_ratio, int min_count)
  -> TailSlopeFit
{
  if (!(bin_ratio > 1.0)) throw NumericError("bin ratio must exceed 1");
  std::int64_t total = 0;
  std::int64_t largest = 0;
  for (auto n : sizes) {
    if (n >= n_l) {
      ++total;
      largest = std::max(largest, n);
    }
  }
  if (total == 0) throw DataError("no large events");

  // integer bin edges lo_k = round(n_l * r^k)
  std::vector<std::int64_t> edges{n_l};
  while (edges.back() <= largest) {
    auto const next = static_cast<std::int64_t>(std::llround(static_cast<double>(n_l) * std::pow(bin_ratio, edges.size())));
    edges.push_back(std::max(next, edges.back() + 1));
  }
  std::vector<std::int64_t> counts(edges.size() - 1, 0);
  for (auto n : sizes) {
    if (n < n_l) continue;
    auto const it = std::upper_bound(edges.begin(), edges.end(), n);
    ++counts[static_cast<std::size_t>(it - edges.begin() - 1)];
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < min_count) continue;
    auto const lo = static_cast<double>(edges[k]);
    auto const hi = static_cast<double>(edges[k + 1]);
    double const density = static_cast<double>(counts[k]) / ((hi - lo) * static_cast<double>(total));
    xs.push_back(0.5 * (std::log10(lo) + std::log10(hi - 1.0)));
    ys.push_back(std::log10(density));
  }
  if (xs.size() < 2) throw DataError("too few populated bins for a tail slope");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = xs[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs(static_cast<Eigen::Index>(i)) = ys[i];
  }
  Eigen::Vector2d const coef = design.colPivHouseholderQr().solve(rhs);
  return {coef(0), coef(1), static_cast<int>(xs.size())};
}

// ---------------------------------------------------------------------------------------------

auto decompose(EventCatalog const &catalog, Partition by, ReportOptions const &options) -> Decomposition
{
  Decomposition d;
  d.by = by;
  d.all = metrics_report(catalog, options);

  auto slice_of = [&](auto keep) {
    EventCatalog sub;
    sub.n_year = catalog.n_year;
    sub.gap_tolerance_minutes = catalog.gap_tolerance_minutes;
    for (auto const &e : catalog.events) {
      if (keep(e)) {
        sub.events.push_back(e);
        sub.source_record_count += e.size;
      }
    }
    return metrics_report(sub, options);
  };

  if (by == Partition::season) {
    for (auto s : {Season::summer, Season::non_summer}) {
      d.slices.push_back({std::string(to_string(s)), slice_of([s](auto const &e) { return e.season == s; })});
    }
  } else {
    for (auto g : {CauseGroup::tree, CauseGroup::weather, CauseGroup::other}) {
      d.slices.push_back({std::string(to_string(g)), slice_of([g](auto const &e) { return e.cause_group == g; })});
    }
  }
  double sum = 0.0;
  for (auto const &s : d.slices) sum += s.report.lenori;
  d.additivity_residual = d.all.lenori > 0.0 ? std::abs(sum - d.all.lenori) / d.all.lenori : std::abs(sum);
  return d;
}

auto sliding_window(EventCatalog const &catalog, int window_years, ReportOptions const &options,
                    std::optional<int> first_year) -> TrackingTable
{
  if (window_years < 1) throw DataError("window must be at least one year");
  auto const span = static_cast<int>(std::floor(catalog.n_year + 1e-9));
  if (window_years > span) {
    throw DataError("window of " + std::to_string(window_years) + " years exceeds the " + std::to_string(span) +
                    "-year span");
  }
  if (!first_year) {
    if (catalog.events.empty()) throw DataError("empty catalog: first year of coverage must be given");
    first_year = year_of(catalog.events.front().start);
  }

  TrackingTable table;
  table.window_years = window_years;
  for (int y = *first_year; y + window_years <= *first_year + span; ++y) {
    auto const lo = year_start(y);
    auto const hi = year_start(y + window_years);
    EventCatalog sub;
    sub.n_year = static_cast<double>(window_years);
    for (auto const &e : catalog.events) {
      if (e.start >= lo && e.start < hi) {
        sub.events.push_back(e);
        sub.source_record_count += e.size;
      }
    }
    table.rows.push_back({y, y + window_years - 1, metrics_report(sub, options)});
  }
  return table;
}

// ---------------------------------------------------------------------------------------------

auto report_keys() -> std::vector<std::string> const &
{
  static std::vector<std::string> const keys{
    "alpha",           "ALENO",         "LENORI",       "RSE_ALE",     "RSE_LEN",    "RSE_Pb",
    "n_large",         "f_large",       "n_year",       "n_large^min", "n_year^min", "n_large^minnolog",
    "n_year^minnolog", "N_maxobs",      "N_max",        "N_L",         "LENnolog",   "RSE_LENnolog",
    "c",
  };
  return keys;
}

auto report_value(MetricsReport const &r, std::string_view key) -> std::optional<double>
{
  auto opt_int = [](std::optional<std::int64_t> v) -> std::optional<double> {
    return v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt;
  };
  if (key == "alpha") return r.alpha_hat;
  if (key == "ALENO") return r.aleno;
  if (key == "LENORI") return r.lenori;
  if (key == "RSE_ALE") return r.rse_ale;
  if (key == "RSE_LEN") return r.rse_len;
  if (key == "RSE_Pb") return r.rse_pb;
  if (key == "n_large") return static_cast<double>(r.n_large);
  if (key == "f_large") return r.f_large;
  if (key == "n_year") return r.n_year;
  if (key == "n_large^min") return r.n_large_min;
  if (key == "n_year^min") return r.n_year_min;
  if (key == "n_large^minnolog") return r.n_large_minnolog;
  if (key == "n_year^minnolog") return r.n_year_minnolog;
  if (key == "N_maxobs") return opt_int(r.n_maxobs);
  if (key == "N_max") return opt_int(r.n_max);
  if (key == "N_L") return static_cast<double>(r.n_l);
  if (key == "LENnolog") return r.lennolog;
  if (key == "RSE_LENnolog") return r.rse_lennolog;
  if (key == "c") return r.c;
  throw std::invalid_argument("unknown report key '" + std::string(key) + "'");
}

auto to_json(MetricsReport const &r) -> nlohmann::json
{
  nlohmann::json j = nlohmann::json::object();
  for (auto const &k : report_keys()) {
    auto const v = report_value(r, k);
    bool const integral = k == "n_large" || k == "N_maxobs" || k == "N_max" || k == "N_L";
    if (!v) {
      j[k] = nullptr;
    } else if (integral) {
      j[k] = static_cast<std::int64_t>(*v);
    } else {
      j[k] = *v;
    }
  }
  return j;
}

auto metrics_report_from_json(nlohmann::json const &j) -> MetricsReport
{
  auto opt = [&](char const *k) -> std::optional<double> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<double>();
  };
  auto opt_int = [&](char const *k) -> std::optional<std::int64_t> {
    if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
    return j.at(k).get<std::int64_t>();
  };
  try {
    MetricsReport r;
    r.alpha_hat = opt("alpha");
    r.aleno = opt("ALENO");
    r.lenori = j.at("LENORI").get<double>();
    r.rse_ale = opt("RSE_ALE");
    r.rse_len = opt("RSE_LEN");
    r.rse_pb = opt("RSE_Pb");
    r.n_large = j.at("n_large").get<std::int64_t>();
    r.f_large = j.at("f_large").get<double>();
    r.n_year = j.at("n_year").get<double>();
    r.n_large_min = opt("n_large^min");
    r.n_year_min = opt("n_year^min");
    r.n_large_minnolog = opt("n_large^minnolog");
    r.n_year_minnolog = opt("n_year^minnolog");
    r.n_maxobs = opt_int("N_maxobs");
    r.n_max = opt_int("N_max");
    r.n_l = j.at("N_L").get<std::int64_t>();
    r.lennolog = j.at("LENnolog").get<double>();
    r.rse_lennolog = opt("RSE_LENnolog");
    r.c = opt("c");
    return r;
  } catch (nlohmann::json::exception const &e) {
    throw DataError(std::string("malformed metrics report: ") + e.what());
  }
}

auto write_report(MetricsReport const &r, OutputFormat format) -> std::string
{
  if (format == OutputFormat::json) return to_json(r).dump(2) + "\n";
  return write_columns({format == OutputFormat::csv ? "value" : ""}, {&r}, report_keys(), format);
}

auto write_decomposition(Decomposition const &d, OutputFormat format) -> std::string
{
  if (format == OutputFormat::json) {
    nlohmann::json j;
    j["by"] = d.by == Partition::season ? "season" : "cause";
    j["all"] = to_json(d.all);
    for (auto const &s : d.slices) j["slices"][s.label] = to_json(s.report);
    j["additivity_residual"] = d.additivity_residual;
    return j.dump(2) + "\n";
  }
  std::vector<std::string> labels{"all"};
  std::vector<MetricsReport const *> reports{&d.all};
  for (auto const &s : d.slices) {
    labels.push_back(s.label);
    reports.push_back(&s.report);
  }
  return write_columns(labels, reports, kSliceKeys, format);
}

auto write_tracking(TrackingTable const &t, OutputFormat format) -> std::string
{
  auto label = [](TrackingRow const &r) {
    return r.first_year == r.last_year ? std::to_string(r.first_year)
                                       : std::to_string(r.first_year) + "-" + std::to_string(r.last_year);
  };
  if (format == OutputFormat::json) {
    nlohmann::json j;
    j["window_years"] = t.window_years;
    j["windows"] = nlohmann::json::array();
    for (auto const &r : t.rows) {
      j["windows"].push_back({{"first_year", r.first_year}, {"last_year", r.last_year}, {"report", to_json(r.report)}});
    }
    return j.dump(2) + "\n";
  }
  std::vector<std::string> labels;
  std::vector<MetricsReport const *> reports;
  for (auto const &r : t.rows) {
    labels.push_back(label(r));
    reports.push_back(&r.report);
  }
  return write_columns(labels, reports, kTrackingKeys, format);
}

} // namespace lenori
