#include "lenori/metrics.hpp"

namespace lenori {

auto select_large(EventCatalog const &catalog, std::int64_t n_l) -> LargeEventSlice<>
{
  std::vector<std::int64_t> sizes;
  for (auto const &e : catalog.events) {
    if (e.size >= n_l) sizes.push_back(e.size);
  }
  LargeEventSlice<>::Sizes arr(static_cast<Eigen::Index>(sizes.size()));
  for (std::size_t i = 0; i < sizes.size(); ++i) arr(static_cast<Eigen::Index>(i)) = sizes[i];
  return {std::move(arr), n_l, catalog.n_year};
}

auto metrics_report(LargeEventSlice<> const &slice, ReportOptions const &options) -> MetricsReport
{
  MetricsReport r;
  r.n_l = slice.n_l();
  r.n_max = options.n_max;
  r.n_year = slice.n_year();
  r.n_large = slice.n_large();
  r.f_large = large_event_frequency(slice);
  r.lenori = lenori(slice);
  r.lennolog = lennolog(slice);
  r.aleno = aleno(slice);
  r.alpha_hat = tail_index_estimate(slice);
  if (!slice.empty()) r.n_maxobs = slice.sizes().maxCoeff();

  auto const alpha = options.alpha ? options.alpha : r.alpha_hat;
  if (!alpha) return r;
  if (options.moments == MomentSource::empirical && slice.empty()) return r;

  auto const model = TailModel<double>::unbounded(*alpha, slice.n_l());
  auto const lm = options.moments == MomentSource::empirical
                    ? empirical_log_moments(slice.sizes(), slice.n_l())
                    : log_moments(model);
  r.n_large_min = min_large_events(lm, options.rse_max);
  r.n_year_min = min_years(*r.n_large_min, r.f_large);
  if (r.n_large > 0) {
    r.rse_ale = rse_aleno(lm, static_cast<double>(r.n_large));
    r.rse_len = rse_lenori(lm, static_cast<double>(r.n_large));
  }
  if (options.n_max) {
    auto const bm = bounded_moments(TailModel<double>::bounded(*alpha, slice.n_l(), *options.n_max));
    r.rse_pb = bm.rse;
    r.c = bm.c;
    r.n_large_minnolog = min_large_nolog(bm.rse, options.rse_max);
    r.n_year_minnolog = min_years(*r.n_large_minnolog, r.f_large);
    if (r.n_large > 0) r.rse_lennolog = rse_lennolog(bm.rse, static_cast<double>(r.n_large));
  }
  return r;
}

auto metrics_report(EventCatalog const &catalog, ReportOptions const &options) -> MetricsReport
{
  return metrics_report(select_large(catalog, options.n_l), options);
}

} // namespace lenori
