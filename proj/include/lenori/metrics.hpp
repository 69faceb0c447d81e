#pragma once

#include "lenori/analytic.hpp"
#include "lenori/error.hpp"
#include "lenori/events.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace lenori {

/// Sizes of the large events (N_i >= n_l) observed over n_year years.
///
/// Size is std::int64_t for real catalogs; a floating Size gives a real-valued shadow slice
/// (used to study exact scale responses that integer rounding would blur).
template <typename Size = std::int64_t> class LargeEventSlice
{
public:
  using Sizes = Eigen::Array<Size, Eigen::Dynamic, 1>;

  LargeEventSlice(Sizes sizes, std::int64_t n_l, double n_year)
    : sizes_(std::move(sizes))
    , n_l_(n_l)
    , n_year_(n_year)
    , b_(std::log(static_cast<double>(n_l) - 0.5))
  {
    if (n_l < 2) throw NumericError("large-event threshold must be at least 2");
    if (!(n_year > 0.0)) throw NumericError("n_year must be positive");
    if (sizes_.size() > 0 && !(sizes_ >= static_cast<Size>(n_l)).all()) {
      throw DataError("slice contains an event below the large-event threshold");
    }
  }

  [[nodiscard]] auto sizes() const -> Sizes const & { return sizes_; }
  [[nodiscard]] auto n_l() const -> std::int64_t { return n_l_; }
  [[nodiscard]] auto n_year() const -> double { return n_year_; }
  [[nodiscard]] auto b() const -> double { return b_; }
  [[nodiscard]] auto n_large() const -> std::int64_t { return static_cast<std::int64_t>(sizes_.size()); }
  [[nodiscard]] auto empty() const -> bool { return sizes_.size() == 0; }

  /// sum_i ln(N_i / (n_l - 0.5))
  [[nodiscard]] auto log_excess_sum() const -> double
  {
    if (empty()) return 0.0;
    return (sizes_.template cast<double>() / (static_cast<double>(n_l_) - 0.5)).log().sum();
  }

  /// Same slice with every size multiplied by `factor` (real-valued).
  [[nodiscard]] auto scaled(double factor) const -> LargeEventSlice<double>
  {
    typename LargeEventSlice<double>::Sizes s = sizes_.template cast<double>() * factor;
    return LargeEventSlice<double>::unchecked(std::move(s), n_l_, n_year_);
  }

  static auto unchecked(Sizes sizes, std::int64_t n_l, double n_year) -> LargeEventSlice
  {
    LargeEventSlice s(Sizes{}, n_l, n_year);
    s.sizes_ = std::move(sizes);
    return s;
  }

private:
  Sizes        sizes_;
  std::int64_t n_l_;
  double       n_year_;
  double       b_;
};

/// Sizes of the catalog events with size >= n_l, in catalog order.
auto select_large(EventCatalog const &catalog, std::int64_t n_l) -> LargeEventSlice<>;

/// Mean of ln(N_i/(n_l - 0.5)); nullopt ("no large events") for an empty slice.
template <typename Size> auto aleno(LargeEventSlice<Size> const &slice) -> std::optional<double>
{
  if (slice.empty()) return std::nullopt;
  return slice.log_excess_sum() / static_cast<double>(slice.n_large());
}

/// Annualized sum of ln(N_i/(n_l - 0.5)); zero when there are no large events.
template <typename Size> auto lenori(LargeEventSlice<Size> const &slice) -> double
{
  return slice.log_excess_sum() / slice.n_year();
}

template <typename Size> auto large_event_frequency(LargeEventSlice<Size> const &slice) -> double
{
  return static_cast<double>(slice.n_large()) / slice.n_year();
}

/// 1 / ALENO, the approximate maximum-likelihood tail index (accurate for n_l >= 6).
template <typename Size> auto tail_index_estimate(LargeEventSlice<Size> const &slice) -> std::optional<double>
{
  auto const a = aleno(slice);
  if (!a) return std::nullopt;
  return 1.0 / *a;
}

inline auto tail_index_approximation_valid(std::int64_t n_l) -> bool { return n_l >= 6; }

/// Annualized sum of N_i/(n_l - 0.5), the comparison index without the logarithm.
template <typename Size> auto lennolog(LargeEventSlice<Size> const &slice) -> double
{
  if (slice.empty()) return 0.0;
  return (slice.sizes().template cast<double>() / (static_cast<double>(slice.n_l()) - 0.5)).sum() / slice.n_year();
}

enum class MomentSource
{
  analytic,  // moments of the fitted (or declared) tail model
  empirical, // sample moments of ln N_i
};

struct ReportOptions
{
  std::int64_t                n_l = 10;
  std::optional<std::int64_t> n_max = 5000;
  double                      rse_max = 0.1;
  MomentSource                moments = MomentSource::analytic;
  std::optional<double>       alpha; // use this tail index for the analytic rows instead of 1/ALENO
};

/// All metrics and accuracy figures for one slice. Quantities that cannot be formed (ALENO of an
/// empty slice, RSEs without large events, minimum years with zero frequency) stay empty.
struct MetricsReport
{
  std::int64_t                n_l = 10;
  std::optional<std::int64_t> n_max;
  double                      n_year = 1.0;
  std::int64_t                n_large = 0;
  double                      f_large = 0.0;
  double                      lenori = 0.0;
  double                      lennolog = 0.0;
  std::optional<double>       aleno;
  std::optional<double>       alpha_hat;
  std::optional<std::int64_t> n_maxobs;

  std::optional<double> rse_ale;
  std::optional<double> rse_len;
  std::optional<double> rse_pb;
  std::optional<double> rse_lennolog;
  std::optional<double> c;
  std::optional<double> n_large_min;
  std::optional<double> n_year_min;
  std::optional<double> n_large_minnolog;
  std::optional<double> n_year_minnolog;

  friend bool operator==(MetricsReport const &, MetricsReport const &) = default;
};

auto metrics_report(LargeEventSlice<> const &slice, ReportOptions const &options = {}) -> MetricsReport;
auto metrics_report(EventCatalog const &catalog, ReportOptions const &options = {}) -> MetricsReport;

} // namespace lenori
