#pragma once

#include "lenori/analytic.hpp"
#include "lenori/events.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace lenori {

/// All synthetic streams use std::mt19937_64 (MT19937-64, fully specified by the standard) with
/// uniforms and Poisson variates derived here rather than by <random> distributions, so a seed
/// reproduces the same draws on every standard library.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer applied to (seed, index): independent per-trial stream seeds.
auto derive_seed(std::uint64_t seed, std::uint64_t index) -> std::uint64_t;

/// Uniform on (0, 1] with 53 random bits.
auto uniform_open_closed(Rng &rng) -> double;

/// Poisson variate: multiplication method below mean 10, Hormann's PTRS transformed rejection above.
auto sample_event_count(double mean, Rng &rng) -> std::int64_t;
auto sample_event_count(double mean, std::uint64_t seed) -> std::int64_t;

/// Inverse-CDF sampler for the discrete power law.
///
/// Survival probabilities P(N > n) are tabulated for n up to n_max (bounded model) or up to
/// n_l + table_size - 1 (unbounded). Unbounded draws landing in the residual tail beyond the
/// table are continued with a continuous Pareto of index alpha anchored at table end + 0.5 and
/// rounded to the nearest integer.
class PowerLawSampler
{
public:
  explicit PowerLawSampler(TailModel<double> model, std::int64_t table_size = 1'000'000);

  auto operator()(Rng &rng) const -> std::int64_t;

  [[nodiscard]] auto model() const -> TailModel<double> const & { return model_; }
  /// Probability mass beyond the table (zero for a bounded model).
  [[nodiscard]] auto residual_mass() const -> double { return residual_; }
  [[nodiscard]] auto table_end() const -> std::int64_t { return table_end_; }

private:
  TailModel<double>   model_;
  std::vector<double> survival_; // survival_[i] = P(N > n_l + i)
  std::int64_t        table_end_;
  double              residual_;
};

auto sample_power_law(TailModel<double> const &model, std::int64_t count, std::uint64_t seed)
  -> std::vector<std::int64_t>;

struct SyntheticSpec
{
  TailModel<double>                    model = TailModel<double>::unbounded(1.3, 10);
  double                               mean_events_per_year = 93.0;
  double                               years = 6.0;
  std::uint64_t                        seed = 1;
  int                                  start_year = 2011;
  std::optional<std::array<double, 12>> seasonal_weights; // relative event rate per calendar month
  std::optional<std::array<double, 3>>  cause_mix;        // P(tree), P(weather), P(other)
  std::set<unsigned>                   summer_months = kDefaultSummerMonths;

  void validate() const;
};

/// Reads a synthetic spec document:
/// {"alpha": 1.3, "n_l": 10, "n_max": 5000 | null, "mean_events_per_year": 93, "years": 6,
///  "seed": 1, "start_year": 2011, "seasonal_weights": [12 numbers],
///  "cause_mix": {"tree": p, "weather": p, "other": p}, "summer_months": [6, 7, 8, 9]}
/// Only "alpha", "mean_events_per_year" and "years" are required.
auto synthetic_spec_from_json(nlohmann::json const &j) -> SyntheticSpec;

/// Catalog of large events: Poisson(mean_events_per_year * years) events, power-law sizes,
/// start times uniform over the period (thinned by seasonal weights), causes drawn from
/// cause_mix (all `other` when absent). Event duration is one hour per unit of ceil(ln N).
auto synth_catalog(SyntheticSpec const &spec) -> EventCatalog;
/// Same, drawing sizes from a prebuilt sampler (whose model replaces spec.model).
auto synth_catalog(SyntheticSpec const &spec, PowerLawSampler const &sampler) -> EventCatalog;

/// Sample RSE of a metric across trials with a jackknife error bar on the RSE itself.
struct RseEstimate
{
  double mean{};
  double std_dev{};
  double rse{};
  double rse_error{};
};

struct MonteCarloResult
{
  std::int64_t trials{};
  std::int64_t empty_trials{}; // trials that drew zero events; excluded from ALENO
  RseEstimate  lenori;
  RseEstimate  aleno;
  RseEstimate  lennolog;
};

/// Sample RSE (and its jackknife error) of a set of trial values.
auto rse_estimate(Eigen::Ref<Eigen::ArrayXd const> const &values) -> RseEstimate;

/// Repeats the spec's count + size draws `trials` times (trial t seeded by derive_seed(seed, t))
/// and measures the spread of LENORI, ALENO and LENnolog. Requires trials >= 1000.
auto monte_carlo_rse(SyntheticSpec const &spec, std::int64_t trials) -> MonteCarloResult;

struct ValidationCheck
{
  std::string name;
  double      empirical{};
  double      analytic{};
  double      tolerance{}; // relative
  bool        passed{};
};

struct ValidationConfig
{
  double        alpha = 1.3;
  std::int64_t  n_l = 10;
  std::int64_t  n_max = 5000;
  double        mean_large_events = 558.0; // Poisson mean of the large-event count
  std::int64_t  trials = 10'000;
  std::uint64_t seed = 20240601;
};

/// Monte Carlo checks of the analytic accuracy formulas: RSE_LEN and RSE_ALE (unbounded law,
/// 5%), RSE_LENnolog (bounded law, 10%) and the extra data LENnolog needs for the same accuracy
/// (ratio of required large events >= 4).
auto run_validation_suite(ValidationConfig const &config) -> std::vector<ValidationCheck>;

} // namespace lenori
