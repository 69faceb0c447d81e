#pragma once

#include "lenori/error.hpp"
#include "lenori/taylor.hpp"
#include "lenori/zeta.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>

namespace lenori {

/// Idealized discrete power law for large-event sizes:
/// f(n) = n^{-(alpha+1)} / zeta(alpha+1, n_l) for n >= n_l, optionally truncated at n_max.
template <std::floating_point Scalar = double> struct TailModel
{
  Scalar                      alpha{1.3};
  std::int64_t                n_l{10};
  std::optional<std::int64_t> n_max;

  static auto unbounded(Scalar alpha, std::int64_t n_l) -> TailModel
  {
    TailModel m{alpha, n_l, std::nullopt};
    m.validate();
    return m;
  }

  static auto bounded(Scalar alpha, std::int64_t n_l, std::int64_t n_max) -> TailModel
  {
    TailModel m{alpha, n_l, n_max};
    m.validate();
    return m;
  }

  void validate() const
  {
    if (!(alpha > 0)) throw NumericError("tail index must be positive");
    if (n_l < 2) throw NumericError("large-event threshold must be at least 2");
    if (n_max && *n_max < n_l) throw NumericError("n_max must not be below the threshold");
  }

  [[nodiscard]] auto exponent() const -> Scalar { return alpha + Scalar(1); }
  [[nodiscard]] auto b() const -> Scalar { return std::log(static_cast<Scalar>(n_l) - Scalar(0.5)); }
  [[nodiscard]] auto without_bound() const -> TailModel { return {alpha, n_l, std::nullopt}; }
};

/// Normalizer zeta(alpha+1, n_l) of the unbounded law.
template <std::floating_point Scalar> auto tail_normalizer(TailModel<Scalar> const &m) -> Scalar
{
  return hurwitz_zeta(m.exponent(), static_cast<double>(m.n_l));
}

/// Renormalization constant c = 1 - zeta(alpha+1, n_max+1)/zeta(alpha+1, n_l); 1 when unbounded.
template <std::floating_point Scalar> auto renormalization(TailModel<Scalar> const &m) -> Scalar
{
  if (!m.n_max) return Scalar(1);
  return Scalar(1) - hurwitz_zeta(m.exponent(), static_cast<double>(*m.n_max + 1)) / tail_normalizer(m);
}

template <std::floating_point Scalar> auto pmf_power_law(TailModel<Scalar> const &m, std::int64_t n) -> Scalar
{
  if (n < m.n_l) throw NumericError("pmf evaluated below the large-event threshold");
  if (m.n_max && n > *m.n_max) return Scalar(0);
  auto const raw = std::pow(static_cast<Scalar>(n), -m.exponent()) / tail_normalizer(m);
  return m.n_max ? raw / renormalization(m) : raw;
}

/// Moments of X = ln N under the tail model, together with the shift b = ln(n_l - 0.5).
template <std::floating_point Scalar = double> struct LogMoments
{
  Scalar mean{};    // E[X]
  Scalar mean_sq{}; // E[X^2]
  Scalar b{};

  [[nodiscard]] auto shifted_mean() const -> Scalar { return mean - b; } // E[X] - b
  [[nodiscard]] auto shifted_second() const -> Scalar { return mean_sq - Scalar(2) * b * mean + b * b; }
  [[nodiscard]] auto variance() const -> Scalar
  {
    auto const v = mean_sq - mean * mean;
    return v > 0 ? v : Scalar(0);
  }
};

/// E[X] and E[X^2] for X = ln N.
///
/// sum (ln n)^k n^{-s} over n >= n_l are the s-derivatives of zeta(s, n_l), obtained in one
/// Euler-Maclaurin evaluation with Taylor2 arithmetic. A bounded model subtracts the same
/// quantities at n_max + 1.
template <std::floating_point Scalar> auto log_moments(TailModel<Scalar> const &m) -> LogMoments<Scalar>
{
  using Jet = Taylor2<Scalar>;
  auto const s = Jet::variable(m.exponent());
  Jet z = hurwitz_zeta(s, static_cast<double>(m.n_l));
  if (m.n_max) z -= hurwitz_zeta(s, static_cast<double>(*m.n_max + 1));
  // d/ds n^{-s} = -ln n n^{-s}
  return {-z.d1 / z.v, z.d2 / z.v, m.b()};
}

template <std::floating_point Scalar> auto log_moment(TailModel<Scalar> const &m, int k) -> Scalar
{
  if (k != 1 && k != 2) throw NumericError("log_moment supports k = 1 or 2");
  auto const lm = log_moments(m);
  return k == 1 ? lm.mean : lm.mean_sq;
}

/// Sample moments of ln N_i; the alternative to the model moments when feeding the RSE formulas.
template <typename Range> auto empirical_log_moments(Range const &sizes, std::int64_t n_l) -> LogMoments<double>
{
  double s1 = 0.0;
  double s2 = 0.0;
  std::int64_t count = 0;
  for (auto const n : sizes) {
    double const x = std::log(static_cast<double>(n));
    s1 += x;
    s2 += x * x;
    ++count;
  }
  if (count == 0) throw DataError("no large events");
  double const inv = 1.0 / static_cast<double>(count);
  return {s1 * inv, s2 * inv, std::log(static_cast<double>(n_l) - 0.5)};
}

/// E[N^k] of the unbounded law; nullopt when it diverges (alpha <= k).
template <std::floating_point Scalar>
auto raw_moment(TailModel<Scalar> const &m, int k) -> std::optional<Scalar>
{
  if (k != 1 && k != 2) throw NumericError("raw_moment supports k = 1 or 2");
  if (m.alpha <= static_cast<Scalar>(k)) return std::nullopt;
  auto const base = m.without_bound();
  return hurwitz_zeta(base.exponent() - static_cast<Scalar>(k), static_cast<double>(m.n_l)) / tail_normalizer(base);
}

template <std::floating_point Scalar = double> struct BoundedMoments
{
  Scalar mean{};    // E[Pb]
  Scalar mean_sq{}; // E[Pb^2]
  Scalar c{};       // renormalization constant
  Scalar rse{};     // RSE_Pb
};

template <std::floating_point Scalar> auto bounded_moments(TailModel<Scalar> const &m) -> BoundedMoments<Scalar>
{
  if (!m.n_max) throw NumericError("bounded_moments requires n_max");
  auto const s = static_cast<double>(m.exponent());
  auto const c = renormalization(m);
  auto const norm = c * tail_normalizer(m.without_bound());
  auto const e1 = static_cast<Scalar>(power_sum(s - 1.0, m.n_l, *m.n_max)) / norm;
  auto const e2 = static_cast<Scalar>(power_sum(s - 2.0, m.n_l, *m.n_max)) / norm;
  auto const var = e2 - e1 * e1;
  // single-point support leaves only rounding noise
  auto const rse = (*m.n_max == m.n_l || !(var > 0)) ? Scalar(0) : std::sqrt(var) / e1;
  return {e1, e2, c, rse};
}

/// Relative standard error of LENORI under Poisson event counts with mean n_large:
/// sqrt(E[(X-b)^2]) / ((E[X]-b) sqrt(n_large)).
template <std::floating_point Scalar> auto rse_lenori(LogMoments<Scalar> const &lm, double n_large) -> Scalar
{
  if (!(n_large > 0)) throw NumericError("n_large must be positive");
  return std::sqrt(lm.shifted_second()) / (lm.shifted_mean() * std::sqrt(static_cast<Scalar>(n_large)));
}

/// sigma(X) / ((E[X]-b) sqrt(n_large)).
template <std::floating_point Scalar> auto rse_aleno(LogMoments<Scalar> const &lm, double n_large) -> Scalar
{
  if (!(n_large > 0)) throw NumericError("n_large must be positive");
  return std::sqrt(lm.variance()) / (lm.shifted_mean() * std::sqrt(static_cast<Scalar>(n_large)));
}

template <std::floating_point Scalar> auto rse_lenori(TailModel<Scalar> const &m, double n_large) -> Scalar
{
  return rse_lenori(log_moments(m), n_large);
}

template <std::floating_point Scalar> auto rse_aleno(TailModel<Scalar> const &m, double n_large) -> Scalar
{
  return rse_aleno(log_moments(m), n_large);
}

/// Large events needed so that RSE_LEN <= rse_max.
template <std::floating_point Scalar> auto min_large_events(LogMoments<Scalar> const &lm, double rse_max) -> Scalar
{
  if (!(rse_max > 0)) throw NumericError("rse_max must be positive");
  auto const mu = lm.shifted_mean();
  return lm.shifted_second() / (mu * mu * static_cast<Scalar>(rse_max * rse_max));
}

template <std::floating_point Scalar> auto min_large_events(TailModel<Scalar> const &m, double rse_max) -> Scalar
{
  return min_large_events(log_moments(m), rse_max);
}

/// Years of observation needed to collect n_large_min large events; nullopt when no large events
/// occur at all (insufficient event frequency).
inline auto min_years(double n_large_min, double f_large_all) -> std::optional<double>
{
  if (!(f_large_all > 0)) return std::nullopt;
  return n_large_min / f_large_all;
}

/// RSE of the index without logarithm: sqrt(1 + RSE_Pb^2) / sqrt(n_large).
inline auto rse_lennolog(double rse_pb, double n_large) -> double
{
  if (!(n_large > 0)) throw NumericError("n_large must be positive");
  return std::sqrt(1.0 + rse_pb * rse_pb) / std::sqrt(n_large);
}

inline auto min_large_nolog(double rse_pb, double rse_max) -> double
{
  if (!(rse_max > 0)) throw NumericError("rse_max must be positive");
  return (1.0 + rse_pb * rse_pb) / (rse_max * rse_max);
}

/// Every analytic accuracy figure for one tail model and observed large-event count.
struct RseReport
{
  double rse_ale{};
  double rse_len{};
  double rse_pb{};
  double rse_lennolog{};
  double n_large_min{};
  std::optional<double> n_year_min;
  double n_large_minnolog{};
  std::optional<double> n_year_minnolog;
  double c{};
};

/// `model` must be bounded (n_max set); the log moments come from `moments` when given and from
/// the unbounded model otherwise.
inline auto rse_report(TailModel<double> const &model,
                       double n_large,
                       double f_large_all,
                       double rse_max,
                       std::optional<LogMoments<double>> const &moments = std::nullopt) -> RseReport
{
  auto const lm = moments ? *moments : log_moments(model.without_bound());
  auto const bm = bounded_moments(model);
  RseReport r;
  r.rse_ale = rse_aleno(lm, n_large);
  r.rse_len = rse_lenori(lm, n_large);
  r.rse_pb = bm.rse;
  r.rse_lennolog = rse_lennolog(bm.rse, n_large);
  r.n_large_min = min_large_events(lm, rse_max);
  r.n_year_min = min_years(r.n_large_min, f_large_all);
  r.n_large_minnolog = min_large_nolog(bm.rse, rse_max);
  r.n_year_minnolog = min_years(r.n_large_minnolog, f_large_all);
  r.c = bm.c;
  return r;
}

} // namespace lenori
