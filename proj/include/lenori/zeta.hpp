#pragma once

#include "lenori/error.hpp"
#include "lenori/taylor.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace lenori {

namespace detail {

/// B_{2j} / (2j)! for j = 1..13.
inline constexpr std::array<double, 13> kBernoulliOverFactorial{
  1.0 / 12.0,
  -1.0 / 720.0,
  1.0 / 30240.0,
  -1.0 / 1209600.0,
  1.0 / 47900160.0,
  -691.0 / 1307674368000.0,
  1.0 / 74724249600.0,
  -3617.0 / 10670622842880000.0,
  43867.0 / 5109094217170944000.0,
  -174611.0 / 802857662698291200000.0,
  77683.0 / 14101100039391805440000.0,
  -236364091.0 / 1693824136731743669452800000.0,
  657931.0 / 186134520519971831808000000.0,
};

template <typename S> auto pow_neg(double x, S const &s) -> S
{
  using std::exp;
  using std::log;
  if constexpr (std::is_arithmetic_v<S>) {
    return std::pow(static_cast<S>(x), -s);
  } else {
    return exp(-s * S(static_cast<decltype(value_of(s))>(log(x))));
  }
}

/// phi(z) = expm1(z) / z, continuous at 0.
inline auto expm1_ratio(double z) -> double
{
  return std::abs(z) < 1e-8 ? 1.0 + 0.5 * z : std::expm1(z) / z;
}

} // namespace detail

/// Hurwitz zeta function sum_{n>=0} (a + n)^{-s} for s > 1, a > 0.
///
/// Direct summation up to x = a + N >= 16 + |s|, then the Euler-Maclaurin tail
/// x^{1-s}/(s-1) + x^{-s}/2 + sum_j B_2j/(2j)! (s)_{2j-1} x^{-s-2j+1}.
/// With that switch-over the correction terms fall geometrically and the remainder after the
/// last retained term is below 1e-16 relative for every s in the supported range.
///
/// S may be a floating-point type or Taylor2<floating-point>; in the latter case the derivatives
/// with respect to s are carried through, giving -sum ln(a+n) (a+n)^{-s} and
/// sum ln^2(a+n) (a+n)^{-s} in d1 and d2.
template <typename S> auto hurwitz_zeta(S const &s, double a) -> S
{
  using std::log;
  auto const sv = static_cast<double>(value_of(s));
  if (!(sv > 1.0)) throw NumericError("hurwitz_zeta requires s > 1");
  if (!(a > 0.0)) throw NumericError("hurwitz_zeta requires a > 0");

  double const x_min = 16.0 + std::abs(sv);
  auto const direct = a < x_min ? static_cast<std::int64_t>(std::ceil(x_min - a)) : std::int64_t{0};
  double const x = a + static_cast<double>(direct);

  // Largest terms last would lose precision; accumulate from the far end.
  S sum(0);
  for (std::int64_t n = direct - 1; n >= 0; --n) sum += detail::pow_neg(a + static_cast<double>(n), s);

  S const x_pow = detail::pow_neg(x, s); // x^{-s}
  S const one(1);
  S tail = x_pow * S(x) / (s - one) + x_pow * S(0.5);
  // rising factorial (s)_{2j-1} times x^{-s-2j+1}
  S rising = s;
  S term_pow = x_pow / S(x);
  double const x2 = x * x;
  for (std::size_t j = 0; j < detail::kBernoulliOverFactorial.size(); ++j) {
    S const term = S(detail::kBernoulliOverFactorial[j]) * rising * term_pow;
    tail += term;
    if (std::abs(value_of(term)) < 1e-18 * std::abs(value_of(tail))) break;
    double const k = static_cast<double>(2 * j + 1);
    rising = rising * (s + S(k)) * (s + S(k + 1.0));
    term_pow = term_pow / S(x2);
  }
  return sum + tail;
}

/// sum_{n=lo}^{hi} n^{-p} for any real p and 1 <= lo <= hi.
///
/// Long ranges use direct summation over the first terms and Euler-Maclaurin on the rest.
inline auto power_sum(double p, std::int64_t lo, std::int64_t hi) -> double
{
  if (lo < 1) throw NumericError("power_sum requires lo >= 1");
  if (hi < lo) return 0.0;
  constexpr std::int64_t kDirectLimit = 1'000'000;
  if (hi - lo < kDirectLimit) {
    // Decreasing terms for p > 0: sum from the small end.
    double sum = 0.0;
    double comp = 0.0;
    auto add = [&](double t) {
      double const y = t - comp;
      double const s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    };
    if (p > 0) {
      for (std::int64_t n = hi; n >= lo; --n) add(std::pow(static_cast<double>(n), -p));
    } else {
      for (std::int64_t n = lo; n <= hi; ++n) add(std::pow(static_cast<double>(n), -p));
    }
    return sum;
  }

  auto const split = lo + static_cast<std::int64_t>(std::ceil(32.0 + std::abs(p)));
  double const head = power_sum(p, lo, split - 1);
  double const x = static_cast<double>(split);
  double const h = static_cast<double>(hi);
  double const log_ratio = std::log(h / x);
  // integral_x^h t^{-p} dt
  double const integral = std::pow(x, 1.0 - p) * log_ratio * detail::expm1_ratio((1.0 - p) * log_ratio);
  double tail = integral + 0.5 * (std::pow(x, -p) + std::pow(h, -p));
  double rising = p;
  double xp = std::pow(x, -p - 1.0);
  double hp = std::pow(h, -p - 1.0);
  for (std::size_t j = 0; j < detail::kBernoulliOverFactorial.size(); ++j) {
    // f^{(2j-1)}(t) = -(p)_{2j-1} t^{-p-2j+1}
    double const term = detail::kBernoulliOverFactorial[j] * rising * (xp - hp);
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(tail)) break;
    double const k = static_cast<double>(2 * j + 1);
    rising *= (p + k) * (p + k + 1.0);
    xp /= x * x;
    hp /= h * h;
  }
  return head + tail;
}

} // namespace lenori
