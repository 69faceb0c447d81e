#pragma once

#include <cmath>

namespace lenori {

/// Value together with its first and second derivative with respect to one variable.
/// Arithmetic propagates both derivatives, so any expression templated on the scalar type
/// yields f, f' and f'' in a single evaluation.
template <typename T> struct Taylor2
{
  T v{};
  T d1{};
  T d2{};

  constexpr Taylor2() = default;
  constexpr Taylor2(T value) // NOLINT(google-explicit-constructor)
    : v(value)
  {
  }
  constexpr Taylor2(T value, T first, T second)
    : v(value)
    , d1(first)
    , d2(second)
  {
  }

  static constexpr auto variable(T value) -> Taylor2 { return {value, T(1), T(0)}; }

  constexpr auto operator-() const -> Taylor2 { return {-v, -d1, -d2}; }
  constexpr auto operator+=(Taylor2 const &o) -> Taylor2 &
  {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  constexpr auto operator-=(Taylor2 const &o) -> Taylor2 & { return *this += -o; }
  constexpr auto operator*=(Taylor2 const &o) -> Taylor2 &
  {
    *this = *this * o;
    return *this;
  }
  constexpr auto operator/=(Taylor2 const &o) -> Taylor2 &
  {
    *this = *this / o;
    return *this;
  }

  friend constexpr auto operator+(Taylor2 a, Taylor2 const &b) -> Taylor2 { return a += b; }
  friend constexpr auto operator-(Taylor2 a, Taylor2 const &b) -> Taylor2 { return a -= b; }
  friend constexpr auto operator*(Taylor2 const &a, Taylor2 const &b) -> Taylor2
  {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
  }
  friend constexpr auto operator/(Taylor2 const &a, Taylor2 const &b) -> Taylor2
  {
    T const q = a.v / b.v;
    T const q1 = (a.d1 - q * b.d1) / b.v;
    T const q2 = (a.d2 - T(2) * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
  }
};

template <typename T> constexpr auto value_of(T const &x) -> T { return x; }
template <typename T> constexpr auto value_of(Taylor2<T> const &x) -> T { return x.v; }

template <typename T> auto exp(Taylor2<T> const &x) -> Taylor2<T>
{
  using std::exp;
  T const e = exp(x.v);
  return {e, e * x.d1, e * (x.d2 + x.d1 * x.d1)};
}

template <typename T> auto log(Taylor2<T> const &x) -> Taylor2<T>
{
  using std::log;
  return {log(x.v), x.d1 / x.v, x.d2 / x.v - (x.d1 * x.d1) / (x.v * x.v)};
}

template <typename T> auto sqrt(Taylor2<T> const &x) -> Taylor2<T>
{
  using std::sqrt;
  T const r = sqrt(x.v);
  T const r1 = x.d1 / (T(2) * r);
  return {r, r1, (x.d2 - T(2) * r1 * r1) / (T(2) * r)};
}

/// base^exponent for a positive constant base.
template <typename T, typename U> auto pow(U base, Taylor2<T> const &exponent) -> Taylor2<T>
{
  using std::log;
  return exp(exponent * Taylor2<T>(static_cast<T>(log(static_cast<T>(base)))));
}

} // namespace lenori
