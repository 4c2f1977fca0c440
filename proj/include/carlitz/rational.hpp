#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "carlitz/errors.hpp"

namespace carlitz {

namespace detail {

using i128 = __int128;

inline std::int64_t checked_narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ParameterError("exponent arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

inline i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Exact rational number num/den, den > 0, gcd(num, den) = 1.
///
/// Exponents of the perfected series live in Z[1/q]; every operation the
/// library performs on exponents (sums, scaling by q^e) keeps denominators
/// q-powers, so this reduced form is canonical for them. The same type also
/// carries valuation bounds whose denominators are q-1.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  /// num / q^dexp.
  static Rational q_adic(std::int64_t num, int dexp, std::int64_t q) {
    detail::i128 d = 1;
    for (int i = 0; i < dexp; ++i) d *= q;
    return Rational(num, detail::checked_narrow(d));
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }

  /// Smallest k with den | q^k, or -1 when den is not a q-power divisor.
  int q_dexp(std::int64_t q) const {
    std::int64_t d = den_;
    detail::i128 pw = 1;
    for (int k = 0; k < 64; ++k) {
      if (pw % d == 0) return k;
      pw *= q;
      if (pw > (detail::i128(1) << 100)) break;
    }
    return -1;
  }

  std::int64_t floor() const { return static_cast<std::int64_t>(detail::floor_div(num_, den_)); }
  std::int64_t ceil() const { return -static_cast<std::int64_t>(detail::floor_div(-num_, den_)); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(detail::i128(a.num_) + b.num_, a.den_);
    return from_wide(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                     detail::i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ParameterError("rational division by zero");
    return from_wide(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    detail::i128 l = detail::i128(a.num_) * b.den_;
    detail::i128 r = detail::i128(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  static Rational from_wide(detail::i128 n, detail::i128 d) {
    if (d < 0) n = -n, d = -d;
    detail::i128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      detail::i128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) n /= a, d /= a;
    Rational r;
    r.num_ = detail::checked_narrow(n);
    r.den_ = detail::checked_narrow(d);
    return r;
  }
  void assign(std::int64_t n, std::int64_t d) {
    if (d == 0) throw ParameterError("rational with zero denominator");
    *this = from_wide(n, d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Exponents of the perfection: elements of Z[1/q].
using QExponent = Rational;

/// q^e as a rational (e may be negative).
inline Rational q_power(std::int64_t q, int e) {
  detail::i128 v = 1;
  int k = e < 0 ? -e : e;
  for (int i = 0; i < k; ++i) {
    v *= q;
    if (v > INT64_MAX) throw ParameterError("q-power overflow");
  }
  return e < 0 ? Rational(1, static_cast<std::int64_t>(v)) : Rational(static_cast<std::int64_t>(v));
}

}  // namespace carlitz
