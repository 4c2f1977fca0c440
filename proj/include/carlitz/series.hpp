#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/field.hpp"
#include "carlitz/rational.hpp"

namespace carlitz {

struct Term {
  QExponent exp;
  Field::Code coef;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Result of a valuation query. `AtLeast` marks a series whose known part is
/// zero: its valuation is only bounded below by its precision.
struct Valuation {
  enum class Kind { Finite, Infinite, AtLeast };
  Kind kind = Kind::Infinite;
  QExponent value;

  bool finite() const noexcept { return kind == Kind::Finite; }
  bool infinite() const noexcept { return kind == Kind::Infinite; }
  bool at_least() const noexcept { return kind == Kind::AtLeast; }
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// A truncated generalized Laurent series Σ ξ_e x^e, e ∈ Z[1/q], with an
/// exclusive precision bound: every coefficient at an exponent below
/// `precision()` is known exactly, nothing above it is. No precision means the
/// series is an exact perfected Laurent polynomial.
///
/// Precision bookkeeping:
///   add:       prec = min(prec_a, prec_b)
///   mul:       prec = min(prec_a + val_b, prec_b + val_a)
///   invert:    relative precision R = min(prec_a - val_a, W) where W is the
///              field's working precision (W alone for exact input);
///              prec = -val_a + R, i.e. prec_a - 2 val_a when uncapped.
///              Exact monomials invert exactly.
///   frobenius: prec scaled by q^e.
class PerfSeries {
 public:
  explicit PerfSeries(FieldPtr f) : field_(std::move(f)) {}

  static PerfSeries zero(FieldPtr f) { return PerfSeries(std::move(f)); }
  static PerfSeries big_oh(FieldPtr f, QExponent prec) {
    PerfSeries s(std::move(f));
    s.prec_ = prec;
    return s;
  }
  static PerfSeries monomial(FieldPtr f, QExponent e, Field::Code c = 1) {
    PerfSeries s(std::move(f));
    if (c != 0) s.terms_.push_back({e, c});
    return s;
  }
  static PerfSeries constant(FieldPtr f, Field::Code c) { return monomial(std::move(f), QExponent(0), c); }
  static PerfSeries from_int(FieldPtr f, std::int64_t n) {
    auto c = f->from_int(n);
    return constant(std::move(f), c);
  }
  static PerfSeries one(FieldPtr f) { return constant(std::move(f), 1); }
  static PerfSeries x(FieldPtr f) { return monomial(std::move(f), QExponent(1)); }

  /// Builds a series from arbitrary terms: sorts, merges equal exponents,
  /// drops zeros and everything at or above `prec`.
  static PerfSeries from_terms(FieldPtr f, std::vector<Term> terms,
                               std::optional<QExponent> prec = std::nullopt) {
    PerfSeries s(std::move(f));
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    for (auto& t : terms) {
      if (prec && !(t.exp < *prec)) break;
      if (!s.terms_.empty() && s.terms_.back().exp == t.exp) {
        s.terms_.back().coef = s.field_->add(s.terms_.back().coef, t.coef);
        if (s.terms_.back().coef == 0) s.terms_.pop_back();
      } else if (t.coef != 0) {
        s.terms_.push_back(t);
      }
    }
    s.prec_ = prec;
    return s;
  }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::optional<QExponent>& precision() const noexcept { return prec_; }
  bool is_exact() const noexcept { return !prec_.has_value(); }
  bool is_exact_zero() const noexcept { return terms_.empty() && !prec_; }
  /// True when no nonzero coefficient is known (exact zero or O(x^k)).
  bool is_zero_at_precision() const noexcept { return terms_.empty(); }

  Valuation valuation() const {
    if (!terms_.empty()) return {Valuation::Kind::Finite, terms_.front().exp};
    if (prec_) return {Valuation::Kind::AtLeast, *prec_};
    return {Valuation::Kind::Infinite, QExponent(0)};
  }

  /// Coefficient at exponent e; PrecisionError if e is at or above precision.
  Field::Code coefficient(const QExponent& e) const {
    if (prec_ && !(e < *prec_)) throw PrecisionError("coefficient at x^" + e.to_string() + " is unknown");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const QExponent& v) { return t.exp < v; });
    return (it != terms_.end() && it->exp == e) ? it->coef : 0;
  }

  /// Lowers the precision to min(current, p).
  PerfSeries truncated(const QExponent& p) const {
    if (prec_ && !(p < *prec_)) return *this;
    PerfSeries s(field_);
    for (const auto& t : terms_) {
      if (!(t.exp < p)) break;
      s.terms_.push_back(t);
    }
    s.prec_ = p;
    return s;
  }
  /// Keeps `rel` units of precision past the valuation.
  PerfSeries truncated_relative(const QExponent& rel) const {
    if (terms_.empty()) return *this;
    return truncated(terms_.front().exp + rel);
  }

  friend PerfSeries operator+(const PerfSeries& a, const PerfSeries& b) { return a.combine(b, false); }
  friend PerfSeries operator-(const PerfSeries& a, const PerfSeries& b) { return a.combine(b, true); }
  friend PerfSeries operator-(const PerfSeries& a) {
    PerfSeries s = a;
    for (auto& t : s.terms_) t.coef = a.field_->neg(t.coef);
    return s;
  }
  PerfSeries& operator+=(const PerfSeries& o) { return *this = *this + o; }
  PerfSeries& operator-=(const PerfSeries& o) { return *this = *this - o; }

  PerfSeries scaled(Field::Code c) const {
    if (c == 0) return zero(field_);
    PerfSeries s = *this;
    for (auto& t : s.terms_) t.coef = field_->mul(t.coef, c);
    return s;
  }

  friend PerfSeries operator*(const PerfSeries& a, const PerfSeries& b) { return a.multiply(b); }
  PerfSeries& operator*=(const PerfSeries& o) { return *this = *this * o; }

  /// τ^e: exponents times q^e, coefficients through the e-th Frobenius power
  /// of the coefficient field (its inverse for e < 0).
  PerfSeries frobenius(int e) const {
    if (e == 0) return *this;
    const QExponent k = q_power(field_->q(), e);
    PerfSeries s(field_);
    s.terms_.reserve(terms_.size());
    for (const auto& t : terms_) s.terms_.push_back({t.exp * k, field_->frobenius(t.coef, e)});
    if (prec_) s.prec_ = *prec_ * k;
    return s;
  }

  PerfSeries inverse() const {
    if (terms_.empty()) throw PrecisionError("not invertible at this precision");
    const QExponent v = terms_.front().exp;
    const Field::Code c0inv = field_->inv(terms_.front().coef);
    if (terms_.size() == 1 && !prec_) return monomial(field_, -v, c0inv);
    QExponent rel = field_->working_precision();
    if (prec_ && *prec_ - v < rel) rel = *prec_ - v;

    // Unit part u(y) = Σ u_k y^k with y = x^(1/L), u_0 = 1.
    std::int64_t L = rel.den();
    for (const auto& t : terms_) L = std::lcm(L, (t.exp - v).den());
    const std::int64_t n = (rel * QExponent(L)).ceil();
    std::vector<std::pair<std::int64_t, Field::Code>> u;
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      std::int64_t k = ((terms_[i].exp - v) * QExponent(L)).num();
      if (k >= n) break;
      u.emplace_back(k, field_->mul(terms_[i].coef, c0inv));
    }
    std::vector<Field::Code> w(static_cast<std::size_t>(n), 0);
    w[0] = 1;
    for (std::int64_t k = 1; k < n; ++k) {
      Field::Code acc = 0;
      for (const auto& [j, uj] : u) {
        if (j > k) break;
        if (w[k - j] != 0) acc = field_->add(acc, field_->mul(uj, w[k - j]));
      }
      w[k] = field_->neg(acc);
    }
    PerfSeries s(field_);
    for (std::int64_t k = 0; k < n; ++k)
      if (w[k] != 0) s.terms_.push_back({-v + QExponent(k, L), field_->mul(w[k], c0inv)});
    s.prec_ = -v + rel;
    return s;
  }

  PerfSeries pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    PerfSeries result = one(field_);
    PerfSeries base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Equality up to the smaller of the two precisions.
  bool equals_at_precision(const PerfSeries& o) const { return (*this - o).is_zero_at_precision(); }
  friend bool operator==(const PerfSeries& a, const PerfSeries& b) { return a.equals_at_precision(b); }
  /// Structural identity: same terms and same precision.
  bool identical(const PerfSeries& o) const {
    return field_->compatible(*o.field_) && terms_ == o.terms_ && prec_ == o.prec_;
  }

  /// Lowest known exponent, or the precision when the known part is zero.
  /// Undefined (returns 0) for the exact zero.
  QExponent lower_valuation() const {
    if (!terms_.empty()) return terms_.front().exp;
    return prec_ ? *prec_ : QExponent(0);
  }

  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const PerfSeries& s) { return os << s.to_string(); }

 private:
  void check(const PerfSeries& o) const {
    if (!field_->compatible(*o.field_)) throw ParameterError("mismatched field parameters");
  }

  PerfSeries combine(const PerfSeries& b, bool negate) const {
    check(b);
    std::optional<QExponent> prec = prec_;
    if (b.prec_ && (!prec || *b.prec_ < *prec)) prec = b.prec_;
    PerfSeries s(field_);
    s.prec_ = prec;
    s.terms_.reserve(terms_.size() + b.terms_.size());
    auto below = [&](const QExponent& e) { return !prec || e < *prec; };
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < terms_.size() && terms_[i].exp < b.terms_[j].exp)) {
        if (!below(terms_[i].exp)) break;
        s.terms_.push_back(terms_[i++]);
      } else {
        const Term& tb = b.terms_[j];
        Field::Code cb = negate ? field_->neg(tb.coef) : tb.coef;
        if (i < terms_.size() && terms_[i].exp == tb.exp) {
          if (!below(tb.exp)) break;
          Field::Code c = field_->add(terms_[i].coef, cb);
          if (c != 0) s.terms_.push_back({tb.exp, c});
          ++i, ++j;
        } else {
          if (!below(tb.exp)) break;
          s.terms_.push_back({tb.exp, cb});
          ++j;
        }
      }
    }
    return s;
  }

  PerfSeries multiply(const PerfSeries& b) const {
    check(b);
    const PerfSeries& a = *this;
    if (a.is_exact_zero() || b.is_exact_zero()) return zero(field_);
    std::optional<QExponent> cutoff;
    if (a.prec_) cutoff = *a.prec_ + b.lower_valuation();
    if (b.prec_) {
      QExponent c = *b.prec_ + a.lower_valuation();
      if (!cutoff || c < *cutoff) cutoff = c;
    }
    PerfSeries s(field_);
    s.prec_ = cutoff;
    if (a.terms_.empty() || b.terms_.empty()) return s;

    std::int64_t L = 1;
    for (const auto& t : a.terms_) L = std::lcm(L, t.exp.den());
    for (const auto& t : b.terms_) L = std::lcm(L, t.exp.den());
    auto scale = [L](const QExponent& e) { return (e * QExponent(L)).num(); };
    std::vector<std::int64_t> ea, eb;
    ea.reserve(a.terms_.size());
    eb.reserve(b.terms_.size());
    for (const auto& t : a.terms_) ea.push_back(scale(t.exp));
    for (const auto& t : b.terms_) eb.push_back(scale(t.exp));
    std::int64_t limit = INT64_MAX;
    if (cutoff) limit = (*cutoff * QExponent(L)).ceil();  // keep sums < limit
    const std::int64_t lo = ea.front() + eb.front();
    if (lo >= limit) return s;
    const std::int64_t hi = std::min<std::int64_t>(ea.back() + eb.back(), limit - 1);
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t pairs = std::uint64_t(ea.size()) * eb.size();

    if (span <= std::max<std::uint64_t>(pairs * 4, 1u << 16) && span <= (1u << 26)) {
      std::vector<Field::Code> acc(span, 0);
      for (std::size_t i = 0; i < ea.size(); ++i) {
        const Field::Code ca = a.terms_[i].coef;
        for (std::size_t j = 0; j < eb.size(); ++j) {
          const std::int64_t e = ea[i] + eb[j];
          if (e >= limit) break;
          auto& slot = acc[e - lo];
          slot = field_->add(slot, field_->mul(ca, b.terms_[j].coef));
        }
      }
      for (std::uint64_t k = 0; k < span; ++k)
        if (acc[k] != 0) s.terms_.push_back({QExponent(lo + std::int64_t(k), L), acc[k]});
    } else {
      std::unordered_map<std::int64_t, Field::Code> acc;
      acc.reserve(std::min<std::uint64_t>(pairs, 1u << 20));
      for (std::size_t i = 0; i < ea.size(); ++i) {
        const Field::Code ca = a.terms_[i].coef;
        for (std::size_t j = 0; j < eb.size(); ++j) {
          const std::int64_t e = ea[i] + eb[j];
          if (e >= limit) break;
          auto& slot = acc[e];
          slot = field_->add(slot, field_->mul(ca, b.terms_[j].coef));
        }
      }
      std::vector<std::pair<std::int64_t, Field::Code>> v(acc.begin(), acc.end());
      std::sort(v.begin(), v.end());
      for (const auto& [e, c] : v)
        if (c != 0) s.terms_.push_back({QExponent(e, L), c});
    }
    return s;
  }

  FieldPtr field_;
  std::vector<Term> terms_;
  std::optional<QExponent> prec_;
};

namespace detail {

inline std::string format_exponent(const QExponent& e) {
  if (e.is_integer() && e.num() >= 0) return std::to_string(e.num());
  return "(" + e.to_string() + ")";
}

inline std::string format_coefficient(const Field& f, Field::Code c) {
  if (f.in_prime_field(c)) return std::to_string(c);
  std::uint32_t j = f.log(c);
  return j == 1 ? std::string("g") : "g^" + std::to_string(j);
}

inline std::string format_x_power(const QExponent& e) {
  if (e == QExponent(1)) return "x";
  return "x^" + format_exponent(e);
}

}  // namespace detail

/// Canonical text form: ascending exponents, no zero terms, `c*x^e` joined by
/// " + ", optional " + O(x^e)" precision suffix; "0" for the exact zero.
inline std::string PerfSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    const bool unit = t.coef == 1;
    if (t.exp == QExponent(0)) {
      os << detail::format_coefficient(*field_, t.coef);
    } else {
      if (!unit) os << detail::format_coefficient(*field_, t.coef) << "*";
      os << detail::format_x_power(t.exp);
    }
  }
  if (prec_) {
    if (!first) os << " + ";
    first = false;
    os << "O(" << detail::format_x_power(*prec_) << ")";
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace carlitz
