#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/rational.hpp"

namespace carlitz {

/// Configuration of a coefficient field F_Q, Q = q^m, q = p^v, presented as
/// F_p[g]/(modulus). `modulus` is listed low degree first and is monic of
/// degree v*m. `working_precision` is the relative precision (in units of
/// the x-exponent) attached to inverses of exact series.
struct FieldParams {
  int p = 2;
  int v = 1;
  int m = 1;
  std::vector<int> modulus;
  Rational working_precision = Rational(48);

  std::int64_t q() const {
    std::int64_t r = 1;
    for (int i = 0; i < v; ++i) r *= p;
    return r;
  }
  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

namespace detail {

/// Dense polynomials over F_p, low degree first, used only while validating
/// a modulus and building tables.
struct PrimePoly {
  static void trim(std::vector<int>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  static int inv_mod(int a, int p) {
    int r = 1, e = p - 2, b = a % p;
    while (e > 0) {
      if (e & 1) r = static_cast<int>((std::int64_t(r) * b) % p);
      b = static_cast<int>((std::int64_t(b) * b) % p);
      e >>= 1;
    }
    return r;
  }
  static std::vector<int> mod(std::vector<int> a, const std::vector<int>& f, int p) {
    trim(a);
    const std::size_t df = f.size() - 1;
    const int lead_inv = inv_mod(f.back(), p);
    while (a.size() > df) {
      const int c = static_cast<int>((std::int64_t(a.back()) * lead_inv) % p);
      const std::size_t shift = a.size() - 1 - df;
      for (std::size_t i = 0; i <= df; ++i)
        a[shift + i] = static_cast<int>(((a[shift + i] - std::int64_t(c) * f[i]) % p + p) % p);
      trim(a);
    }
    return a;
  }
  static std::vector<int> mulmod(const std::vector<int>& a, const std::vector<int>& b,
                                 const std::vector<int>& f, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        r[i + j] = static_cast<int>((r[i + j] + std::int64_t(a[i]) * b[j]) % p);
    return mod(std::move(r), f, p);
  }
  static std::vector<int> gcd(std::vector<int> a, std::vector<int> b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
      auto r = mod(a, b, p);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }
  /// x^(p^k) mod f by repeated p-th powering.
  static std::vector<int> x_pow_p_pow(int k, const std::vector<int>& f, int p) {
    std::vector<int> r = mod({0, 1}, f, p);
    for (int i = 0; i < k; ++i) {
      std::vector<int> acc{1};
      std::vector<int> base = r;
      int e = p;
      while (e > 0) {
        if (e & 1) acc = mulmod(acc, base, f, p);
        base = mulmod(base, base, f, p);
        e >>= 1;
      }
      r = acc;
    }
    return r;
  }
  static std::vector<int> sub_x(std::vector<int> a, int p) {
    if (a.size() < 2) a.resize(2, 0);
    a[1] = (a[1] + p - 1) % p;
    trim(a);
    return a;
  }

  /// Rabin's irreducibility test.
  static bool irreducible(const std::vector<int>& f, int p) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return false;
    if (n == 1) return true;
    if (f[0] == 0) return false;
    if (!sub_x(x_pow_p_pow(n, f, p), p).empty()) return false;
    for (int r = 2; r <= n; ++r) {
      bool prime = true;
      for (int s = 2; s * s <= r; ++s)
        if (r % s == 0) prime = false;
      if (!prime || n % r != 0) continue;
      auto g = gcd(f, sub_x(x_pow_p_pow(n / r, f, p), p), p);
      if (g.size() != 1) return false;
    }
    return true;
  }
};

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// The coefficient field F_Q. Elements are integer codes: the base-p digits of
/// a code are the coefficients of the residue polynomial in g. Multiplication
/// goes through discrete-log tables over a fixed primitive element; the
/// shipped default moduli are primitive, so that element is the class of g.
class Field {
 public:
  using Code = std::uint32_t;

  static constexpr std::uint32_t kMaxOrder = 1u << 22;

  static FieldPtr make(FieldParams params) {
    return FieldPtr(new Field(std::move(params)));
  }

  /// Field for a prime power q with extension degree m, using the shipped
  /// modulus when one exists and the lexicographically first monic
  /// irreducible polynomial otherwise.
  static FieldPtr for_q(std::int64_t q, int m = 1, Rational working_precision = Rational(48)) {
    FieldParams fp;
    std::tie(fp.p, fp.v) = factor_prime_power(q);
    fp.m = m;
    fp.modulus = default_modulus(fp.p, fp.v * m);
    fp.working_precision = working_precision;
    return make(std::move(fp));
  }

  static std::pair<int, int> factor_prime_power(std::int64_t q) {
    if (q < 2) throw ParameterError("q must be a prime power >= 2");
    int p = 0;
    for (int d = 2; d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    int v = 0;
    std::int64_t r = q;
    while (r % p == 0) r /= p, ++v;
    if (r != 1) throw ParameterError("q = " + std::to_string(q) + " is not a prime power");
    return {p, v};
  }

  static std::vector<int> default_modulus(int p, int degree) {
    static const std::map<std::pair<int, int>, std::vector<int>> shipped = {
        {{2, 1}, {1, 1}},          {{2, 2}, {1, 1, 1}},          {{2, 3}, {1, 1, 0, 1}},
        {{2, 4}, {1, 1, 0, 0, 1}}, {{2, 6}, {1, 1, 0, 0, 0, 0, 1}}, {{3, 1}, {1, 1}},
        {{3, 2}, {2, 1, 1}},       {{3, 4}, {2, 1, 0, 0, 1}},    {{5, 1}, {3, 1}},
        {{5, 2}, {2, 1, 1}},
    };
    if (auto it = shipped.find({p, degree}); it != shipped.end()) return it->second;
    // Enumerate monic polynomials of the given degree in code order.
    std::vector<int> f(degree + 1, 0);
    f[degree] = 1;
    std::int64_t total = 1;
    for (int i = 0; i < degree; ++i) total *= p;
    for (std::int64_t c = 0; c < total; ++c) {
      std::int64_t r = c;
      for (int i = 0; i < degree; ++i) f[i] = static_cast<int>(r % p), r /= p;
      if (detail::PrimePoly::irreducible(f, p)) return f;
    }
    throw ParameterError("no irreducible polynomial found");
  }

  const FieldParams& params() const noexcept { return params_; }
  int p() const noexcept { return params_.p; }
  int v() const noexcept { return params_.v; }
  int m() const noexcept { return params_.m; }
  std::int64_t q() const noexcept { return q_; }
  std::uint32_t order() const noexcept { return order_; }
  int degree() const noexcept { return degree_; }
  const Rational& working_precision() const noexcept { return params_.working_precision; }

  bool compatible(const Field& o) const noexcept {
    return this == &o || (params_.p == o.params_.p && params_.v == o.params_.v &&
                          params_.m == o.params_.m && params_.modulus == o.params_.modulus);
  }

  Code zero() const noexcept { return 0; }
  Code one() const noexcept { return 1; }

  Code add(Code a, Code b) const {
    if (params_.p == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[std::size_t(a) * order_ + b];
    return digitwise(a, b, 1);
  }
  Code neg(Code a) const {
    if (params_.p == 2) return a;
    return digitwise(0, a, -1);
  }
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t e = std::uint64_t(log_[a]) + log_[b];
    if (e >= order_ - 1) e -= order_ - 1;
    return exp_[e];
  }
  Code inv(Code a) const {
    if (a == 0) throw PrecisionError("inverse of zero in the coefficient field");
    std::uint32_t e = log_[a] == 0 ? 0 : (order_ - 1) - log_[a];
    return exp_[e];
  }
  Code div(Code a, Code b) const { return mul(a, inv(b)); }

  /// a^e for any integer e (a must be nonzero when e < 0).
  Code pow(Code a, std::int64_t e) const {
    if (a == 0) {
      if (e < 0) throw PrecisionError("negative power of zero");
      return e == 0 ? 1 : 0;
    }
    const std::int64_t n = order_ - 1;
    std::int64_t r = ((std::int64_t(log_[a]) * (e % n)) % n + n) % n;
    return exp_[r];
  }

  /// ξ ↦ ξ^(q^e); for e < 0 the inverse automorphism.
  Code frobenius(Code a, int e) const {
    if (a == 0 || params_.m == 1) return a;
    const std::int64_t n = order_ - 1;
    // q has multiplicative inverse q^(m-1) modulo q^m - 1.
    std::int64_t step = e >= 0 ? q_ % n : qinv_mod_;
    int k = e >= 0 ? e : -e;
    std::int64_t l = log_[a];
    for (int i = 0; i < k; ++i) l = (l * step) % n;
    return exp_[l];
  }

  Code from_int(std::int64_t n) const {
    const std::int64_t p = params_.p;
    return static_cast<Code>(((n % p) + p) % p);
  }
  bool in_prime_field(Code a) const noexcept { return a < static_cast<Code>(params_.p); }

  Code generator() const noexcept { return generator_; }
  /// Discrete log base `generator()`; a must be nonzero.
  std::uint32_t log(Code a) const {
    if (a == 0) throw ParameterError("log of zero");
    return log_[a];
  }
  Code gen_pow(std::int64_t j) const {
    const std::int64_t n = order_ - 1;
    return exp_[((j % n) + n) % n];
  }

 private:
  explicit Field(FieldParams params) : params_(std::move(params)) {
    if (!detail::is_prime(params_.p)) throw ParameterError("p must be prime");
    if (params_.v < 1 || params_.m < 1) throw ParameterError("v and m must be positive");
    if (!(params_.working_precision > Rational(0)))
      throw ParameterError("working precision must be positive");
    degree_ = params_.v * params_.m;
    q_ = params_.q();
    if (params_.modulus.empty()) params_.modulus = default_modulus(params_.p, degree_);
    auto& f = params_.modulus;
    for (auto& c : f) c = ((c % params_.p) + params_.p) % params_.p;
    detail::PrimePoly::trim(f);
    if (static_cast<int>(f.size()) - 1 != degree_)
      throw ParameterError("modulus must have degree v*m = " + std::to_string(degree_));
    if (f.back() != 1) {
      const int li = detail::PrimePoly::inv_mod(f.back(), params_.p);
      for (auto& c : f) c = static_cast<int>((std::int64_t(c) * li) % params_.p);
    }
    // Roots in F_p rule out irreducibility quickly; Rabin's test decides the rest.
    if (degree_ > 1)
      for (int r = 0; r < params_.p; ++r) {
        std::int64_t acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * r + *it) % params_.p;
        if (acc == 0) throw ParameterError("modulus has a root in F_p");
      }
    if (!detail::PrimePoly::irreducible(f, params_.p)) throw ParameterError("modulus is reducible");

    std::uint64_t ord = 1;
    for (int i = 0; i < degree_; ++i) {
      ord *= params_.p;
      if (ord > kMaxOrder) throw ParameterError("coefficient field too large for table arithmetic");
    }
    order_ = static_cast<std::uint32_t>(ord);
    pw_.assign(degree_ + 1, 1);
    for (int i = 1; i <= degree_; ++i) pw_[i] = pw_[i - 1] * params_.p;
    if (params_.p != 2 && order_ <= 1024) {
      add_table_.resize(std::size_t(order_) * order_);
      for (Code a = 0; a < order_; ++a)
        for (Code b = 0; b < order_; ++b) add_table_[std::size_t(a) * order_ + b] = digitwise(a, b, 1);
    }
    build_log_tables();
    const std::int64_t n = order_ - 1;
    qinv_mod_ = n == 0 ? 0 : 1;
    for (int i = 0; i + 1 < params_.m; ++i) qinv_mod_ = (qinv_mod_ * (q_ % n)) % n;
  }

  Code digitwise(Code a, Code b, int sign) const {
    const std::uint32_t p = params_.p;
    Code r = 0;
    for (int i = 0; i < degree_; ++i) {
      int da = static_cast<int>((a / pw_[i]) % p);
      int db = static_cast<int>((b / pw_[i]) % p);
      int d = ((da + sign * db) % int(p) + int(p)) % int(p);
      r += static_cast<Code>(d) * pw_[i];
    }
    return r;
  }

  std::vector<int> to_poly(Code a) const {
    std::vector<int> r(degree_);
    for (int i = 0; i < degree_; ++i) r[i] = static_cast<int>((a / pw_[i]) % params_.p);
    detail::PrimePoly::trim(r);
    return r;
  }
  Code from_poly(const std::vector<int>& a) const {
    Code r = 0;
    for (std::size_t i = 0; i < a.size(); ++i) r += static_cast<Code>(a[i]) * pw_[i];
    return r;
  }

  void build_log_tables() {
    const std::uint32_t n = order_ - 1;
    exp_.assign(n, 0);
    log_.assign(order_, 0);
    if (n == 1) {  // F_2
      exp_[0] = 1;
      generator_ = 1;
      return;
    }
    // Prefer the class of g itself; otherwise the first primitive code.
    std::vector<Code> candidates;
    candidates.push_back(degree_ == 1 ? Code(0) : Code(params_.p));
    for (Code c = 2; c < order_; ++c) candidates.push_back(c);
    for (Code cand : candidates) {
      std::vector<int> g = degree_ == 1 ? std::vector<int>{} : to_poly(cand);
      if (degree_ == 1) {
        // In the prime field the class of g is -modulus[0].
        if (cand == 0) cand = static_cast<Code>((params_.p - params_.modulus[0]) % params_.p);
        g = {static_cast<int>(cand)};
      }
      if (g.empty()) continue;
      std::vector<int> cur{1};
      bool ok = true;
      for (std::uint32_t e = 0; e < n; ++e) {
        Code c = from_poly(cur);
        if (e > 0 && c == 1) {
          ok = false;
          break;
        }
        exp_[e] = c;
        cur = detail::PrimePoly::mulmod(cur, g, params_.modulus, params_.p);
      }
      if (!ok || from_poly(cur) != 1) continue;
      generator_ = from_poly(g);
      for (std::uint32_t e = 0; e < n; ++e) log_[exp_[e]] = e;
      return;
    }
    throw ParameterError("no primitive element found (modulus not irreducible?)");
  }

  FieldParams params_;
  int degree_ = 1;
  std::int64_t q_ = 2;
  std::uint32_t order_ = 2;
  std::vector<std::uint32_t> pw_;
  std::vector<Code> add_table_;
  std::vector<Code> exp_;
  std::vector<std::uint32_t> log_;
  Code generator_ = 1;
  std::int64_t qinv_mod_ = 1;
};

/// A field element with its field attached; the value-level counterpart of
/// the raw codes stored inside series.
class ConstantFieldElement {
 public:
  ConstantFieldElement(FieldPtr f, Field::Code c) : field_(std::move(f)), code_(c) {}
  static ConstantFieldElement from_int(FieldPtr f, std::int64_t n) {
    auto c = f->from_int(n);
    return {std::move(f), c};
  }

  const FieldPtr& field() const noexcept { return field_; }
  Field::Code code() const noexcept { return code_; }
  bool is_zero() const noexcept { return code_ == 0; }

  friend ConstantFieldElement operator+(const ConstantFieldElement& a, const ConstantFieldElement& b) {
    a.check(b);
    return {a.field_, a.field_->add(a.code_, b.code_)};
  }
  friend ConstantFieldElement operator-(const ConstantFieldElement& a, const ConstantFieldElement& b) {
    a.check(b);
    return {a.field_, a.field_->sub(a.code_, b.code_)};
  }
  friend ConstantFieldElement operator-(const ConstantFieldElement& a) {
    return {a.field_, a.field_->neg(a.code_)};
  }
  friend ConstantFieldElement operator*(const ConstantFieldElement& a, const ConstantFieldElement& b) {
    a.check(b);
    return {a.field_, a.field_->mul(a.code_, b.code_)};
  }
  friend ConstantFieldElement operator/(const ConstantFieldElement& a, const ConstantFieldElement& b) {
    a.check(b);
    return {a.field_, a.field_->div(a.code_, b.code_)};
  }
  ConstantFieldElement pow(std::int64_t e) const { return {field_, field_->pow(code_, e)}; }
  ConstantFieldElement frobenius(int e) const { return {field_, field_->frobenius(code_, e)}; }

  friend bool operator==(const ConstantFieldElement& a, const ConstantFieldElement& b) {
    return a.field_->compatible(*b.field_) && a.code_ == b.code_;
  }

 private:
  void check(const ConstantFieldElement& o) const {
    if (!field_->compatible(*o.field_)) throw ParameterError("mismatched field parameters");
  }
  FieldPtr field_;
  Field::Code code_;
};

}  // namespace carlitz
