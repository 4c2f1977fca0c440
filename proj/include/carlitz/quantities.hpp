#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "carlitz/series.hpp"

namespace carlitz {

/// Index of a bracket: a finite integer or ∞.
struct BracketIndex {
  bool infinite = false;
  int n = 0;

  static BracketIndex finite(int n) { return {false, n}; }
  static BracketIndex infinity() { return {true, 0}; }
  std::string to_string() const { return infinite ? std::string("inf") : std::to_string(n); }
  friend bool operator==(const BracketIndex&, const BracketIndex&) = default;
};

/// [n] = x^{q^n} - x (n ∈ Z, negative n inside the perfection), [0] = 0.
inline PerfSeries bracket(const FieldPtr& f, int n) {
  if (n == 0) return PerfSeries::zero(f);
  return PerfSeries::monomial(f, q_power(f->q(), n)) - PerfSeries::x(f);
}

/// [∞] = -x.
inline PerfSeries bracket_infinity(const FieldPtr& f) { return -PerfSeries::x(f); }

inline PerfSeries bracket(const FieldPtr& f, BracketIndex i) {
  return i.infinite ? bracket_infinity(f) : bracket(f, i.n);
}

namespace detail {

/// Per-configuration memo of D_n and L_n, shared across threads.
class FactorialTables {
 public:
  static FactorialTables& instance() {
    static FactorialTables t;
    return t;
  }

  void set_capacity(int n) {
    std::unique_lock lock(mu_);
    capacity_ = n;
  }
  int capacity() const {
    std::shared_lock lock(mu_);
    return capacity_;
  }

  PerfSeries get(const FieldPtr& f, char kind, int n) {
    {
      std::shared_lock lock(mu_);
      auto it = tables_.find(key(f, kind));
      if (it != tables_.end() && n < static_cast<int>(it->second.size())) return it->second[n];
    }
    // Build the table up to n outside the lock, then publish.
    std::vector<PerfSeries> vals{PerfSeries::one(f)};
    for (int k = 1; k <= n; ++k) {
      const PerfSeries prev = kind == 'D' ? vals.back().frobenius(1) : vals.back();
      vals.push_back(bracket(f, k) * prev);
    }
    PerfSeries result = vals[n];
    std::unique_lock lock(mu_);
    auto& slot = tables_[key(f, kind)];
    if (static_cast<int>(vals.size()) > static_cast<int>(slot.size()) && n < capacity_) {
      if (vals.size() > static_cast<std::size_t>(capacity_)) vals.erase(vals.begin() + capacity_, vals.end());
      slot = std::move(vals);
    }
    return result;
  }

 private:
  using Key = std::tuple<int, int, int, std::vector<int>, std::int64_t, std::int64_t, char>;
  static Key key(const FieldPtr& f, char kind) {
    const auto& p = f->params();
    return {p.p, p.v, p.m, p.modulus, p.working_precision.num(), p.working_precision.den(), kind};
  }

  mutable std::shared_mutex mu_;
  int capacity_ = 64;
  std::map<Key, std::vector<PerfSeries>> tables_;
};

}  // namespace detail

/// Carlitz factorial D_n = [n][n-1]^q ... [1]^{q^{n-1}}, D_0 = 1.
inline PerfSeries carlitz_D(const FieldPtr& f, int n) {
  if (n < 0) throw ParameterError("carlitz_D: n must be non-negative");
  return detail::FactorialTables::instance().get(f, 'D', n);
}

/// L_n = [n][n-1] ... [1], L_0 = 1.
inline PerfSeries carlitz_L(const FieldPtr& f, int n) {
  if (n < 0) throw ParameterError("carlitz_L: n must be non-negative");
  return detail::FactorialTables::instance().get(f, 'L', n);
}

/// Thakur's symbol (α)_n for integer α.
inline PerfSeries pochhammer_thakur(const FieldPtr& f, int alpha, int n) {
  if (n < 0) throw ParameterError("pochhammer_thakur: n must be non-negative");
  if (alpha >= 1) return carlitz_D(f, n + alpha - 1).frobenius(-(alpha - 1));
  if (n > -alpha) return PerfSeries::zero(f);
  PerfSeries v = carlitz_L(f, -alpha - n).frobenius(n).inverse();
  return ((n - alpha) % 2 != 0) ? -v : v;
}

enum class PochhammerMode { Direct, Recurrent };

/// ⟨a⟩_m = ([0]-a)^{q^m} ([1]-a)^{q^{m-1}} ... ([m-1]-a)^q, ⟨a⟩_0 = 1.
inline PerfSeries pochhammer(const PerfSeries& a, int m, PochhammerMode mode = PochhammerMode::Recurrent) {
  if (m < 0) throw ParameterError("pochhammer: m must be non-negative");
  const FieldPtr& f = a.field();
  PerfSeries r = PerfSeries::one(f);
  if (mode == PochhammerMode::Direct) {
    for (int k = 0; k < m; ++k) r = r * (bracket(f, k) - a).frobenius(m - k);
  } else {
    for (int k = 0; k < m; ++k) r = (bracket(f, k) - a).frobenius(1) * r.frobenius(1);
  }
  return r;
}

/// All of ⟨a⟩_0 … ⟨a⟩_M by the recurrence.
inline std::vector<PerfSeries> pochhammer_table(const PerfSeries& a, int M) {
  std::vector<PerfSeries> out{PerfSeries::one(a.field())};
  for (int k = 0; k < M; ++k)
    out.push_back((bracket(a.field(), k) - a).frobenius(1) * out.back().frobenius(1));
  return out;
}

/// T_1(a) = (a - [1])^{1/q}; extends α ↦ α+1 on [-α].
inline PerfSeries shift_up(const PerfSeries& a) { return (a - bracket(a.field(), 1)).frobenius(-1); }

/// T_{-1}(a) = a^q + [1]; inverse of shift_up.
inline PerfSeries shift_down(const PerfSeries& a) { return a.frobenius(1) + bracket(a.field(), 1); }

}  // namespace carlitz
