#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carlitz/opring.hpp"

namespace carlitz {

/// Polynomial in n commuting indeterminates with series coefficients.
class MultiPoly {
 public:
  MultiPoly(FieldPtr f, int n) : field_(std::move(f)), n_(n) {}

  static MultiPoly constant(const PerfSeries& c, int n) {
    MultiPoly p(c.field(), n);
    p.add_term(std::vector<int>(n, 0), c);
    return p;
  }
  /// The indeterminate t_j, 1 <= j <= n.
  static MultiPoly variable(FieldPtr f, int n, int j) {
    if (j < 1 || j > n) throw ParameterError("variable index out of range");
    MultiPoly p(f, n);
    std::vector<int> e(n, 0);
    e[j - 1] = 1;
    p.add_term(e, PerfSeries::one(f));
    return p;
  }

  const FieldPtr& field() const noexcept { return field_; }
  int n() const noexcept { return n_; }
  const std::map<std::vector<int>, PerfSeries>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const std::vector<int>& e, const PerfSeries& c) {
    if (static_cast<int>(e.size()) != n_) throw ParameterError("monomial arity mismatch");
    for (int v : e)
      if (v < 0) throw ParameterError("negative exponent in polynomial");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!c.is_exact_zero()) terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_exact_zero()) terms_.erase(it);
    }
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) {
    a.check(b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r(a.field_, a.n_);
    for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, -c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly r(a.field_, a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        std::vector<int> e(a.n_);
        for (int k = 0; k < a.n_; ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  PerfSeries evaluate(const std::vector<PerfSeries>& t) const {
    if (static_cast<int>(t.size()) != n_) throw ParameterError("evaluate: wrong number of arguments");
    PerfSeries acc = PerfSeries::zero(field_);
    for (const auto& [e, c] : terms_) {
      PerfSeries m = c;
      for (int k = 0; k < n_; ++k)
        if (e[k] > 0) m = m * t[k].pow(e[k]);
      acc += m;
    }
    return acc;
  }

  int min_coefficient_valuation() const {
    std::optional<Rational> best;
    for (const auto& [e, c] : terms_) {
      Rational v = c.lower_valuation();
      if (!best || v < *best) best = v;
    }
    return best ? static_cast<int>(best->floor()) : 0;
  }

  /// Operator Σ c_e Δ^e.
  OperatorSum as_operator() const {
    OperatorSum s{field_, n_, {}};
    for (const auto& [e, c] : terms_) {
      OperatorWord w;
      for (int k = 0; k < n_; ++k)
        for (int r = 0; r < e[k]; ++r) w.factors.emplace_back(letter::delta(k + 1));
      s.terms.emplace_back(c, std::move(w));
    }
    return s;
  }

 private:
  void check(const MultiPoly& b) const {
    if (n_ != b.n_) throw ParameterError("polynomial arity mismatch");
    if (!field_->compatible(*b.field_)) throw ParameterError("mismatched field parameters");
  }

  FieldPtr field_;
  int n_;
  std::map<std::vector<int>, PerfSeries> terms_;
};

/// {P(Δ) + Q(Δ) d} u = 0.
struct EvolutionEquation {
  MultiPoly P;
  MultiPoly Q;

  EvolutionEquation(MultiPoly p, MultiPoly q) : P(std::move(p)), Q(std::move(q)) {
    if (P.n() != Q.n()) throw ParameterError("P and Q have different arity");
    if (!P.field()->compatible(*Q.field())) throw ParameterError("mismatched field parameters");
    if (P.is_zero() || Q.is_zero()) throw ParameterError("P and Q must be non-zero");
  }
  int n() const noexcept { return P.n(); }
  const FieldPtr& field() const noexcept { return P.field(); }

  OperatorSum as_operator() const {
    return P.as_operator() + Q.as_operator() * OperatorSum::generator(field(), n(), letter::d);
  }
};

/// Prescribed c_{0,i}.
using InitialData = std::map<std::vector<int>, PerfSeries>;

/// c_{0,0...0} = 1, all others zero.
inline InitialData delta_initial_data(const FieldPtr& f, int n) { return {{std::vector<int>(n, 0), PerfSeries::one(f)}}; }

using BracketTuple = std::vector<BracketIndex>;

inline std::string tuple_to_string(const BracketTuple& t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + t[k].to_string();
  return s + ")";
}

struct AdmissibilityReport {
  enum class Status { Admissible, Failure, Indeterminate };
  Status status = Status::Admissible;
  /// max val Q([i]) over the checked tuples, so μ = q^{-max_valuation}.
  Rational max_valuation;
  BracketTuple offending;
  int checked = 0;

  bool ok() const noexcept { return status == Status::Admissible; }
  std::string status_name() const {
    switch (status) {
      case Status::Admissible: return "admissible";
      case Status::Failure: return "failure";
      case Status::Indeterminate: return "indeterminate";
    }
    return "?";
  }
};

namespace detail {

template <class Fn>
void for_each_tuple(int n, int imax, bool with_infinity, Fn&& fn) {
  const int width = imax + 1 + (with_infinity ? 1 : 0);
  BracketTuple t(n);
  std::vector<int> ctr(n, 0);
  for (;;) {
    for (int k = 0; k < n; ++k) t[k] = ctr[k] > imax ? BracketIndex::infinity() : BracketIndex::finite(ctr[k]);
    if (!fn(t)) return;
    int k = n - 1;
    while (k >= 0 && ++ctr[k] == width) ctr[k--] = 0;
    if (k < 0) return;
  }
}

inline std::vector<PerfSeries> bracket_values(const FieldPtr& f, const BracketTuple& t) {
  std::vector<PerfSeries> v;
  for (const auto& b : t) v.push_back(bracket(f, b));
  return v;
}

}  // namespace detail

/// Checks Q([i]) != 0 for i_j ∈ {0..imax, ∞}.
inline AdmissibilityReport admissibility_check(const MultiPoly& Q, int imax) {
  if (imax < 0) throw ParameterError("admissibility_check: imax must be non-negative");
  AdmissibilityReport rep;
  bool first = true;
  detail::for_each_tuple(Q.n(), imax, true, [&](const BracketTuple& t) {
    ++rep.checked;
    PerfSeries v = Q.evaluate(detail::bracket_values(Q.field(), t));
    if (v.is_exact_zero()) {
      rep.status = AdmissibilityReport::Status::Failure;
      rep.offending = t;
      return false;
    }
    if (v.is_zero_at_precision()) {
      rep.status = AdmissibilityReport::Status::Indeterminate;
      rep.offending = t;
      return false;
    }
    Rational val = v.valuation().value;
    if (first || val > rep.max_valuation) rep.max_valuation = val;
    first = false;
    return true;
  });
  return rep;
}

inline AdmissibilityReport admissibility_check(const EvolutionEquation& eq, int imax) {
  return admissibility_check(eq.Q, imax);
}

/// Smallest I such that every index beyond I behaves like ∞: q^{I+1} plus the
/// least coefficient valuation exceeds val Q on all ∞-patterns. nullopt if a
/// pattern vanishes or no I <= cap works.
inline std::optional<int> recommend_imax(const MultiPoly& Q, int cap = 30) {
  const std::int64_t q = Q.field()->q();
  const int cmin = Q.min_coefficient_valuation();
  for (int I = 0; I <= cap; ++I) {
    auto rep = admissibility_check(Q, I);
    if (!rep.ok()) return std::nullopt;
    if (q_power(q, I + 1) + Rational(cmin) > rep.max_valuation) return I;
  }
  return std::nullopt;
}

inline std::optional<int> recommend_imax(const EvolutionEquation& eq, int cap = 30) { return recommend_imax(eq.Q, cap); }

/// Coefficient recursion c_{m+1,i+1} = -c_{m,i}^q (P([i])/Q([i]))^q.
inline MultiFunction cauchy_solve(const EvolutionEquation& eq, const InitialData& init, int trunc_m, int trunc_i) {
  const FieldPtr& f = eq.field();
  const int n = eq.n();
  if (trunc_m < 0 || trunc_i < 0) throw ParameterError("truncations must be non-negative");
  const int imax = std::max(trunc_i, recommend_imax(eq).value_or(trunc_i));
  auto rep = admissibility_check(eq, imax);
  if (rep.status == AdmissibilityReport::Status::Failure)
    throw RefusalError("inadmissible", "Q vanishes at " + tuple_to_string(rep.offending));
  if (rep.status == AdmissibilityReport::Status::Indeterminate)
    throw RefusalError("indeterminate", "Q is zero at working precision at " + tuple_to_string(rep.offending));

  MultiFunction u(f, n, trunc_m, trunc_i);
  for (const auto& [i, c] : init) {
    if (static_cast<int>(i.size()) != n) throw ParameterError("initial data arity mismatch");
    SlotIndex idx{0};
    idx.insert(idx.end(), i.begin(), i.end());
    if (!u.shape_ok(idx)) throw ParameterError("negative initial-data index");
    if (u.known(idx)) u.set(idx, c);
  }
  std::map<std::vector<int>, PerfSeries> ratio;
  auto quotient = [&](const std::vector<int>& i) -> const PerfSeries& {
    auto it = ratio.find(i);
    if (it != ratio.end()) return it->second;
    BracketTuple t;
    for (int v : i) t.push_back(BracketIndex::finite(v));
    auto args = detail::bracket_values(f, t);
    PerfSeries qv = eq.Q.evaluate(args);
    if (qv.is_zero_at_precision()) throw PrecisionError("Q exhausted precision at " + tuple_to_string(t));
    return ratio.emplace(i, (eq.P.evaluate(args) * qv.inverse()).frobenius(1)).first->second;
  };
  for (int m = 0; m < trunc_m; ++m) {
    std::vector<std::pair<SlotIndex, PerfSeries>> layer;
    for (const auto& [idx, c] : u.coefficients())
      if (idx[0] == m) layer.emplace_back(idx, c);
    for (const auto& [idx, c] : layer) {
      SlotIndex next = idx;
      for (auto& v : next) ++v;
      if (!u.known(next)) continue;
      std::vector<int> i(idx.begin() + 1, idx.end());
      u.set(next, -(c.frobenius(1) * quotient(i)));
    }
  }
  return u;
}

/// {P(Δ) + Q(Δ)d} u on the region where every input slot is known.
inline MultiFunction residual(const EvolutionEquation& eq, const MultiFunction& u) {
  if (eq.n() != u.n()) throw ParameterError("residual: arity mismatch");
  return op_apply(eq.as_operator(), u);
}

struct GrowthReport {
  bool passes = true;
  /// Smallest log_q C_2 that works with the given r.
  Rational tightest_log_c;
  /// Smallest log_q r that works with the given C_2 (absent when n = 0).
  std::optional<Rational> tightest_log_r;
};

/// Checks val c_{l,j} >= -q^l log C_2 - (Σ q^{j_k}) log r on the stored support.
inline GrowthReport growth_check(const MultiFunction& u, const Rational& log_r, const Rational& log_c) {
  const std::int64_t q = u.field()->q();
  GrowthReport rep;
  std::optional<Rational> best_c, best_r;
  for (const auto& [idx, c] : u.coefficients()) {
    if (c.is_exact_zero()) continue;
    const Rational val = c.lower_valuation();
    const Rational ql = q_power(q, idx[0]);
    Rational sj(0);
    for (std::size_t k = 1; k < idx.size(); ++k) sj += q_power(q, idx[k]);
    if (val < -ql * log_c - sj * log_r) rep.passes = false;
    Rational need_c = (-val - sj * log_r) / ql;
    if (!best_c || need_c > *best_c) best_c = need_c;
    if (u.n() > 0) {
      Rational need_r = (-val - ql * log_c) / sj;
      if (!best_r || need_r > *best_r) best_r = need_r;
    }
  }
  rep.tightest_log_c = best_c.value_or(Rational(0));
  rep.tightest_log_r = best_r;
  return rep;
}

/// The hypergeometric evolution equation with P = Π_{i<=r}(t_i - a_i) and
/// Q = -Π_{j<=s}(t_j - b_j), i.e. {Π(Δ-a_i) - Π(Δ-b_j)d} u = 0.
inline EvolutionEquation product_equation(const std::vector<PerfSeries>& a, const std::vector<PerfSeries>& b, int n) {
  if (a.empty() || b.empty()) throw ParameterError("product_equation needs r, s >= 1");
  if (n < static_cast<int>(std::max(a.size(), b.size()))) throw ParameterError("product_equation needs n >= max(r, s)");
  const FieldPtr& f = a.front().field();
  MultiPoly P = MultiPoly::constant(PerfSeries::one(f), n);
  for (std::size_t i = 0; i < a.size(); ++i)
    P = P * (MultiPoly::variable(f, n, static_cast<int>(i) + 1) - MultiPoly::constant(a[i], n));
  MultiPoly Q = MultiPoly::constant(-PerfSeries::one(f), n);
  for (std::size_t j = 0; j < b.size(); ++j)
    Q = Q * (MultiPoly::variable(f, n, static_cast<int>(j) + 1) - MultiPoly::constant(b[j], n));
  return EvolutionEquation(std::move(P), std::move(Q));
}

}  // namespace carlitz
