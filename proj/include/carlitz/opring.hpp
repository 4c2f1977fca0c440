#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "carlitz/funcspace.hpp"

namespace carlitz {

/// Generator letters: 0 = τ, 1 = d, 1 + j = Δ_j.
namespace letter {
inline constexpr int tau = 0;
inline constexpr int d = 1;
inline constexpr int delta(int j) { return 1 + j; }
inline constexpr bool is_delta(int l) { return l >= 2; }
inline constexpr int delta_index(int l) { return l - 1; }
}  // namespace letter

/// Standard: a τ^l d^μ Δ^i. Alt: a Δ^i τ^l d^μ.
enum class Convention { Standard, Alt };

/// Which out-of-order adjacent pair gets rewritten next.
enum class Strategy { Leftmost, Rightmost, Random };

using Factor = std::variant<int, PerfSeries>;

struct OperatorWord {
  std::vector<Factor> factors;
};

/// Formal sum Σ c_k · w_k of words over the generators of A_{n+1}.
struct OperatorSum {
  FieldPtr field;
  int n = 0;
  std::vector<std::pair<PerfSeries, OperatorWord>> terms;

  static OperatorSum zero(FieldPtr f, int n) { return {std::move(f), n, {}}; }
  static OperatorSum scalar(const PerfSeries& c, int n) { return {c.field(), n, {{c, OperatorWord{}}}}; }
  static OperatorSum generator(FieldPtr f, int n, int l) {
    if (letter::is_delta(l) && letter::delta_index(l) > n) throw ParameterError("delta index out of range");
    auto one = PerfSeries::one(f);
    return {std::move(f), n, {{one, OperatorWord{{Factor(l)}}}}};
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) {
    a.check(b);
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
  }
  friend OperatorSum operator-(const OperatorSum& a) {
    OperatorSum r = a;
    for (auto& [c, w] : r.terms) c = -c;
    return r;
  }
  friend OperatorSum operator-(const OperatorSum& a, const OperatorSum& b) { return a + (-b); }
  /// Composition: (a*b) acts as a after b.
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
    a.check(b);
    OperatorSum r{a.field, a.n, {}};
    for (const auto& [ca, wa] : a.terms)
      for (const auto& [cb, wb] : b.terms) {
        OperatorWord w = wa;
        w.factors.emplace_back(cb);
        w.factors.insert(w.factors.end(), wb.factors.begin(), wb.factors.end());
        r.terms.emplace_back(ca, std::move(w));
      }
    return r;
  }

 private:
  void check(const OperatorSum& b) const {
    if (n != b.n) throw ParameterError("operator arity mismatch");
    if (!field->compatible(*b.field)) throw ParameterError("mismatched field parameters");
  }
};

/// Key layout (l, μ, i_1, ..., i_n) in either convention.
using NFKey = std::vector<int>;

inline constexpr int kNegInfDegree = std::numeric_limits<int>::min();

struct NormalForm {
  FieldPtr field;
  int n = 0;
  Convention convention = Convention::Standard;
  std::map<NFKey, PerfSeries> terms;

  bool is_zero() const noexcept { return terms.empty(); }

  friend bool operator==(const NormalForm& a, const NormalForm& b) {
    if (a.n != b.n || a.convention != b.convention || a.terms.size() != b.terms.size()) return false;
    for (auto ia = a.terms.begin(), ib = b.terms.begin(); ia != a.terms.end(); ++ia, ++ib)
      if (ia->first != ib->first || !ia->second.equals_at_precision(ib->second)) return false;
    return true;
  }

  /// Letters of the monomial for a key, in this convention's order.
  std::vector<int> word_of(const NFKey& k) const {
    std::vector<int> w;
    auto push_deltas = [&] {
      for (int j = 1; j <= n; ++j) w.insert(w.end(), k[1 + j], letter::delta(j));
    };
    if (convention == Convention::Alt) push_deltas();
    w.insert(w.end(), k[0], letter::tau);
    w.insert(w.end(), k[1], letter::d);
    if (convention == Convention::Standard) push_deltas();
    return w;
  }

  OperatorSum to_sum() const {
    OperatorSum s{field, n, {}};
    for (const auto& [k, c] : terms) {
      OperatorWord w;
      for (int l : word_of(k)) w.factors.emplace_back(l);
      s.terms.emplace_back(c, std::move(w));
    }
    return s;
  }
};

namespace detail {

inline int rank(int l, Convention c) {
  // Standard: τ < d < Δ_1 < ... ; Alt: Δ_1 < ... < Δ_n < τ < d.
  if (c == Convention::Standard) return l;
  return letter::is_delta(l) ? l - 2 : 1000 + l;
}

/// Frobenius exponent picked up by a scalar moved left past `prefix`.
inline int frob_shift(const std::vector<int>& w, std::size_t end) {
  int k = 0;
  for (std::size_t i = 0; i < end; ++i) {
    if (w[i] == letter::tau) ++k;
    else if (w[i] == letter::d) --k;
  }
  return k;
}

class Rewriter {
 public:
  Rewriter(FieldPtr f, int n, Convention c, Strategy s, std::uint64_t seed)
      : f_(std::move(f)), n_(n), conv_(c), strat_(s), rng_(seed),
        one_over_q_(bracket(f_, 1).frobenius(-1)), b1_(bracket(f_, 1)) {}

  void add(std::vector<int> w, const PerfSeries& c) {
    if (c.is_exact_zero()) return;
    auto it = pending_.find(w);
    if (it == pending_.end()) {
      pending_.emplace(std::move(w), c);
    } else {
      it->second += c;
      if (it->second.is_exact_zero()) pending_.erase(it);
    }
  }

  void add_word(const PerfSeries& c, const OperatorWord& w) {
    PerfSeries coef = c;
    std::vector<int> letters;
    for (const auto& f : w.factors) {
      if (const int* l = std::get_if<int>(&f)) {
        if (letter::is_delta(*l) && (letter::delta_index(*l) < 1 || letter::delta_index(*l) > n_))
          throw ParameterError("delta index out of range");
        letters.push_back(*l);
      } else {
        coef = coef * std::get<PerfSeries>(f).frobenius(frob_shift(letters, letters.size()));
      }
    }
    add(std::move(letters), coef);
  }

  NormalForm run() {
    for (;;) {
      auto it = pick();
      if (it == pending_.end()) break;
      std::vector<int> w = it->first;
      PerfSeries c = it->second;
      pending_.erase(it);
      rewrite(w, c);
    }
    NormalForm nf{f_, n_, conv_, {}};
    for (const auto& [w, c] : pending_) {
      if (c.is_zero_at_precision()) continue;
      NFKey k(2 + n_, 0);
      for (int l : w) {
        if (l == letter::tau) ++k[0];
        else if (l == letter::d) ++k[1];
        else ++k[1 + letter::delta_index(l)];
      }
      nf.terms.emplace(std::move(k), c);
    }
    return nf;
  }

 private:
  std::vector<std::size_t> inversions(const std::vector<int>& w) const {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (rank(w[i], conv_) > rank(w[i + 1], conv_)) pos.push_back(i);
    return pos;
  }

  std::map<std::vector<int>, PerfSeries>::iterator pick() {
    std::vector<std::map<std::vector<int>, PerfSeries>::iterator> bad;
    for (auto it = pending_.begin(); it != pending_.end(); ++it)
      if (!inversions(it->first).empty()) {
        if (strat_ != Strategy::Random) return it;
        bad.push_back(it);
      }
    if (bad.empty()) return pending_.end();
    return bad[std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng_)];
  }

  void rewrite(const std::vector<int>& w, const PerfSeries& c) {
    const auto inv = inversions(w);
    std::size_t i = inv.front();
    if (strat_ == Strategy::Rightmost) i = inv.back();
    if (strat_ == Strategy::Random) i = inv[std::uniform_int_distribution<std::size_t>(0, inv.size() - 1)(rng_)];
    const int a = w[i], b = w[i + 1];
    std::vector<int> swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    add(swapped, c);

    // Correction term: a b = b a + s * mid, inserted at position i.
    std::optional<PerfSeries> s;
    std::vector<int> mid;
    if (a == letter::d && b == letter::tau) {
      s = one_over_q_;
    } else if (letter::is_delta(a) && b == letter::tau) {
      s = b1_, mid = {letter::tau};
    } else if (letter::is_delta(a) && b == letter::d) {
      s = -one_over_q_, mid = {letter::d};
    } else if (a == letter::tau && letter::is_delta(b)) {
      s = -b1_, mid = {letter::tau};
    } else if (a == letter::d && letter::is_delta(b)) {
      s = one_over_q_, mid = {letter::d};
    }
    if (!s) return;  // Δ_j Δ_k commute
    std::vector<int> out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), mid.begin(), mid.end());
    out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
    add(std::move(out), c * s->frobenius(frob_shift(w, i)));
  }

  FieldPtr f_;
  int n_;
  Convention conv_;
  Strategy strat_;
  std::mt19937_64 rng_;
  PerfSeries one_over_q_;
  PerfSeries b1_;
  std::map<std::vector<int>, PerfSeries> pending_;
};

}  // namespace detail

/// Rewrites a sum of words into the unique normal form of `convention`.
inline NormalForm normalize(const OperatorSum& expr, Convention convention = Convention::Standard,
                            Strategy strategy = Strategy::Leftmost, std::uint64_t seed = 0) {
  detail::Rewriter rw(expr.field, expr.n, convention, strategy, seed);
  for (const auto& [c, w] : expr.terms) rw.add_word(c, w);
  return rw.run();
}

inline NormalForm normalize(const NormalForm& a, Convention convention) {
  return normalize(a.to_sum(), convention);
}

inline NormalForm op_identity(const FieldPtr& f, int n, Convention c = Convention::Standard) {
  return normalize(OperatorSum::scalar(PerfSeries::one(f), n), c);
}

inline NormalForm op_add(const NormalForm& a, const NormalForm& b) {
  if (a.n != b.n || a.convention != b.convention) throw ParameterError("op_add: mismatched n or convention");
  return normalize(a.to_sum() + b.to_sum(), a.convention);
}

inline NormalForm op_sub(const NormalForm& a, const NormalForm& b) {
  if (a.n != b.n || a.convention != b.convention) throw ParameterError("op_sub: mismatched n or convention");
  return normalize(a.to_sum() - b.to_sum(), a.convention);
}

inline NormalForm op_mul(const NormalForm& a, const NormalForm& b) {
  if (a.n != b.n) throw ParameterError("op_mul: mismatched n");
  if (a.convention != b.convention) throw ParameterError("op_mul: mismatched convention");
  return normalize(a.to_sum() * b.to_sum(), a.convention);
}

/// Applies a word (letters only) to f, rightmost letter first.
inline MultiFunction apply_word(const std::vector<int>& w, MultiFunction f) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it == letter::tau) f = f.apply_tau();
    else if (*it == letter::d) f = f.apply_d();
    else f = f.apply_delta(letter::delta_index(*it));
  }
  return f;
}

inline MultiFunction op_apply(const NormalForm& a, const MultiFunction& f) {
  if (a.n != f.n()) throw ParameterError("op_apply: operator and function arity differ");
  std::optional<MultiFunction> acc;
  for (const auto& [k, c] : a.terms) {
    MultiFunction t = apply_word(a.word_of(k), f).scaled(c);
    acc = acc ? *acc + t : t;
  }
  if (!acc) return MultiFunction(f.field(), f.n(), f.trunc_m(), f.trunc_i());
  return *acc;
}

inline MultiFunction op_apply(const OperatorSum& a, const MultiFunction& f) {
  if (a.n != f.n()) throw ParameterError("op_apply: operator and function arity differ");
  std::optional<MultiFunction> acc;
  for (const auto& [c, w] : a.terms) {
    MultiFunction t = f;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
      if (const int* l = std::get_if<int>(&*it)) t = apply_word({*l}, t);
      else t = t.scaled(std::get<PerfSeries>(*it));
    }
    t = t.scaled(c);
    acc = acc ? *acc + t : t;
  }
  if (!acc) return MultiFunction(f.field(), f.n(), f.trunc_m(), f.trunc_i());
  return *acc;
}

/// A term is linear exactly when it carries as many τ as d.
inline bool is_linear(const NormalForm& a) {
  return std::all_of(a.terms.begin(), a.terms.end(), [](const auto& t) { return t.first[0] == t.first[1]; });
}

/// max(l + μ + Σi) over stored terms; kNegInfDegree for the zero operator.
inline int filtration_degree(const NormalForm& a) {
  int best = kNegInfDegree;
  for (const auto& [k, c] : a.terms) {
    int s = 0;
    for (int v : k) s += v;
    best = std::max(best, s);
  }
  return best;
}

// Dimension counts ------------------------------------------------------------

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < k) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::int64_t>(r);
}

/// dim Γ_ν: monomials τ^l d^μ Δ^i with l + μ + Σi <= ν.
inline std::int64_t gamma_dim(int n, int nu) {
  if (n < 0 || nu < 0) throw ParameterError("gamma_dim: n and ν must be non-negative");
  return binomial(nu + n + 2, n + 2);
}

/// card{(l, i) : 2l + Σi <= ν}.
inline std::int64_t qh_lower_count(int n, int nu) {
  if (n < 0 || nu < 0) throw ParameterError("qh_lower_count: n and ν must be non-negative");
  std::int64_t total = 0;
  for (int l = 0; 2 * l <= nu; ++l) total += binomial(nu - 2 * l + n, n);
  return total;
}

/// Monomials of polynomial functions in F_{n+1}: (m, i) with m <= min(i) and
/// m + Σi <= ν.
inline std::int64_t fhat_count(int n, int nu) {
  if (n < 0 || nu < 0) throw ParameterError("fhat_count: n and ν must be non-negative");
  std::int64_t total = 0;
  for (int m = 0; (n + 1) * m <= nu; ++m) total += binomial(nu - (n + 1) * m + n, n);
  return total;
}

struct GkFit {
  int degree = 0;
  int period = 1;
};

/// Least degree of an (quasi-)polynomial fitting the tail of the samples
/// exactly. Samples must be at consecutive ν. Each residue class mod the
/// period is differenced until constant; the constant has to repeat at least
/// twice to count as verified. nullopt means no fit.
inline std::optional<GkFit> gk_fit(const std::vector<std::pair<int, std::int64_t>>& samples, int max_period = 6) {
  if (samples.size() < 3) return std::nullopt;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first != samples[i - 1].first + 1) throw ParameterError("gk_fit: samples must be at consecutive ν");
  auto class_degree = [](std::vector<__int128> v) -> std::optional<int> {
    for (int k = 0; v.size() >= 3; ++k) {
      if (std::all_of(v.begin(), v.end(), [&](__int128 x) { return x == v.front(); })) return k;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
      v.pop_back();
    }
    return std::nullopt;
  };
  for (int period = 1; period <= max_period; ++period) {
    for (std::size_t skip = 0; skip <= samples.size() / 3; ++skip) {
      int degree = 0;
      bool ok = true;
      for (int r = 0; r < period && ok; ++r) {
        std::vector<__int128> cls;
        for (std::size_t i = skip + r; i < samples.size(); i += period) cls.push_back(samples[i].second);
        auto dgr = class_degree(cls);
        if (!dgr) ok = false;
        else degree = std::max(degree, *dgr);
      }
      if (ok) return GkFit{degree, period};
    }
  }
  return std::nullopt;
}

}  // namespace carlitz
