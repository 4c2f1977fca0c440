#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "carlitz/quantities.hpp"
#include "carlitz/series.hpp"

namespace carlitz {

/// Slot (m, i_1, ..., i_n) of a function of class F_{n+1}.
using SlotIndex = std::vector<int>;

/// Growth certificate |c_{l,j}| <= C^{q^l} r^{q^{j_1}+...+q^{j_n}}, stored as
/// log_q C and log_q r.
struct GrowthCertificate {
  Rational log_c;
  Rational log_r;
};

/// Truncated function Σ c_{m,i} s_1^{q^{i_1}} ... s_n^{q^{i_n}} z^{q^m} / D_m.
///
/// Coefficients are stored against the basis z^{q^m}/D_m. The known region is
/// m <= trunc_m and every i_j <= trunc_i; slots inside it that are absent are
/// zero, slots outside it are unknown. Support respects m <= min(i). With
/// n = 0 this is a function of z alone and trunc_i is ignored.
class MultiFunction {
 public:
  MultiFunction(FieldPtr f, int n, int trunc_m, int trunc_i)
      : field_(std::move(f)), n_(n), trunc_m_(trunc_m), trunc_i_(n == 0 ? 0 : trunc_i) {
    if (n < 0) throw ParameterError("MultiFunction: n must be non-negative");
  }

  const FieldPtr& field() const noexcept { return field_; }
  int n() const noexcept { return n_; }
  int trunc_m() const noexcept { return trunc_m_; }
  int trunc_i() const noexcept { return trunc_i_; }
  const std::map<SlotIndex, PerfSeries>& coefficients() const noexcept { return coeffs_; }

  bool shape_ok(const SlotIndex& idx) const {
    if (static_cast<int>(idx.size()) != n_ + 1 || idx[0] < 0) return false;
    for (int j = 1; j <= n_; ++j)
      if (idx[j] < idx[0]) return false;
    return true;
  }
  bool known(const SlotIndex& idx) const {
    if (idx[0] > trunc_m_) return false;
    for (int j = 1; j <= n_; ++j)
      if (idx[j] > trunc_i_) return false;
    return true;
  }

  void set(const SlotIndex& idx, PerfSeries c) {
    if (!shape_ok(idx)) throw ParameterError("slot outside the support shape m <= min(i)");
    if (!known(idx)) throw ParameterError("slot outside the truncation");
    if (!c.field()->compatible(*field_)) throw ParameterError("mismatched field parameters");
    if (c.is_exact_zero())
      coeffs_.erase(idx);
    else
      coeffs_.insert_or_assign(idx, std::move(c));
  }

  PerfSeries coefficient(const SlotIndex& idx) const {
    if (static_cast<int>(idx.size()) != n_ + 1) throw ParameterError("slot arity mismatch");
    if (!known(idx)) throw PrecisionError("slot outside the truncation is unknown");
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? PerfSeries::zero(field_) : it->second;
  }

  MultiFunction restricted(int trunc_m, int trunc_i) const {
    MultiFunction r(field_, n_, std::min(trunc_m, trunc_m_), std::min(trunc_i, trunc_i_));
    for (const auto& [idx, c] : coeffs_)
      if (r.known(idx)) r.coeffs_.emplace(idx, c);
    return r;
  }

  friend MultiFunction operator+(const MultiFunction& a, const MultiFunction& b) { return a.combine(b, false); }
  friend MultiFunction operator-(const MultiFunction& a, const MultiFunction& b) { return a.combine(b, true); }

  /// Left multiplication of values by a scalar.
  MultiFunction scaled(const PerfSeries& lambda) const {
    MultiFunction r(field_, n_, trunc_m_, trunc_i_);
    for (const auto& [idx, c] : coeffs_) r.put(idx, lambda * c);
    return r;
  }

  /// True when every slot of the common known region agrees at precision.
  bool equals_on_common_support(const MultiFunction& o) const {
    return (*this - o).is_zero_at_precision();
  }
  bool is_zero_at_precision() const {
    for (const auto& [idx, c] : coeffs_)
      if (!c.is_zero_at_precision()) return false;
    return true;
  }

  /// τu = u^q: slot (m, i) moves to (m+1, i+1) with coefficient c^q [m+1].
  /// Every known region grows by one.
  MultiFunction apply_tau() const {
    MultiFunction r(field_, n_, trunc_m_ + 1, n_ == 0 ? 0 : trunc_i_ + 1);
    for (const auto& [idx, c] : coeffs_) {
      SlotIndex t = idx;
      for (auto& v : t) ++v;
      r.put(t, c.frobenius(1) * bracket(field_, idx[0] + 1));
    }
    return r;
  }

  /// Δ_j acting in s_j: slot multiplied by [i_j].
  MultiFunction apply_delta(int j) const {
    if (j < 1 || j > n_) throw ParameterError("delta index " + std::to_string(j) + " out of range");
    MultiFunction r(field_, n_, trunc_m_, trunc_i_);
    for (const auto& [idx, c] : coeffs_) r.put(idx, c * bracket(field_, idx[j]));
    return r;
  }

  /// Δ = τd acting in z: slot multiplied by [m].
  MultiFunction apply_delta_z() const {
    MultiFunction r(field_, n_, trunc_m_, trunc_i_);
    for (const auto& [idx, c] : coeffs_) r.put(idx, c * bracket(field_, idx[0]));
    return r;
  }

  /// Carlitz derivative in z: new (ν, j) is c_{ν+1, j+1}^{1/q}. Truncations
  /// drop by one.
  MultiFunction apply_d() const {
    MultiFunction r(field_, n_, trunc_m_ - 1, n_ == 0 ? 0 : trunc_i_ - 1);
    for (const auto& [idx, c] : coeffs_) {
      if (idx[0] == 0) continue;
      SlotIndex t = idx;
      for (auto& v : t) --v;
      if (r.known(t)) r.put(t, c.frobenius(-1));
    }
    return r;
  }

  /// Σ c_{m,i} s^{q^i} z^{q^m} / D_m over the stored support. Without a
  /// certificate the function is treated as the polynomial it stores. With
  /// one, the result precision is capped by a lower bound on the valuation of
  /// every omitted term; RefusalError("tail-bound") when that bound is not
  /// increasing at the given point.
  PerfSeries evaluate(const PerfSeries& z, std::span<const PerfSeries> s,
                      const std::optional<GrowthCertificate>& cert = std::nullopt) const {
    if (static_cast<int>(s.size()) != n_) throw ParameterError("evaluate: expected " + std::to_string(n_) + " s-values");
    if (!z.field()->compatible(*field_)) throw ParameterError("mismatched field parameters");
    for (const auto& v : s)
      if (!v.field()->compatible(*field_)) throw ParameterError("mismatched field parameters");
    PerfSeries acc = PerfSeries::zero(field_);
    for (const auto& [idx, c] : coeffs_) {
      PerfSeries term = c * z.frobenius(idx[0]);
      for (int k = 0; k < n_; ++k) term = term * s[k].frobenius(idx[k + 1]);
      term = term * carlitz_D(field_, idx[0]).inverse();
      acc += term;
    }
    if (!cert) return acc;
    if (z.is_exact_zero()) return acc;
    for (const auto& v : s)
      if (v.is_exact_zero()) return acc;
    const std::int64_t q = field_->q();
    const Rational inv_qm1(1, q - 1);
    const Rational A = z.lower_valuation() - cert->log_c - inv_qm1;
    if (!(A > Rational(0))) throw RefusalError("tail-bound", "z is outside the certified region");
    std::vector<Rational> B;
    for (const auto& v : s) {
      B.push_back(v.lower_valuation() - cert->log_r);
      if (!(B.back() > Rational(0))) throw RefusalError("tail-bound", "s is outside the certified region");
    }
    auto bound = [&](int l, const std::vector<int>& j) {
      Rational r = q_power(q, l) * A + inv_qm1;
      for (int k = 0; k < n_; ++k) r += q_power(q, j[k]) * B[k];
      return r;
    };
    Rational tail = bound(trunc_m_ + 1, std::vector<int>(n_, trunc_m_ + 1));
    for (int k = 0; k < n_; ++k) {
      std::vector<int> j(n_, 0);
      j[k] = trunc_i_ + 1;
      tail = std::min(tail, bound(0, j));
    }
    return acc.truncated(Rational(tail.floor()));
  }

 private:
  void put(const SlotIndex& idx, PerfSeries c) {
    if (!known(idx)) return;
    if (c.is_exact_zero()) return;
    coeffs_.insert_or_assign(idx, std::move(c));
  }

  MultiFunction combine(const MultiFunction& b, bool negate) const {
    if (b.n_ != n_) throw ParameterError("MultiFunction arity mismatch");
    if (!b.field_->compatible(*field_)) throw ParameterError("mismatched field parameters");
    MultiFunction r(field_, n_, std::min(trunc_m_, b.trunc_m_), std::min(trunc_i_, b.trunc_i_));
    for (const auto& [idx, c] : coeffs_)
      if (r.known(idx)) r.coeffs_.emplace(idx, c);
    for (const auto& [idx, c] : b.coeffs_) {
      if (!r.known(idx)) continue;
      PerfSeries v = negate ? -c : c;
      auto it = r.coeffs_.find(idx);
      if (it == r.coeffs_.end()) {
        r.put(idx, std::move(v));
      } else {
        it->second = it->second + v;
        if (it->second.is_exact_zero()) r.coeffs_.erase(it);
      }
    }
    return r;
  }

  FieldPtr field_;
  int n_;
  int trunc_m_;
  int trunc_i_;
  std::map<SlotIndex, PerfSeries> coeffs_;
};

inline MultiFunction apply_tau(const MultiFunction& f) { return f.apply_tau(); }
inline MultiFunction apply_delta(const MultiFunction& f, int j) { return f.apply_delta(j); }
inline MultiFunction apply_d(const MultiFunction& f) { return f.apply_d(); }

/// Σ_{k<=M} a_k t^{q^k}, the plain one-variable form (no D_k normalization).
class LinearFunction1 {
 public:
  explicit LinearFunction1(std::vector<PerfSeries> a) : a_(std::move(a)) {
    if (a_.empty()) throw ParameterError("LinearFunction1 needs at least one coefficient");
  }

  const std::vector<PerfSeries>& coefficients() const noexcept { return a_; }
  int trunc() const noexcept { return static_cast<int>(a_.size()) - 1; }
  const FieldPtr& field() const noexcept { return a_.front().field(); }

  /// a_k ↦ a_{k-1}^q; the truncation grows by one.
  LinearFunction1 apply_tau() const {
    std::vector<PerfSeries> r{PerfSeries::zero(field())};
    for (const auto& c : a_) r.push_back(c.frobenius(1));
    return LinearFunction1(std::move(r));
  }
  LinearFunction1 apply_delta() const {
    std::vector<PerfSeries> r;
    for (int k = 0; k <= trunc(); ++k) r.push_back(a_[k] * bracket(field(), k));
    return LinearFunction1(std::move(r));
  }
  /// d = τ^{-1}Δ: new a_k = (a_{k+1}[k+1])^{1/q}.
  LinearFunction1 apply_d() const {
    if (trunc() == 0) throw PrecisionError("apply_d exhausts the truncation");
    std::vector<PerfSeries> r;
    for (int k = 0; k < trunc(); ++k) r.push_back((a_[k + 1] * bracket(field(), k + 1)).frobenius(-1));
    return LinearFunction1(std::move(r));
  }
  PerfSeries evaluate(const PerfSeries& t) const {
    PerfSeries acc = PerfSeries::zero(field());
    for (int k = 0; k <= trunc(); ++k) acc += a_[k] * t.frobenius(k);
    return acc;
  }

  /// Same function in the z^{q^m}/D_m basis (n = 0).
  MultiFunction to_multifunction() const {
    MultiFunction r(field(), 0, trunc(), 0);
    for (int k = 0; k <= trunc(); ++k) r.set({k}, a_[k] * carlitz_D(field(), k));
    return r;
  }
  static LinearFunction1 from_multifunction(const MultiFunction& f) {
    if (f.n() != 0) throw ParameterError("from_multifunction needs n = 0");
    std::vector<PerfSeries> a;
    for (int k = 0; k <= f.trunc_m(); ++k) a.push_back(f.coefficient({k}) * carlitz_D(f.field(), k).inverse());
    return LinearFunction1(std::move(a));
  }

 private:
  std::vector<PerfSeries> a_;
};

}  // namespace carlitz
