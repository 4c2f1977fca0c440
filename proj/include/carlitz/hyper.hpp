#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "carlitz/cauchy.hpp"
#include "carlitz/random.hpp"

namespace carlitz {

/// Parameters a_1..a_r ; b_1..b_s of rFs.
struct HyperParams {
  std::vector<PerfSeries> a;
  std::vector<PerfSeries> b;

  const FieldPtr& field() const {
    if (!a.empty()) return a.front().field();
    if (!b.empty()) return b.front().field();
    throw ParameterError("HyperParams without parameters carry no field");
  }
};

/// b ≠ [ν] for ν ∈ {0..ν_max, ∞}, ν_max chosen so later indices behave like ∞.
/// max_valuation reports max_ν val(b - [ν]) over all b.
inline AdmissibilityReport parameter_admissibility(const PerfSeries& b) {
  MultiPoly Q = MultiPoly::variable(b.field(), 1, 1) - MultiPoly::constant(b, 1);
  auto imax = recommend_imax(Q);
  return admissibility_check(Q, imax.value_or(30));
}

inline AdmissibilityReport hyper_admissibility(const HyperParams& p) {
  AdmissibilityReport all;
  bool first = true;
  for (const auto& b : p.b) {
    auto rep = parameter_admissibility(b);
    if (!rep.ok()) return rep;
    if (first || rep.max_valuation > all.max_valuation) all.max_valuation = rep.max_valuation;
    all.checked += rep.checked;
    first = false;
  }
  return all;
}

inline void require_admissible(const HyperParams& p) {
  auto rep = hyper_admissibility(p);
  if (rep.status == AdmissibilityReport::Status::Failure)
    throw RefusalError("inadmissible", "lower parameter equals the bracket " + tuple_to_string(rep.offending));
  if (rep.status == AdmissibilityReport::Status::Indeterminate)
    throw RefusalError("indeterminate", "lower parameter is within precision of the bracket " + tuple_to_string(rep.offending));
}

/// h_0 … h_M with h_m = Π⟨a_i⟩_m / (Π⟨b_j⟩_m D_m).
inline std::vector<PerfSeries> hyper_coeffs(const HyperParams& p, int M) {
  if (M < 0) throw ParameterError("hyper_coeffs: M must be non-negative");
  require_admissible(p);
  const FieldPtr& f = p.field();
  std::vector<PerfSeries> num(M + 1, PerfSeries::one(f)), den(M + 1, PerfSeries::one(f));
  for (const auto& a : p.a) {
    auto t = pochhammer_table(a, M);
    for (int m = 0; m <= M; ++m) num[m] = num[m] * t[m];
  }
  for (const auto& b : p.b) {
    auto t = pochhammer_table(b, M);
    for (int m = 0; m <= M; ++m) den[m] = den[m] * t[m];
  }
  std::vector<PerfSeries> h;
  for (int m = 0; m <= M; ++m) {
    if (num[m].is_exact_zero()) {
      h.push_back(PerfSeries::zero(f));
      continue;
    }
    h.push_back(num[m] * (den[m] * carlitz_D(f, m)).inverse());
  }
  return h;
}

inline PerfSeries hyper_coeff(const HyperParams& p, int m) { return hyper_coeffs(p, m).back(); }

/// Term valuations of rFs satisfy val(h_m z^{q^m}) >= (q^m - 1) κ + q^m val(z).
/// threshold = -κ: above it the bound increases strictly with m.
struct ConvergenceBound {
  Rational kappa;
  Rational threshold;

  Rational term_bound(std::int64_t q, int m, const Rational& zeta) const {
    return (q_power(q, m) - Rational(1)) * kappa + q_power(q, m) * zeta;
  }
};

inline ConvergenceBound convergence_bound(const HyperParams& p) {
  require_admissible(p);
  const FieldPtr& f = p.field();
  const std::int64_t q = f->q();
  Rational sum(0);
  for (const auto& a : p.a) {
    // val([k] - a) >= min(1, val a); a = 0 only helps.
    Rational alpha(1);
    if (!a.is_exact_zero() && a.lower_valuation() < alpha) alpha = a.lower_valuation();
    sum += alpha;
  }
  for (const auto& b : p.b) sum -= parameter_admissibility(b).max_valuation;
  ConvergenceBound cb;
  cb.kappa = sum * Rational(q, q - 1) - Rational(1, q - 1);
  cb.threshold = -cb.kappa;
  return cb;
}

/// Σ_{m<=M} h_m z^{q^m}, precision capped by the bound on the first omitted term.
inline PerfSeries hyper_eval(const HyperParams& p, const PerfSeries& z, int M) {
  const FieldPtr& f = p.field();
  if (!z.field()->compatible(*f)) throw ParameterError("mismatched field parameters");
  if (z.is_exact_zero()) return PerfSeries::zero(f);
  const auto cb = convergence_bound(p);
  const Rational zeta = z.lower_valuation();
  if (!(zeta > cb.threshold))
    throw RefusalError("convergence", "val(z) = " + zeta.to_string() + " is not above the threshold " +
                                          cb.threshold.to_string());
  const auto h = hyper_coeffs(p, M);
  PerfSeries acc = PerfSeries::zero(f);
  for (int m = 0; m <= M; ++m)
    if (!h[m].is_exact_zero()) acc += h[m] * z.frobenius(m);
  return acc.truncated(cb.term_bound(f->q(), M + 1, zeta));
}

// Thakur's family ---------------------------------------------------------------

/// Π(α_i)_m / (Π(β_j)_m D_m) with β_j >= 1.
inline PerfSeries hyper_thakur_coeff(const FieldPtr& f, const std::vector<int>& alphas, const std::vector<int>& betas,
                                     int m) {
  if (m < 0) throw ParameterError("hyper_thakur_coeff: m must be non-negative");
  for (std::size_t j = 0; j < betas.size(); ++j)
    if (betas[j] < 1)
      throw RefusalError("thakur-parameter", "beta_" + std::to_string(j + 1) + " = " + std::to_string(betas[j]) +
                                                 " gives a vanishing denominator symbol");
  PerfSeries num = PerfSeries::one(f);
  for (int a : alphas) num = num * pochhammer_thakur(f, a, m);
  if (num.is_exact_zero()) return num;
  PerfSeries den = carlitz_D(f, m);
  for (int b : betas) den = den * pochhammer_thakur(f, b, m);
  return num * den.inverse();
}

inline HyperParams thakur_as_params(const FieldPtr& f, const std::vector<int>& alphas, const std::vector<int>& betas) {
  HyperParams p;
  for (int a : alphas) p.a.push_back(bracket(f, -a));
  for (int b : betas) p.b.push_back(bracket(f, -b));
  return p;
}

struct ThakurCorrespondence {
  bool consistent = true;
  PerfSeries rho;
  int first_failure = -1;
};

/// ρ from m = 0, then c'_m = h_m ρ^{q^m} checked for 1 <= m <= M.
inline ThakurCorrespondence thakur_correspondence(const FieldPtr& f, const std::vector<int>& alphas,
                                                  const std::vector<int>& betas, int M) {
  const auto h = hyper_coeffs(thakur_as_params(f, alphas, betas), M);
  ThakurCorrespondence out{true, hyper_thakur_coeff(f, alphas, betas, 0) * h[0].inverse(), -1};
  for (int m = 1; m <= M; ++m) {
    PerfSeries lhs = hyper_thakur_coeff(f, alphas, betas, m);
    if (!lhs.equals_at_precision(h[m] * out.rho.frobenius(m))) {
      out.consistent = false;
      out.first_failure = m;
      break;
    }
  }
  return out;
}

// Equations -------------------------------------------------------------------------

enum class HyperForm { Product, Gauss };

/// Δ = τd in the single variable z.
inline OperatorSum delta_z_operator(const FieldPtr& f) {
  return OperatorSum::generator(f, 0, letter::tau) * OperatorSum::generator(f, 0, letter::d);
}

/// Π(Δ - a_i) - Π(Δ - b_j) d acting on functions of z.
inline OperatorSum hyper_product_operator(const FieldPtr& f, const std::vector<PerfSeries>& a,
                                          const std::vector<PerfSeries>& b) {
  const OperatorSum delta = delta_z_operator(f);
  OperatorSum P = OperatorSum::scalar(PerfSeries::one(f), 0), Q = P;
  for (const auto& ai : a) P = P * (delta - OperatorSum::scalar(ai, 0));
  for (const auto& bj : b) Q = Q * (delta - OperatorSum::scalar(bj, 0));
  return P - Q * OperatorSum::generator(f, 0, letter::d);
}

/// τ(1-τ)d² - (c - (a+b-[1])τ)d - ab.
inline OperatorSum hyper_gauss_operator(const PerfSeries& a, const PerfSeries& b, const PerfSeries& c) {
  const FieldPtr& f = a.field();
  const auto one = OperatorSum::scalar(PerfSeries::one(f), 0);
  const auto tau = OperatorSum::generator(f, 0, letter::tau);
  const auto d = OperatorSum::generator(f, 0, letter::d);
  return tau * (one - tau) * d * d -
         (OperatorSum::scalar(c, 0) - OperatorSum::scalar(a + b - bracket(f, 1), 0) * tau) * d -
         OperatorSum::scalar(a * b, 0);
}

/// Σ_{m<=M} coeff_m z^{q^m} stored in the z^{q^m}/D_m basis.
inline MultiFunction series_function(const FieldPtr& f, const std::vector<PerfSeries>& coeffs) {
  MultiFunction u(f, 0, static_cast<int>(coeffs.size()) - 1, 0);
  for (std::size_t m = 0; m < coeffs.size(); ++m) u.set({static_cast<int>(m)}, coeffs[m] * carlitz_D(f, static_cast<int>(m)));
  return u;
}

inline MultiFunction hyper_function(const HyperParams& p, int M) { return series_function(p.field(), hyper_coeffs(p, M)); }

inline MultiFunction hyper_residual(const HyperParams& p, int M, HyperForm form) {
  const FieldPtr& f = p.field();
  if (form == HyperForm::Gauss) {
    if (p.a.size() != 2 || p.b.size() != 1) throw ParameterError("gauss form needs r = 2, s = 1");
    return op_apply(hyper_gauss_operator(p.a[0], p.a[1], p.b[0]), hyper_function(p, M));
  }
  return op_apply(hyper_product_operator(f, p.a, p.b), hyper_function(p, M));
}

/// Thakur's equation with a_i = [-α_i], b_j = [-β_j] applied to his series.
inline MultiFunction hyper_thakur_residual(const FieldPtr& f, const std::vector<int>& alphas,
                                           const std::vector<int>& betas, int M) {
  std::vector<PerfSeries> c;
  for (int m = 0; m <= M; ++m) c.push_back(hyper_thakur_coeff(f, alphas, betas, m));
  const auto p = thakur_as_params(f, alphas, betas);
  return op_apply(hyper_product_operator(f, p.a, p.b), series_function(f, c));
}

// Contiguous relations -------------------------------------------------------------------

struct ContiguousResult {
  std::string id;
  bool holds = true;
  /// LHS - RHS: one entry for the symbol identities, one per coefficient for
  /// the function identities.
  std::vector<PerfSeries> differences;
};

inline const std::vector<std::string>& contiguous_ids() {
  static const std::vector<std::string> ids{"5.3", "5.4", "5.5", "5.6", "5.7", "5.8"};
  return ids;
}

/// Symbol identities take params.a[0] as a and index m. Function identities
/// take a = params.a[0], b = params.a[1], c = params.b[0] and check every
/// coefficient up to M = m.
inline ContiguousResult contiguous_check(const std::string& id, const HyperParams& params, int m) {
  if (m < 0) throw ParameterError("contiguous_check: index must be non-negative");
  if (params.a.empty()) throw ParameterError("contiguous_check needs a parameter a");
  const PerfSeries& a = params.a[0];
  const FieldPtr& f = a.field();
  ContiguousResult out{id, true, {}};
  auto finish = [&](PerfSeries diff) {
    out.holds = out.holds && diff.is_zero_at_precision();
    out.differences.push_back(std::move(diff));
  };
  auto poch = [](const PerfSeries& v, int k) { return pochhammer(v, k); };

  if (id == "5.3") {
    if (a.is_exact_zero()) throw RefusalError("side-condition", "identity 5.3 requires a != 0");
    finish(poch(shift_up(a), m) - a.frobenius(m).inverse() * (a - bracket(f, m)) * poch(a, m));
  } else if (id == "5.4") {
    finish(poch(a, m + 1) + a.frobenius(m + 1) * poch(shift_up(a), m).frobenius(1));
  } else if (id == "5.5" || id == "5.6") {
    if (m < 1) throw RefusalError("side-condition", "identity " + id + " requires m >= 1");
    const PerfSeries u = bracket(f, 1) + a.frobenius(1);
    const PerfSeries lhs = poch(shift_down(a), m);
    if (id == "5.5") {
      finish(lhs + u.frobenius(m) * poch(a, m - 1).frobenius(1));
    } else {
      const PerfSeries den = (bracket(f, m - 1) - a).frobenius(1);
      if (den.is_exact_zero()) throw RefusalError("side-condition", "identity 5.6 requires a != [m-1]");
      finish(lhs + u.frobenius(m) * den.inverse() * poch(a, m));
    }
  } else if (id == "5.7" || id == "5.8") {
    if (params.a.size() != 2 || params.b.size() != 1) throw ParameterError("identity " + id + " needs 2F1 parameters");
    const PerfSeries& b = params.a[1];
    const PerfSeries& c = params.b[0];
    const auto h = hyper_coeffs(params, m);
    if (id == "5.7") {
      const auto h1 = hyper_coeffs({{shift_up(a), b}, {c}}, m);
      const auto h2 = hyper_coeffs({{a, shift_up(b)}, {c}}, m);
      for (int k = 0; k <= m; ++k) finish(h1[k] * a.frobenius(k) - h2[k] * b.frobenius(k) - (a - b) * h[k]);
    } else {
      if (c.is_exact_zero()) throw RefusalError("side-condition", "identity 5.8 requires c != 0");
      const PerfSeries u = a.frobenius(1) + bracket(f, 1);
      if (u.is_exact_zero()) throw RefusalError("side-condition", "identity 5.8 requires a^q + [1] != 0");
      const auto hc = hyper_coeffs({{a, b}, {shift_up(c)}}, m);
      const auto ha = hyper_coeffs({{shift_down(a), b}, {c}}, m);
      const PerfSeries cinv = c.inverse(), uinv = u.inverse();
      for (int k = 0; k <= m; ++k) {
        PerfSeries v = h[k] - u * ha[k] * uinv.frobenius(k);
        if (k >= 1)
          v = v - h[k - 1].frobenius(1) +
              (c.frobenius(1) - b.frobenius(1)) * (hc[k - 1] * cinv.frobenius(k - 1)).frobenius(1);
        finish(v);
      }
    }
  } else {
    throw ParameterError("unknown identity '" + id + "'");
  }
  return out;
}

/// Random parameters suited to identity `id`: admissible lower parameters,
/// plus the side conditions of that identity.
inline HyperParams random_contiguous_params(const FieldPtr& f, const std::string& id, std::mt19937_64& rng) {
  RandomSeriesShape shape{3, -1, 3, 1};
  auto admissible = [](const PerfSeries& v) { return parameter_admissibility(v).ok(); };
  for (;;) {
    PerfSeries a = random_nonzero_series(f, rng, shape);
    if (id != "5.7" && id != "5.8") {
      if (id == "5.6" && !admissible(a)) continue;
      return {{a}, {}};
    }
    PerfSeries b = random_nonzero_series(f, rng, shape);
    PerfSeries c = random_nonzero_series(f, rng, shape);
    if (!admissible(c)) continue;
    if (id == "5.8" && (!admissible(shift_up(c)) || (a.frobenius(1) + bracket(f, 1)).is_exact_zero())) continue;
    return {{a, b}, {c}};
  }
}

/// Random admissible rFs parameters.
inline HyperParams random_admissible_params(const FieldPtr& f, int r, int s, std::mt19937_64& rng,
                                            const RandomSeriesShape& shape = {3, 0, 3, 1}) {
  HyperParams p;
  for (int i = 0; i < r; ++i) p.a.push_back(random_series(f, rng, shape));
  while (static_cast<int>(p.b.size()) < s) {
    PerfSeries b = random_series(f, rng, shape);
    if (parameter_admissibility(b).ok()) p.b.push_back(b);
  }
  return p;
}

}  // namespace carlitz
