#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "carlitz/series.hpp"

namespace carlitz {

/// Shape of random exact series: up to `max_terms` terms with exponents
/// k / q^dexp, k in [lo * q^dexp, hi * q^dexp].
struct RandomSeriesShape {
  int max_terms = 3;
  int lo = 0;
  int hi = 3;
  int dexp = 1;
};

inline PerfSeries random_series(const FieldPtr& f, std::mt19937_64& rng, const RandomSeriesShape& shape = {}) {
  const std::int64_t q = f->q();
  std::int64_t scale = 1;
  for (int i = 0; i < shape.dexp; ++i) scale *= q;
  std::uniform_int_distribution<std::int64_t> exp_d(shape.lo * scale, shape.hi * scale);
  std::uniform_int_distribution<std::uint32_t> coef_d(1, f->order() - 1);
  std::uniform_int_distribution<int> count_d(1, shape.max_terms);
  PerfSeries s = PerfSeries::zero(f);
  const int terms = count_d(rng);
  for (int t = 0; t < terms; ++t) s += PerfSeries::monomial(f, QExponent(exp_d(rng), scale), coef_d(rng));
  return s;
}

/// Non-zero variant.
inline PerfSeries random_nonzero_series(const FieldPtr& f, std::mt19937_64& rng, const RandomSeriesShape& shape = {}) {
  for (;;) {
    PerfSeries s = random_series(f, rng, shape);
    if (!s.is_exact_zero()) return s;
  }
}

}  // namespace carlitz
