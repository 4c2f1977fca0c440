#pragma once

#include <random>

#include "carlitz/carlitz.hpp"

namespace testutil {

using namespace carlitz;

inline MultiFunction random_function(const FieldPtr& f, int n, int tm, int ti, std::mt19937_64& rng,
                                     RandomSeriesShape shape = {2, -1, 2, 1}) {
  MultiFunction u(f, n, tm, ti);
  std::bernoulli_distribution keep(0.5);
  auto fill = [&](SlotIndex idx) {
    if (u.shape_ok(idx) && keep(rng)) u.set(idx, random_series(f, rng, shape));
  };
  if (n == 0) {
    for (int m = 0; m <= tm; ++m) fill({m});
  } else if (n == 1) {
    for (int m = 0; m <= tm; ++m)
      for (int i = 0; i <= ti; ++i) fill({m, i});
  } else {
    for (int m = 0; m <= tm; ++m)
      for (int i = 0; i <= ti; ++i)
        for (int j = 0; j <= ti; ++j) fill({m, i, j});
  }
  return u;
}

/// Random word of at most max_len letters, with a scalar inserted between
/// letters now and then.
inline OperatorSum random_word(const FieldPtr& f, int n, int max_len, std::mt19937_64& rng, bool scalars = true) {
  std::uniform_int_distribution<int> len(0, max_len), letter(0, n + 1);
  std::bernoulli_distribution put_scalar(scalars ? 0.3 : 0.0);
  OperatorWord w;
  const int L = len(rng);
  for (int k = 0; k < L; ++k) {
    if (put_scalar(rng)) w.factors.emplace_back(random_nonzero_series(f, rng, {2, -1, 2, 1}));
    w.factors.emplace_back(letter(rng));
  }
  return OperatorSum{f, n, {{random_nonzero_series(f, rng, {2, 0, 2, 1}), w}}};
}

inline OperatorSum random_expr(const FieldPtr& f, int n, int terms, int max_len, std::mt19937_64& rng) {
  OperatorSum s = OperatorSum::zero(f, n);
  for (int t = 0; t < terms; ++t) s = s + random_word(f, n, max_len, rng);
  return s;
}

}  // namespace testutil
