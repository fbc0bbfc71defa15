#pragma once

#include <random>

#include "freeprob.hpp"

namespace edgelab {

inline Rational random_rational(std::mt19937_64& g, long num_max, long den_max, bool allow_negative = false) {
  std::uniform_int_distribution<long> num(allow_negative ? -num_max : 0, num_max), den(1, den_max);
  const long n = num(g);
  const long d = den(g);
  return make_rational(n, d);
}

/// Random limiting spec with nonnegative cumulants (checked over all l), up to max_components Laguerre parts.
inline EnsembleSpec random_spec(std::mt19937_64& g, int max_components = 3) {
  std::uniform_int_distribution<int> ncomp(0, max_components);
  while (true) {
    EnsembleSpec s;
    s.delta = random_rational(g, 5, 4);
    int k = ncomp(g);
    Rational a = 1 + random_rational(g, 3, 3);
    for (int i = 0; i < k; ++i) {
      Rational sign = (i > 0 && g() % 3 == 0) ? -1 : 1;
      s.components.push_back({sign * a, 1 + random_rational(g, 4, 3), std::nullopt});
      a *= make_rational(1 + static_cast<long>(g() % 3), 4);
    }
    if (s.delta == 0 && s.components.empty()) continue;
    if (first_negative_cumulant(s, CumulantKind::limiting())) continue;
    return s;
  }
}

}  // namespace edgelab
