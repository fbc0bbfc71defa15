#pragma once

#include <cstddef>
#include <vector>

namespace edgelab {

/// Truncated power series helpers. A series is its coefficient vector,
/// index = power of the variable.
template <class T>
std::vector<T> series_mul(const std::vector<T>& a, const std::vector<T>& b, std::size_t degree) {
  std::vector<T> out(degree + 1, T(0));
  for (std::size_t i = 0; i < a.size() && i <= degree; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= degree; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// f^n truncated at `degree`, by the J.C.P. Miller recurrence. Needs f[0] != 0.
template <class T>
std::vector<T> series_pow(const std::vector<T>& f, unsigned long n, std::size_t degree) {
  std::vector<T> b(degree + 1, T(0));
  T f0 = f.empty() ? T(0) : f[0];
  T p = 1;
  for (unsigned long i = 0; i < n; ++i) p *= f0;
  b[0] = p;
  for (std::size_t k = 1; k <= degree; ++k) {
    T acc = 0;
    for (std::size_t j = 1; j <= k && j < f.size(); ++j) {
      long c = static_cast<long>(j) * static_cast<long>(n + 1) - static_cast<long>(k);
      if (c == 0 || f[j] == 0) continue;
      acc += T(c) * f[j] * b[k - j];
    }
    b[k] = acc / (T(static_cast<long>(k)) * f0);
  }
  return b;
}

}  // namespace edgelab
