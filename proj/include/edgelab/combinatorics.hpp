#pragma once

#include <functional>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "freeprob.hpp"
#include "noncrossing.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace edgelab {

/// Walk with increments in {-1, 0, 1, ...}; an excursion when it stays >= 0 and ends at 0.
struct LukasiewiczWalk {
  std::vector<int> increments;

  int length() const { return static_cast<int>(increments.size()); }

  std::vector<long> heights() const {
    std::vector<long> h(increments.size() + 1, 0);
    for (std::size_t i = 0; i < increments.size(); ++i) h[i + 1] = h[i] + increments[i];
    return h;
  }

  bool valid() const {
    long h = 0;
    for (int x : increments) {
      if (x < -1) return false;
      h += x;
      if (h < 0) return false;
    }
    return h == 0;
  }

  int down_steps() const {
    return static_cast<int>(std::count(increments.begin(), increments.end(), -1));
  }

  bool operator==(const LukasiewiczWalk& o) const { return increments == o.increments; }
};

/// Block B with minimum t gives an up-step |B|-1 at time t; every other time is a down-step.
inline LukasiewiczWalk walk_from_partition(const NonCrossingPartition& p) {
  LukasiewiczWalk w;
  w.increments.assign(p.M, -1);
  for (const auto& b : p.blocks) w.increments[b.front() - 1] = static_cast<int>(b.size()) - 1;
  return w;
}

/// Inverse map: each down-step joins the most recently opened block that still has room.
inline NonCrossingPartition partition_from_walk(const LukasiewiczWalk& w) {
  if (!w.valid()) throw Error("partition_from_walk: not an excursion");
  NonCrossingPartition p;
  p.M = w.length();
  std::vector<std::pair<int, int>> open;  // (block index, slots left)
  for (int t = 1; t <= p.M; ++t) {
    int x = w.increments[t - 1];
    if (x >= 0) {
      p.blocks.push_back({t});
      if (x > 0) open.push_back({static_cast<int>(p.blocks.size()) - 1, x});
    } else {
      auto& top = open.back();
      p.blocks[top.first].push_back(t);
      if (--top.second == 0) open.pop_back();
    }
  }
  p.canonicalize();
  return p;
}

/// Depth-first enumeration of all excursions of length M.
inline void for_each_excursion(int M, const std::function<void(const LukasiewiczWalk&)>& sink,
                               int bound = kDefaultEnumerationBound) {
  if (M < 0) throw Error("negative walk length");
  if (M > bound) throw EnumerationTooLarge("W(" + std::to_string(M) + ") above enumeration bound");
  LukasiewiczWalk w;
  w.increments.reserve(M);
  std::function<void(int, int)> rec = [&](int h, int left) {
    if (left == 0) {
      sink(w);
      return;
    }
    // next height must be >= 0 and reachable back to 0 in left-1 steps
    for (int x = -1; h + x <= left - 1; ++x) {
      if (h + x < 0) continue;
      w.increments.push_back(x);
      rec(h + x, left - 1);
      w.increments.pop_back();
    }
  };
  rec(0, M);
}

inline std::vector<LukasiewiczWalk> enumerate_excursions(int M, int bound = kDefaultEnumerationBound) {
  std::vector<LukasiewiczWalk> out;
  for_each_excursion(M, [&](const LukasiewiczWalk& w) { out.push_back(w); }, bound);
  return out;
}

/// prod over non-down steps of kappa_{k+1}.
template <class KappaFn>
auto walk_weight_generic(const LukasiewiczWalk& w, KappaFn&& kappa) {
  using T = std::decay_t<decltype(kappa(1))>;
  T out = T(1);
  for (int x : w.increments)
    if (x >= 0) out = out * kappa(x + 1);
  return out;
}

inline Rational walk_weight(const LukasiewiczWalk& w, const CumulantSequence& k) {
  return walk_weight_generic(w, [&](int l) { return k(l); });
}

/// Step weights w_{-1} and w_k (k >= 0).
struct WeightedStepSystem {
  Rational w_down = 1;
  std::vector<Rational> up;  // up[k] = w_k

  Rational weight(int k) const {
    if (k == -1) return w_down;
    if (k < -1 || k >= static_cast<int>(up.size())) return 0;
    return up[k];
  }
  int max_step() const { return static_cast<int>(up.size()) - 1; }

  /// w_{-1} = 1/z, w_k = kappa_{k+1} z^k for k <= max_step.
  static WeightedStepSystem from_cumulants(const CumulantSequence& k, const Rational& z, int max_step) {
    WeightedStepSystem s;
    s.w_down = 1 / z;
    Rational zp = 1;
    for (int j = 0; j <= max_step; ++j, zp *= z) s.up.push_back(k(j + 1) * zp);
    return s;
  }
};

struct BallotResult {
  Rational Z;
  Rational Z_good;
};

namespace detail {

// All step sequences of length L from y0 to 0; `keep(height, time)` filters intermediate heights.
template <class Keep>
Rational sum_paths(long y0, int L, const WeightedStepSystem& s, Keep&& keep) {
  Rational total = 0;
  std::vector<Rational> prod(L + 1);
  prod[0] = 1;
  std::function<void(long, int)> rec = [&](long h, int t) {
    int left = L - t;
    if (left == 0) {
      if (h == 0) total += prod[t];
      return;
    }
    for (int x = -1; h + x <= left - 1; ++x) {
      if (x > s.max_step()) break;
      Rational w = s.weight(x);
      if (w == 0) continue;
      long nh = h + x;
      if (left - 1 > 0 && !keep(nh, t + 1)) continue;
      if (nh + static_cast<long>(left - 1) * std::max(s.max_step(), -1) < 0) continue;
      prod[t + 1] = prod[t] * w;
      rec(nh, t + 1);
    }
  };
  rec(y0, 0);
  return total;
}

template <class T>
std::vector<T> series_pow_naive(std::vector<T> f, unsigned long n, std::size_t degree) {
  std::vector<T> out(degree + 1, T(0));
  out[0] = 1;
  f.resize(degree + 1, T(0));
  while (n) {
    if (n & 1ul) out = series_mul(out, f, degree);
    n >>= 1;
    if (n) f = series_mul(f, f, degree);
  }
  return out;
}

}  // namespace detail

/// Z over all walks y0 -> 0 in L steps, Z_good over those strictly positive before step L.
inline BallotResult ballot_partition_functions(int y0, int L, const WeightedStepSystem& s,
                                               int bound = kDefaultEnumerationBound) {
  if (y0 < 0 || L < 1) throw Error("ballot: need y0 >= 0 and L >= 1");
  if (L > bound) throw EnumerationTooLarge("ballot enumeration above bound");
  BallotResult r;
  r.Z = detail::sum_paths(y0, L, s, [](long, int) { return true; });
  r.Z_good = y0 == 0 ? Rational(0) : detail::sum_paths(y0, L, s, [](long h, int) { return h > 0; });
  return r;
}

/// Z by coefficient extraction: [x^{-y0}] S(x)^L with S(x) = sum_k w_k x^k.
inline Rational ballot_series(int y0, int L, const WeightedStepSystem& s) {
  if (y0 > L) return 0;
  std::vector<Rational> g(s.up.size() + 1);
  g[0] = s.w_down;
  for (std::size_t k = 0; k < s.up.size(); ++k) g[k + 1] = s.up[k];
  auto p = detail::series_pow_naive(g, static_cast<unsigned long>(L), static_cast<std::size_t>(L - y0));
  return p[L - y0];
}

/// Total weight of walks H -> 0 in M steps that stay >= 0.
inline Rational bridge_partition_enum(int H, int M, const WeightedStepSystem& s,
                                      int bound = kDefaultEnumerationBound) {
  if (H < 0 || M < 0) throw Error("bridge: need H, M >= 0");
  if (M > bound) throw EnumerationTooLarge("bridge enumeration above bound");
  if (H > M) return 0;
  if (M == 0) return H == 0 ? Rational(1) : Rational(0);
  return detail::sum_paths(H, M, s, [](long h, int) { return h >= 0; });
}

/// Same quantity through the ballot identity: ((H+1)/(M+1)) [x^{-(H+1)}] S^{M+1} / w_{-1}.
inline Rational bridge_partition_series(int H, int M, const WeightedStepSystem& s) {
  if (H > M) return 0;
  if (s.w_down == 0) throw Error("bridge series needs w_{-1} != 0");
  return make_rational(H + 1, M + 1) * ballot_series(H + 1, M + 1, s) / s.w_down;
}

/// Series form in terms of V: ((H+1)/(M+1)) z^{-H} [u^{-1-H}] V(u)^{M+1}, steps weighted at z.
inline Rational bridge_partition_voiculescu(int H, int M, const CumulantSequence& k, const Rational& z) {
  if (H > M) return 0;
  std::vector<Rational> f(M + 1);
  f[0] = 1;
  for (int l = 1; l <= M; ++l) f[l] = k(l);
  auto p = series_pow(f, static_cast<unsigned long>(M + 1), static_cast<std::size_t>(M - H));
  return make_rational(H + 1, M + 1) * p[M - H] / pow(z, static_cast<unsigned>(H));
}

/// Free-start partition function [u^{-1}] V(u)^{L+1} / (1 - u/z)^2
/// = (L+1) * sum_H bridge(H, L) with steps weighted at z.
inline Rational free_start_series(const CumulantSequence& k, const Rational& z, int L) {
  std::vector<Rational> f(L + 1);
  f[0] = 1;
  for (int l = 1; l <= L; ++l) f[l] = k(l);
  auto p = series_pow(f, static_cast<unsigned long>(L + 1), static_cast<std::size_t>(L));
  Rational total = 0, zinv = 1 / z, zp = 1;
  for (int H = 0; H <= L; ++H, zp *= zinv) total += (H + 1) * zp * p[L - H];
  return total;
}

/// Number of cyclic rotations of `steps` whose path stays > -y0 before its last step,
/// where -y0 = sum(steps) < 0.
inline int count_good_rotations(const std::vector<int>& steps) {
  long total = std::accumulate(steps.begin(), steps.end(), 0L);
  if (total >= 0) throw Error("cycle count needs a negative step sum");
  int n = static_cast<int>(steps.size()), good = 0;
  for (int r = 0; r < n; ++r) {
    long h = 0;
    bool ok = true;
    for (int i = 0; i < n - 1 && ok; ++i) {
      h += steps[(r + i) % n];
      ok = h > total;
    }
    good += ok;
  }
  return good;
}

}  // namespace edgelab
