#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "combinatorics.hpp"
#include "edge.hpp"
#include "errors.hpp"
#include "freeprob.hpp"
#include "rng.hpp"

namespace edgelab {

/// Walker alias table over indices 0..n-1.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& p) {
    const std::size_t n = p.size();
    prob_.assign(n, 0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = p[i] * n;
      (scaled[i] < 1 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      std::size_t s = small.back(), l = large.back();
      small.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = scaled[l] + scaled[s] - 1;
      if (scaled[l] < 1) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1;
    for (auto i : small) prob_[i] = 1;
  }

  std::size_t size() const { return prob_.size(); }

  template <class G>
  std::size_t operator()(G& g) const {
    std::uniform_int_distribution<std::size_t> pick(0, prob_.size() - 1);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t i = pick(g);
    return u(g) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

/// Law of X: P(X = -1) = 1/(z V(z)), P(X = l) = kappa_{l+1} z^l / V(z) for l >= 0.
struct StepDistribution {
  std::vector<double> probabilities;  // index i <-> step i - 1
  double z = 0;
  double normalizer = 0;  // V(z)

  int l_max() const { return static_cast<int>(probabilities.size()) - 2; }
  double p(int step) const {
    int i = step + 1;
    return i >= 0 && i < static_cast<int>(probabilities.size()) ? probabilities[i] : 0.0;
  }
  double mean() const {
    double m = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) m += (static_cast<double>(i) - 1) * probabilities[i];
    return m;
  }
  double variance() const {
    double m = mean(), v = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      double d = static_cast<double>(i) - 1 - m;
      v += d * d * probabilities[i];
    }
    return v;
  }
  double sigma() const { return std::sqrt(variance()); }
  AliasTable alias() const { return AliasTable(probabilities); }
};

/// Step law of the weighted walk at z (default: the critical point of V for `kind`).
inline StepDistribution step_distribution(const EnsembleSpec& spec, CumulantKind kind = CumulantKind::limiting(),
                                          std::optional<double> z_opt = std::nullopt) {
  if (auto l = first_negative_cumulant(spec, kind)) throw NegativeCumulant(*l);
  VoiculescuTransform vt(spec, kind);
  const double z = z_opt ? *z_opt : critical_point(vt);
  if (!(z > 0) || !(z < vt.positive_pole())) throw Error("step law needs z in (0, 1/alpha_1)");
  const double V = vt.eval(z, 0);
  double q = 0;  // geometric ratio of the tail
  for (const auto& [a, w] : vt.terms()) q = std::max(q, std::abs(to_double(a)) * z);

  // kappa_{l+1} z^l = [l = 1] delta z + sum w alpha (alpha z)^l  (minus kappa_1 at l = 0 if centered)
  std::vector<double> wa, az;
  for (const auto& [a, w] : vt.terms()) {
    wa.push_back(to_double(w) * to_double(a));
    az.push_back(to_double(a) * z);
  }
  StepDistribution d;
  d.z = z;
  d.normalizer = V;
  d.probabilities.push_back(1.0 / (z * V));
  std::vector<double> powers(wa.size(), 1.0);
  double tail_scale = 0;
  for (double x : wa) tail_scale += std::abs(x);
  for (int l = 0;; ++l) {
    double t = 0;
    for (std::size_t i = 0; i < wa.size(); ++i) t += wa[i] * powers[i];
    if (l == 0) t = to_double(cumulant_value(spec, kind, 1));
    if (l == 1) t += to_double(spec.delta) * z;
    d.probabilities.push_back(std::max(0.0, t / V));
    for (std::size_t i = 0; i < wa.size(); ++i) powers[i] *= az[i];
    double tail = q > 0 ? tail_scale * std::pow(q, l + 1) / (1 - q) / V : 0;
    if (l >= 1 && tail < 1e-15) break;
    if (l > 100000) throw NoConvergence("step law tail does not decay");
  }
  double s = 0;
  for (double p : d.probabilities) s += p;
  for (double& p : d.probabilities) p /= s;
  return d;
}

// ---------------------------------------------------------------------------
// Excursions.

/// Weighted excursion of length M via the cycle lemma: M+1 i.i.d. steps conditioned on sum -1,
/// rotated to start after the first minimum, last step dropped.
template <class G>
LukasiewiczWalk sample_excursion(int M, const StepDistribution& dist, G& g) {
  if (M < 0) throw Error("M must be nonnegative");
  const int n = M + 1;
  const auto& p = dist.probabilities;
  long period = 0;  // gcd of (step + 1) over the support
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > 0) period = std::gcd(period, static_cast<long>(i));
  if (period == 0 ? M != 0 : M % period != 0) throw Error("no excursion of this length under the step law");
  std::vector<long> counts(p.size());
  while (true) {
    long left = n, sum = 0;
    double mass = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (left == 0 || mass <= 0) {
        counts[i] = 0;
        continue;
      }
      double q = std::min(1.0, p[i] / mass);
      long c = i + 1 == p.size() ? left : std::binomial_distribution<long>(left, q)(g);
      counts[i] = c;
      left -= c;
      mass -= p[i];
      sum += c * (static_cast<long>(i) - 1);
    }
    if (sum == -1) break;
  }
  std::vector<int> steps;
  steps.reserve(n);
  for (std::size_t i = 0; i < counts.size(); ++i) steps.insert(steps.end(), counts[i], static_cast<int>(i) - 1);
  std::shuffle(steps.begin(), steps.end(), g);
  long s = 0, best = 0;
  int arg = -1;  // first index attaining the minimum partial sum
  for (int i = 0; i < n; ++i) {
    s += steps[i];
    if (arg < 0 || s < best) {
      best = s;
      arg = i;
    }
  }
  std::rotate(steps.begin(), steps.begin() + arg + 1, steps.end());
  steps.pop_back();
  return LukasiewiczWalk{std::move(steps)};
}

/// Fraction of down-steps among increments with index in [floor(t1 M), floor(t2 M)).
inline double downstep_fraction(const LukasiewiczWalk& w, double t1, double t2) {
  if (!(0 < t1 && t1 < t2 && t2 < 1)) throw Error("need 0 < t1 < t2 < 1");
  const long M = w.length();
  long a = static_cast<long>(std::floor(t1 * M)), b = static_cast<long>(std::floor(t2 * M));
  if (b <= a) return 0;
  long downs = 0;
  for (long i = a; i < b; ++i) downs += w.increments[i] == -1;
  return static_cast<double>(downs) / (b - a);
}

struct ExcursionPath {
  enum class Kind { walk_rescaled, brownian };
  std::vector<double> values;  // on the grid i/n, i = 0..n
  Kind kind = Kind::brownian;

  int n() const { return static_cast<int>(values.size()) - 1; }
  double max() const { return *std::max_element(values.begin(), values.end()); }
  /// Trapezoid integral over [0, 1].
  double integral() const {
    std::vector<double> v(values);
    v.front() *= 0.5;
    v.back() *= 0.5;
    return pairwise_sum(v) / n();
  }
};

/// Heights E(k) + offset, k = 0..M, divided by sigma sqrt(M). offset = 1 measures heights from the
/// absorbing level -1, which removes the leading lattice bias for nearest-neighbour steps.
inline ExcursionPath rescale_walk(const LukasiewiczWalk& w, double sigma, double offset = 1.0) {
  ExcursionPath p;
  p.kind = ExcursionPath::Kind::walk_rescaled;
  const int M = w.length();
  p.values.resize(M + 1);
  const double scale = 1.0 / (sigma * std::sqrt(static_cast<double>(M)));
  long h = 0;
  p.values[0] = 0;
  for (int k = 1; k <= M; ++k) {
    h += w.increments[k - 1];
    p.values[k] = k == M ? 0.0 : (h + offset) * scale;
  }
  return p;
}

/// Standard Brownian excursion on the grid i/n as the norm of three independent Brownian bridges.
template <class G>
ExcursionPath sample_brownian_excursion(int n, G& g) {
  if (n < 2) throw Error("n must be >= 2");
  std::normal_distribution<double> nd(0, 1);
  const double sd = std::sqrt(1.0 / n);
  std::vector<double> sq(n + 1, 0.0), b(n + 1);
  for (int c = 0; c < 3; ++c) {
    b[0] = 0;
    for (int i = 1; i <= n; ++i) b[i] = b[i - 1] + sd * nd(g);
    const double end = b[n];
    for (int i = 0; i <= n; ++i) {
      double x = b[i] - end * i / n;
      sq[i] += x * x;
    }
  }
  ExcursionPath p;
  p.kind = ExcursionPath::Kind::brownian;
  p.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) p.values[i] = std::sqrt(sq[i]);
  p.values[0] = p.values[n] = 0;
  return p;
}

/// Exact one-time marginal of the standard excursion: |N(0, t(1-t) I_3)|.
template <class G>
double sample_excursion_marginal(double t, G& g) {
  std::normal_distribution<double> nd(0, 1);
  double s = 0;
  for (int c = 0; c < 3; ++c) {
    double x = nd(g);
    s += x * x;
  }
  return std::sqrt(t * (1 - t) * s);
}

struct LocalTimeProfile {
  double bin_width = 0;
  std::vector<double> l;  // l_y on bins [k h, (k+1) h)

  double total() const { return pairwise_sum(l) * bin_width; }
  /// \int l_y^2 dy.
  double square_integral() const {
    std::vector<double> s(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) s[i] = l[i] * l[i];
    return pairwise_sum(s) * bin_width;
  }
};

/// Occupation density of the piecewise-linear interpolation of the path.
inline LocalTimeProfile local_time(const ExcursionPath& path, double bin_width = 0) {
  const int n = path.n();
  const double top = path.max();
  if (bin_width <= 0) bin_width = top / std::sqrt(static_cast<double>(n));
  if (!(bin_width > 0)) throw Error("local time of a flat path");
  LocalTimeProfile prof;
  prof.bin_width = bin_width;
  const std::size_t nb = static_cast<std::size_t>(std::floor(top / bin_width)) + 1;
  std::vector<double> occ(nb, 0.0);
  const double dt = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    double a = path.values[i], b = path.values[i + 1];
    if (a > b) std::swap(a, b);
    std::size_t ka = std::min(nb - 1, static_cast<std::size_t>(a / bin_width));
    std::size_t kb = std::min(nb - 1, static_cast<std::size_t>(b / bin_width));
    if (ka == kb || b == a) {
      occ[ka] += dt;
      continue;
    }
    for (std::size_t k = ka; k <= kb; ++k) {
      double lo = std::max(a, k * bin_width), hi = std::min(b, (k + 1) * bin_width);
      if (k == kb) hi = b;
      if (hi > lo) occ[k] += dt * (hi - lo) / (b - a);
    }
  }
  prof.l.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) prof.l[k] = occ[k] / bin_width;
  return prof;
}

inline double local_time_functional(const ExcursionPath& path, double bin_width = 0) {
  return local_time(path, bin_width).square_integral();
}

struct MCOptions {
  std::uint64_t seed = 1;
  int threads = 1;
};

/// sqrt(2/pi) T^{-3/2} E[exp(-(T^{3/2}/2) \int e + (T^{3/2}/(2 beta)) \int l_y^2 dy)].
inline MCEstimate airy_laplace_first_moment(double T, double beta, std::size_t n_paths, int n_grid,
                                            MCOptions opt = {}) {
  if (!(T > 0) || !(beta > 0)) throw Error("T and beta must be positive");
  const double t32 = std::pow(T, 1.5);
  if (t32 / (2 * beta) > 2) throw VarianceGuard("T^{3/2}/(2 beta) > 2: Monte Carlo variance too large");
  const double pref = std::sqrt(2 / std::numbers::pi) / t32;
  auto v = run_samples(n_paths, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    auto p = sample_brownian_excursion(n_grid, g);
    double e = -0.5 * t32 * p.integral() + t32 / (2 * beta) * local_time_functional(p);
    return pref * std::exp(e);
  });
  return summarize(v, opt.seed);
}

/// E[\int e] over Brownian excursions on an n-point grid.
inline MCEstimate brownian_area(std::size_t n_paths, int n_grid, MCOptions opt = {}) {
  auto v = run_samples(n_paths, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    return sample_brownian_excursion(n_grid, g).integral();
  });
  return summarize(v, opt.seed);
}

/// E[\int e_M] over rescaled weighted excursions of length M.
inline MCEstimate walk_area(const StepDistribution& dist, int M, std::size_t n_paths, MCOptions opt = {},
                            double offset = 1.0) {
  const double sigma = dist.sigma();
  auto v = run_samples(n_paths, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    return rescale_walk(sample_excursion(M, dist, g), sigma, offset).integral();
  });
  return summarize(v, opt.seed);
}

/// Signature accepted by limiting_functional: (0, p) or single-partner |k| = 2.
struct LimitSignature {
  int k = 0;  // 0 or 2
  int p = 0;
};

/// (0,p): (sigma P_{-1} T^{3/2} / theta)^p E[(\int e)^p] / p!;  |k| = 2: -(sigma P_{-1} T^{3/2}) E[\int e].
inline MCEstimate limiting_functional(LimitSignature sig, const EdgeParameters& params, double T, double theta,
                                      std::size_t n_paths, int n_grid = 1024, MCOptions opt = {}) {
  if (!(sig.k == 0 || (sig.k == 2 && sig.p == 0)) || sig.p < 0)
    throw UnsupportedSignature("limiting functional only for (0,p) and |k|=2");
  const double c = params.sigma() * params.p_minus1 * std::pow(T, 1.5);
  if (sig.k == 0 && sig.p == 0) {
    MCEstimate e;
    e.mean = 1;
    e.n_samples = n_paths;
    e.seed = opt.seed;
    return e;
  }
  double fact = std::tgamma(sig.p + 1.0);
  auto v = run_samples(n_paths, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    double a = sample_brownian_excursion(n_grid, g).integral();
    if (sig.k == 2) return -c * a;
    return std::pow(c / theta * a, sig.p) / fact;
  });
  return summarize(v, opt.seed);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov.

struct KSResult {
  double statistic = 0;
  double p_value = 1;
  double critical_1pct = 0;
  bool below_critical() const { return statistic < critical_1pct; }
};

/// Asymptotic Kolmogorov tail Q(x) = 2 sum (-1)^{k-1} e^{-2 k^2 x^2}.
inline double kolmogorov_q(double x) {
  if (x < 0.2) return 1;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    double t = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? 2 : -2) * t;
    if (t < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

inline KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error("KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  KSResult r;
  r.statistic = d;
  const double ne = na * nb / (na + nb), sq = std::sqrt(ne);
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  r.critical_1pct = 1.628 / sq;
  return r;
}

/// KS between e_M(t) (rescaled walk marginal) and the exact excursion marginal at t.
/// Lattice span of the walk at a fixed time: gcd of differences between support points.
inline long lattice_span(const StepDistribution& dist) {
  long span = 0, first = -1;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    if (dist.probabilities[i] <= 0) continue;
    if (first < 0) first = static_cast<long>(i);
    else span = std::gcd(span, static_cast<long>(i) - first);
  }
  return std::max(span, 1L);
}

/// KS of the rescaled walk at time t against the excursion marginal. With `smooth`, each walk
/// value is spread uniformly over its lattice cell, removing the O(span/sqrt(M)) atom effect.
inline KSResult clt_marginal_check(const StepDistribution& dist, int M, double t, std::size_t n_samples,
                                   MCOptions opt = {}, double offset = 1.0, bool smooth = true) {
  if (!(0 < t && t < 1)) throw Error("need 0 < t < 1");
  const double scale = 1.0 / (dist.sigma() * std::sqrt(static_cast<double>(M)));
  const long k = static_cast<long>(std::floor(t * M));
  const double span = static_cast<double>(lattice_span(dist));
  auto walk = run_samples(n_samples, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    auto w = sample_excursion(M, dist, g);
    long h = 0;
    for (long i = 0; i < k; ++i) h += w.increments[i];
    double jitter = smooth ? span * (std::uniform_real_distribution<double>(0, 1)(g) - 0.5) : 0.0;
    return (h + offset + jitter) * scale;
  });
  auto bm = run_samples(n_samples, splitmix64(opt.seed ^ 0x5bd1e995ULL), opt.threads,
                        [&](std::size_t, Rng& g) { return sample_excursion_marginal(static_cast<double>(k) / M, g); });
  return ks_two_sample(std::move(walk), std::move(bm));
}

// ---------------------------------------------------------------------------
// Tails and survival.

struct TailRow {
  double h = 0;
  double probability = 0;
  std::size_t count = 0;
};

/// Empirical P[max E > h sqrt(M)] for h in {0, 0.5, ..., 4}.
inline std::vector<TailRow> max_tail_curve(const StepDistribution& dist, int M, std::size_t n_samples,
                                           MCOptions opt = {}) {
  auto maxima = run_samples(n_samples, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    auto w = sample_excursion(M, dist, g);
    long h = 0, best = 0;
    for (int x : w.increments) best = std::max(best, h += x);
    return static_cast<double>(best);
  });
  std::vector<TailRow> rows;
  const double root = std::sqrt(static_cast<double>(M));
  for (int i = 0; i <= 8; ++i) {
    TailRow r;
    r.h = 0.5 * i;
    for (double m : maxima) r.count += m > r.h * root || i == 0;
    r.probability = static_cast<double>(r.count) / n_samples;
    rows.push_back(r);
  }
  return rows;
}

/// Least-squares line y = a + b x with coefficient of determination.
struct LinearFit {
  double intercept = 0, slope = 0, r2 = 0;
  std::size_t points = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1;
  return f;
}

/// sqrt(L) P[S_k <= 0 for k <= L], i.e. the reversed walk never goes below 0.
inline MCEstimate survival_mc(const StepDistribution& dist, long L, std::size_t n_walks, MCOptions opt = {}) {
  const AliasTable table = dist.alias();
  const double root = std::sqrt(static_cast<double>(L));
  auto v = run_samples(n_walks, opt.seed, opt.threads, [&](std::size_t, Rng& g) {
    long s = 0;
    for (long k = 0; k < L; ++k) {
      s += static_cast<long>(table(g)) - 1;
      if (s > 0) return 0.0;
    }
    return root;
  });
  return summarize(v, opt.seed);
}

}  // namespace edgelab
