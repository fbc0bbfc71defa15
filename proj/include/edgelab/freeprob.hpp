#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "noncrossing.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace edgelab {

enum class Centering { uncentered, centered };

/// One Laguerre summand alpha * W. Limiting specs carry gamma, finite-N specs carry L.
struct Component {
  Rational alpha;
  std::optional<Rational> gamma;
  std::optional<long> L;
};

struct EnsembleSpec {
  Rational delta = 0;
  std::vector<Component> components;
  Centering centering = Centering::uncentered;

  bool pure_gaussian() const { return components.empty(); }

  void validate() const {
    if (delta < 0) throw SpecError("delta must be nonnegative");
    for (std::size_t i = 0; i < components.size(); ++i) {
      const auto& c = components[i];
      if (c.alpha == 0) throw SpecError("alpha must be nonzero");
      if (!c.gamma && !c.L) throw SpecError("component needs gamma or L");
      if (c.gamma && *c.gamma <= 0) throw SpecError("gamma must be positive");
      if (c.L && *c.L <= 0) throw SpecError("L must be a positive integer");
      if (i > 0 && abs(components[i - 1].alpha) <= abs(c.alpha))
        throw SpecError("need |alpha_1| > |alpha_2| > ... (strict)");
    }
    if (delta == 0 && components.empty()) throw SpecError("empty spec: delta = 0 and no components");
  }
};

inline EnsembleSpec semicircle_spec(const Rational& delta = 1) {
  EnsembleSpec s;
  s.delta = delta;
  return s;
}

inline EnsembleSpec mp_spec(const Rational& gamma, const Rational& alpha = 1) {
  EnsembleSpec s;
  s.components.push_back({alpha, gamma, std::nullopt});
  return s;
}

/// Limiting (N = infinity) or finite-N cumulants.
struct CumulantKind {
  std::optional<long> N;
  static CumulantKind limiting() { return {}; }
  static CumulantKind finite(long n) { return {n}; }
  bool is_limiting() const { return !N.has_value(); }
};

/// L_i(N): the given L, or ceil(gamma N).
inline long component_size(const Component& c, long N) {
  if (c.L) return *c.L;
  Rational x = *c.gamma * N;
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q.get_si();
}

/// gamma_i (limiting) or L_i(N)/N (finite).
inline Rational component_weight(const Component& c, const CumulantKind& kind) {
  if (kind.is_limiting()) {
    if (!c.gamma) throw SpecError("limiting cumulants need gamma, component only has L");
    return *c.gamma;
  }
  long N = *kind.N;
  if (N < 1) throw SpecError("N must be positive");
  long L = component_size(c, N);
  if (L < N) throw SpecError("finite-N use needs L_i >= N (gamma_i(N) >= 1)");
  return make_rational(L, N);
}

/// Closed-form kappa_l = delta [l = 2] + sum alpha_i^l w_i (kappa_1 = 0 when centered).
inline Rational cumulant_value(const EnsembleSpec& spec, const CumulantKind& kind, int l) {
  if (l < 1) throw Error("cumulant index starts at 1");
  if (l == 1 && spec.centering == Centering::centered) return 0;
  Rational k = l == 2 ? spec.delta : Rational(0);
  for (const auto& c : spec.components) k += pow(c.alpha, static_cast<unsigned>(l)) * component_weight(c, kind);
  return k;
}

/// First index l with kappa_l < 0 (over all l), if any.
inline std::optional<int> first_negative_cumulant(const EnsembleSpec& spec, const CumulantKind& kind) {
  if (spec.components.empty()) return std::nullopt;
  const auto& lead = spec.components.front();
  double a1 = std::abs(to_double(lead.alpha));
  double w1 = to_double(component_weight(lead, kind));
  double rest = 0, ratio = 0;
  for (std::size_t i = 1; i < spec.components.size(); ++i) {
    rest += to_double(component_weight(spec.components[i], kind));
    ratio = std::max(ratio, std::abs(to_double(spec.components[i].alpha)) / a1);
  }
  // beyond l_star the leading term dominates in absolute value
  int l_star = 3;
  if (rest > 0 && ratio > 0) l_star = std::max(3, static_cast<int>(std::ceil(std::log(w1 / rest) / std::log(ratio))) + 2);
  l_star = std::min(l_star, 4096);
  for (int l = 1; l <= l_star + 1; ++l)
    if (cumulant_value(spec, kind, l) < 0) return l;
  return std::nullopt;
}

/// Exact free cumulants kappa_1..kappa_max (stored), with closed-form access beyond.
class CumulantSequence {
 public:
  CumulantSequence() = default;

  CumulantSequence(const EnsembleSpec& spec, CumulantKind kind, int max_index)
      : spec_(spec), kind_(kind) {
    spec.validate();
    if (max_index < 1) throw Error("max_index must be >= 1");
    values_.reserve(max_index);
    for (int l = 1; l <= max_index; ++l) {
      Rational k = cumulant_value(spec, kind, l);
      if (k < 0) throw NegativeCumulant(l);
      values_.push_back(k);
    }
  }

  /// Arbitrary cumulant values, kappa[0] = kappa_1; no spec behind them.
  static CumulantSequence from_values(std::vector<Rational> kappa) {
    CumulantSequence s;
    s.values_ = std::move(kappa);
    return s;
  }

  int max_index() const { return static_cast<int>(values_.size()); }
  const CumulantKind& kind() const { return kind_; }
  const std::optional<EnsembleSpec>& spec() const { return spec_; }
  const std::vector<Rational>& values() const { return values_; }

  /// kappa_l, 1-based. Beyond max_index falls back to the closed form.
  Rational operator()(int l) const {
    if (l >= 1 && l <= max_index()) return values_[l - 1];
    if (!spec_) throw Error("cumulant index " + std::to_string(l) + " beyond explicit values");
    return cumulant_value(*spec_, kind_, l);
  }

  CumulantSequence extended(int max_index) const {
    if (!spec_) {
      if (max_index <= this->max_index()) return *this;
      throw Error("cannot extend explicit cumulants");
    }
    return CumulantSequence(*spec_, kind_, max_index);
  }

 private:
  std::optional<EnsembleSpec> spec_;
  CumulantKind kind_;
  std::vector<Rational> values_;
};

inline CumulantSequence cumulants(const EnsembleSpec& spec, CumulantKind kind, int max_index) {
  return CumulantSequence(spec, kind, max_index);
}

/// V(z) = 1/z + delta z + sum w_i alpha_i/(1 - alpha_i z)  (minus kappa_1 when centered).
class VoiculescuTransform {
 public:
  VoiculescuTransform(const EnsembleSpec& spec, CumulantKind kind) : spec_(spec), kind_(kind) {
    spec.validate();
    delta_ = spec.delta;
    for (const auto& c : spec.components) {
      Rational w = component_weight(c, kind);
      terms_.push_back({c.alpha, w});
      kappa1_ += c.alpha * w;
    }
    if (spec.centering == Centering::uncentered) kappa1_ = 0;
  }

  const EnsembleSpec& spec() const { return spec_; }
  const CumulantKind& kind() const { return kind_; }
  const Rational& delta() const { return delta_; }
  /// (alpha_i, weight_i) pairs.
  const std::vector<std::pair<Rational, Rational>>& terms() const { return terms_; }

  CumulantSequence cumulants(int max_index) const { return CumulantSequence(spec_, kind_, max_index); }

  /// Right end of the interval (0, 1/alpha_max) on which V is analytic; +inf without positive alpha.
  double positive_pole() const {
    double best = INFINITY;
    for (const auto& [a, w] : terms_)
      if (a > 0) best = std::min(best, 1.0 / to_double(a));
    return best;
  }

  /// Exact evaluation of the `order`-th derivative, order in 0..3.
  Rational eval(const Rational& z, int order) const {
    check_order(order);
    if (z == 0) throw PoleEvaluation("V has a pole at z = 0");
    for (const auto& [a, w] : terms_)
      if (a * z == 1) throw PoleEvaluation("V has a pole at z = 1/alpha");
    return eval_generic<Rational>(z, order);
  }

  double eval(double z, int order) const {
    check_order(order);
    if (z == 0) throw PoleEvaluation("V has a pole at z = 0");
    return eval_generic<double>(z, order);
  }

  std::complex<double> eval(std::complex<double> z, int order) const {
    check_order(order);
    if (z == 0.0) throw PoleEvaluation("V has a pole at z = 0");
    return eval_generic<std::complex<double>>(z, order);
  }

  /// Truncated Laurent form 1/z + sum_{l <= max_l} kappa_l z^{l-1}.
  double eval_series(double z, int max_l) const {
    double s = 1.0 / z, zp = 1.0;
    for (int l = 1; l <= max_l; ++l, zp *= z) s += to_double(cumulant_value(spec_, kind_, l)) * zp;
    return s;
  }

 private:
  static void check_order(int order) {
    if (order < 0 || order > 3) throw Error("derivative order must be in 0..3");
  }

  template <class T>
  T eval_generic(const T& z, int order) const {
    static const long fact[] = {1, 1, 2, 6};
    T zk = z;
    for (int i = 0; i < order; ++i) zk *= z;
    T v = T(fact[order] * (order % 2 ? -1 : 1)) / zk;
    if (order == 0) v += conv<T>(delta_) * z - conv<T>(kappa1_);
    if (order == 1) v += conv<T>(delta_);
    for (const auto& [a, w] : terms_) {
      T aa = conv<T>(a);
      T den = T(1) - aa * z, d = den;
      T num = conv<T>(w) * aa * T(fact[order]);
      for (int i = 0; i < order; ++i) {
        d *= den;
        num *= aa;
      }
      v += num / d;
    }
    return v;
  }

  template <class T>
  static T conv(const Rational& r) {
    if constexpr (std::is_same_v<T, Rational>) return r;
    else return T(to_double(r));
  }

  EnsembleSpec spec_;
  CumulantKind kind_;
  Rational delta_ = 0, kappa1_ = 0;
  std::vector<std::pair<Rational, Rational>> terms_;
};

inline VoiculescuTransform voiculescu(const EnsembleSpec& spec, CumulantKind kind = CumulantKind::limiting()) {
  return VoiculescuTransform(spec, kind);
}

template <class Z>
auto voiculescu_eval(const VoiculescuTransform& vt, const Z& z, int order) {
  return vt.eval(z, order);
}

/// m_M = sum over NC(M) of prod kappa_{|B|}; `kappa(l)` returns any ring element.
template <class KappaFn>
auto moment_nc_generic(KappaFn&& kappa, int M, int bound = kDefaultEnumerationBound) {
  using T = std::decay_t<decltype(kappa(1))>;
  std::map<std::vector<int>, long> types;
  for_each_nc(M, [&](const NonCrossingPartition& p) {
    std::vector<int> sizes;
    for (const auto& b : p.blocks) sizes.push_back(static_cast<int>(b.size()));
    std::sort(sizes.begin(), sizes.end());
    ++types[sizes];
  }, bound);
  T total = T(0);
  for (const auto& [sizes, count] : types) {
    T term = T(count);
    for (int s : sizes) term = term * kappa(s);
    total = total + term;
  }
  return total;
}

inline Rational moment_nc(const CumulantSequence& k, int M, int bound = kDefaultEnumerationBound) {
  if (M < 1) throw Error("moment order must be positive");
  return moment_nc_generic([&](int l) { return k(l); }, M, bound);
}

/// m_M = [z^{-1}] V^{M+1} / (M+1) = [z^M] (1 + sum kappa_l z^l)^{M+1} / (M+1).
inline Rational moment_coefficient(const CumulantSequence& k, int M) {
  if (M < 1) throw Error("moment order must be positive");
  std::vector<Rational> f(M + 1);
  f[0] = 1;
  for (int l = 1; l <= M; ++l) f[l] = k(l);
  auto p = series_pow(f, static_cast<unsigned long>(M + 1), static_cast<std::size_t>(M));
  return p[M] / (M + 1);
}

}  // namespace edgelab
