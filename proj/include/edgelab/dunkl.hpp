#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "freeprob.hpp"
#include "rational.hpp"
#include "symbolic.hpp"

namespace edgelab {

inline constexpr int kMaxDunklVars = 8;

/// Prefactor used for the degree-lowering step of the main variable.
///   exact      : theta * #{j != main : deg z_j < deg z_main} / N  (the true Dunkl action)
///   counting   : theta * (N - #{j != main : deg z_j >= deg z_main}) / N
///   simplified : theta
enum class LowerConvention { exact, counting, simplified };

inline const char* to_string(LowerConvention c) {
  switch (c) {
    case LowerConvention::exact: return "exact";
    case LowerConvention::counting: return "counting";
    default: return "simplified";
  }
}

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(const KappaPoly& p) { return p.is_zero(); }

/// Coefficient ring data: Raise(l) weight kappa_l(N) theta^{-(l-1)} and theta itself.
template <class Coef>
struct DunklRing {
  long N = 1;
  std::function<Coef(int)> raise;
  Coef theta;
};

inline DunklRing<Rational> numeric_ring(const CumulantSequence& kappa, long N, const Rational& theta) {
  if (N < 1 || N > kMaxDunklVars) throw Error("Dunkl engine supports 1 <= N <= 8");
  if (theta <= 0) throw Error("theta must be positive");
  DunklRing<Rational> r;
  r.N = N;
  r.theta = theta;
  r.raise = [kappa, theta](int l) -> Rational { return kappa(l) / pow(theta, static_cast<unsigned>(l - 1)); };
  return r;
}

/// kappa_l and theta kept as symbols; N concrete.
inline DunklRing<KappaPoly> symbolic_ring(long N) {
  if (N < 1 || N > kMaxDunklVars) throw Error("Dunkl engine supports 1 <= N <= 8");
  DunklRing<KappaPoly> r;
  r.N = N;
  r.theta = KappaPoly::theta(1);
  r.raise = [](int l) -> KappaPoly { return KappaPoly::kappa(l) * KappaPoly::theta(1 - l); };
  return r;
}

/// Weird-jump signature: k[i] = Swap steps with the i-th distinct partner variable, p = Partial steps.
struct Signature {
  std::vector<int> k;
  int p = 0;
  auto operator<=>(const Signature&) const = default;

  int swaps() const {
    int s = 0;
    for (int x : k) s += x;
    return s;
  }
  std::string str() const {
    std::string s = "(k=[";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + "], p=" + std::to_string(p) + ")";
  }
};

template <class Coef>
struct DunklExpansionT {
  long N = 1;
  Rational theta = 0;  // 0 when theta is symbolic
  int M = 0;
  int main_var = 0;
  LowerConvention convention = LowerConvention::exact;
  std::map<Signature, Coef> ledger;
  /// (signature, parity of negative-branch swaps) refinement, for sign audits.
  std::map<std::pair<Signature, int>, Coef> sign_audit;
  Coef total = Coef(0);  // constant term of (N^{-1} D_main)^M G

  Coef class_value(const Signature& s) const {
    auto it = ledger.find(s);
    return it == ledger.end() ? Coef(0) : it->second;
  }

  /// Class value per ordered choice of distinct partner variables.
  Coef per_choice(const Signature& s) const {
    Rational ways = 1;
    for (std::size_t i = 0; i < s.k.size(); ++i) ways *= static_cast<long>(N - 1 - static_cast<long>(i));
    if (ways == 0) return Coef(0);
    return class_value(s) * Rational(1 / ways);
  }

  /// E[p_M(lambda)] = N^{M+1} * total (meaningful under the exact convention).
  Coef moment() const {
    Rational f = pow(Rational(N), static_cast<unsigned>(M + 1));
    return total * f;
  }
};

using DunklExpansion = DunklExpansionT<Rational>;
using SymbolicDunklExpansion = DunklExpansionT<KappaPoly>;

namespace detail {

struct DState {
  std::array<std::uint8_t, kMaxDunklVars> e{};
  std::array<std::int8_t, kMaxDunklVars> slot{};
  std::array<std::uint8_t, kMaxDunklVars> k{};
  std::uint8_t n = 0, p = 0, neg = 0;
  auto operator<=>(const DState&) const = default;

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
};

template <class Coef>
void accumulate(std::map<DState, Coef>& m, const DState& s, const std::type_identity_t<Coef>& c) {
  if (is_zero(c)) return;
  auto it = m.find(s);
  if (it == m.end()) {
    m.emplace(s, c);
    return;
  }
  it->second = it->second + c;
  if (is_zero(it->second)) m.erase(it);
}

}  // namespace detail

/// Expands (N^{-1} D_main)^M G at z = 0 term by term, keeping the (k, p) ledger.
template <class Coef>
DunklExpansionT<Coef> expand_dunkl(const DunklRing<Coef>& ring, int M, LowerConvention conv, int main_var = 0,
                                   std::size_t budget = 4'000'000) {
  using detail::DState;
  const long N = ring.N;
  if (M < 0) throw Error("M must be nonnegative");
  if (main_var < 0 || main_var >= N) throw Error("main variable out of range");
  const Rational invN(make_rational(1, N));
  std::vector<Coef> raise(M + 2, Coef(0));
  for (int l = 1; l <= M + 1; ++l) raise[l] = ring.raise(l);
  const Coef swap_c = ring.theta * invN;

  std::map<DState, Coef> cur;
  DState start;
  start.slot.fill(-1);
  cur.emplace(start, Coef(1));
  for (int t = 1; t <= M; ++t) {
    const int r = M - t;  // steps left after this one
    std::map<DState, Coef> nxt;
    for (const auto& [s, c] : cur) {
      const int d = s.degree();
      const int pm = s.e[main_var];
      for (int l = 1; d + l - 1 <= r; ++l) {
        if (is_zero(raise[l])) continue;
        DState u = s;
        u.e[main_var] = static_cast<std::uint8_t>(pm + l - 1);
        detail::accumulate(nxt, u, c * raise[l]);
      }
      if (d - 1 > r || pm == 0 && d == 0) continue;
      if (pm >= 1) {
        long below = 0, at_or_above = 0;
        for (int j = 0; j < N; ++j) {
          if (j == main_var) continue;
          (s.e[j] < pm ? below : at_or_above) += 1;
        }
        long cnt = conv == LowerConvention::exact ? below : conv == LowerConvention::counting ? N - at_or_above : N;
        DState u = s;
        u.e[main_var] = static_cast<std::uint8_t>(pm - 1);
        if (cnt) detail::accumulate(nxt, u, c * ring.theta * Rational(make_rational(cnt, N)));
        DState v = u;
        v.p = static_cast<std::uint8_t>(s.p + 1);
        detail::accumulate(nxt, v, c * Rational(make_rational(pm, N)));
      }
      for (int j = 0; j < N; ++j) {
        if (j == main_var) continue;
        const int q = s.e[j];
        if (pm == q) continue;
        DState base = s;
        if (base.slot[j] < 0) base.slot[j] = static_cast<std::int8_t>(base.n++);
        base.k[base.slot[j]]++;
        if (pm > q) {
          for (int a = 1; a <= pm - q - 1; ++a) {
            DState u = base;
            u.e[main_var] = static_cast<std::uint8_t>(pm - 1 - a);
            u.e[j] = static_cast<std::uint8_t>(q + a);
            detail::accumulate(nxt, u, c * swap_c);
          }
        } else {
          base.neg ^= 1;
          for (int a = 0; a <= q - pm - 1; ++a) {
            DState u = base;
            u.e[main_var] = static_cast<std::uint8_t>(pm + a);
            u.e[j] = static_cast<std::uint8_t>(q - 1 - a);
            detail::accumulate(nxt, u, Coef(0) - c * swap_c);
          }
        }
      }
    }
    if (nxt.size() > budget) throw TermBudgetExceeded("Dunkl expansion exceeded the term budget");
    cur.swap(nxt);
  }

  DunklExpansionT<Coef> out;
  out.N = N;
  out.M = M;
  out.main_var = main_var;
  out.convention = conv;
  for (const auto& [s, c] : cur) {
    if (s.degree() != 0) continue;
    Signature sig;
    sig.k.assign(s.k.begin(), s.k.begin() + s.n);
    sig.p = s.p;
    auto& slot = out.ledger[sig];
    slot = slot + c;
    auto& audit = out.sign_audit[{sig, s.neg}];
    audit = audit + c;
    out.total = out.total + c;
  }
  for (auto it = out.ledger.begin(); it != out.ledger.end();)
    it = is_zero(it->second) ? out.ledger.erase(it) : std::next(it);
  return out;
}

/// Finite-N cumulants kappa_l(N), l <= max_index.
inline CumulantSequence finite_cumulants(const EnsembleSpec& spec, long N, int max_index) {
  return CumulantSequence(spec, CumulantKind::finite(N), std::max(1, max_index));
}

/// E[p_M(lambda)] with its (k, p) ledger; exact convention unless told otherwise.
inline DunklExpansion dunkl_moment(const EnsembleSpec& spec, long N, const Rational& theta, int M,
                                   LowerConvention conv = LowerConvention::exact, int main_var = 0) {
  auto ring = numeric_ring(finite_cumulants(spec, N, M + 1), N, theta);
  auto e = expand_dunkl(ring, M, conv, main_var);
  e.theta = theta;
  return e;
}

/// Multivariate polynomial over Coef keyed by exponent vectors.
template <class Coef>
using DunklPoly = std::map<std::array<std::uint8_t, kMaxDunklVars>, Coef>;

/// One application of the full operator h -> G^{-1} D_i (h G), truncated to degree <= left.
template <class Coef>
DunklPoly<Coef> apply_dunkl(const DunklRing<Coef>& ring, const std::vector<Coef>& raise, const DunklPoly<Coef>& h,
                            int i, int left) {
  DunklPoly<Coef> out;
  auto add = [&](const std::array<std::uint8_t, kMaxDunklVars>& e, const Coef& c) {
    if (is_zero(c)) return;
    auto it = out.find(e);
    if (it == out.end()) {
      out.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (is_zero(it->second)) out.erase(it);
  };
  const Rational Nr(ring.N);
  for (const auto& [e, c] : h) {
    int d = 0;
    for (auto x : e) d += x;
    for (int l = 1; d + l - 1 <= left && l < static_cast<int>(raise.size()); ++l) {
      if (is_zero(raise[l])) continue;
      auto u = e;
      u[i] = static_cast<std::uint8_t>(e[i] + l - 1);
      add(u, c * raise[l] * Nr);
    }
    if (d - 1 > left || d == 0) continue;
    const int p = e[i];
    if (p > 0) {
      auto u = e;
      u[i] = static_cast<std::uint8_t>(p - 1);
      add(u, c * Rational(p));
    }
    for (int j = 0; j < ring.N; ++j) {
      if (j == i) continue;
      const int q = e[j];
      if (p > q) {
        for (int a = 0; a <= p - q - 1; ++a) {
          auto u = e;
          u[i] = static_cast<std::uint8_t>(p - 1 - a);
          u[j] = static_cast<std::uint8_t>(q + a);
          add(u, c * ring.theta);
        }
      } else if (p < q) {
        for (int a = 0; a <= q - p - 1; ++a) {
          auto u = e;
          u[i] = static_cast<std::uint8_t>(p + a);
          u[j] = static_cast<std::uint8_t>(q - 1 - a);
          add(u, Coef(0) - c * ring.theta);
        }
      }
    }
  }
  return out;
}

/// E[prod_m p_{k_m}(lambda)] = (prod_m p_{k_m}(D)) G at 0.
template <class Coef>
Coef joint_moment_generic(const DunklRing<Coef>& ring, const std::vector<int>& powers,
                          std::size_t budget = 4'000'000) {
  int total = 0;
  for (int k : powers) {
    if (k < 1) throw Error("powers must be positive");
    total += k;
  }
  std::vector<Coef> raise(total + 2, Coef(0));
  for (int l = 1; l <= total + 1; ++l) raise[l] = ring.raise(l);
  DunklPoly<Coef> h;
  h[{}] = Coef(1);
  int left = total;
  for (int k : powers) {
    DunklPoly<Coef> sum;
    for (int i = 0; i < ring.N; ++i) {
      DunklPoly<Coef> cur = h;
      for (int s = 1; s <= k; ++s) {
        cur = apply_dunkl(ring, raise, cur, i, left - s);
        if (cur.size() > budget) throw TermBudgetExceeded("joint moment exceeded the term budget");
      }
      for (const auto& [e, c] : cur) {
        auto it = sum.find(e);
        if (it == sum.end()) sum.emplace(e, c);
        else it->second = it->second + c;
      }
    }
    left -= k;
    h.clear();
    for (auto& [e, c] : sum)
      if (!is_zero(c)) h.emplace(e, c);
  }
  auto it = h.find({});
  return it == h.end() ? Coef(0) : it->second;
}

inline Rational dunkl_joint_moment(const EnsembleSpec& spec, long N, const Rational& theta,
                                   const std::vector<int>& powers) {
  int total = 0;
  for (int k : powers) total += k;
  return joint_moment_generic(numeric_ring(finite_cumulants(spec, N, total + 1), N, theta), powers);
}

// ---------------------------------------------------------------------------
// Walk functionals and the ledger-versus-walks classification.

/// Height before each down-step, and height after it.
inline std::vector<std::pair<long, long>> down_step_heights(const LukasiewiczWalk& w) {
  std::vector<std::pair<long, long>> out;
  long h = 0;
  for (int x : w.increments) {
    if (x == -1) out.push_back({h, h - 1});
    h += x;
  }
  return out;
}

/// Ratio applied to every standard lowering step of a walk-class sequence.
inline Rational lowering_ratio(LowerConvention conv, long N) {
  return conv == LowerConvention::exact ? make_rational(N - 1, N) : Rational(1);
}

/// I_{(0,p)} and I_{((2),0)} for one walk. Down-steps not used by the functional carry the
/// convention's lowering ratio (1 except in the exact convention).
inline Rational walk_functional(const LukasiewiczWalk& w, const Signature& sig, long N, const Rational& theta,
                                LowerConvention conv = LowerConvention::counting) {
  auto downs = down_step_heights(w);
  const int D = static_cast<int>(downs.size());
  if (sig.k.empty()) {
    // elementary symmetric polynomial e_p of the heights before down-steps
    std::vector<Rational> e(sig.p + 1, 0);
    e[0] = 1;
    for (const auto& [before, after] : downs)
      for (int j = std::min(sig.p, D); j >= 1; --j) e[j] += e[j - 1] * before;
    if (sig.p > D) return 0;
    Rational r = lowering_ratio(conv, N);
    return e[sig.p] * pow(r, static_cast<unsigned>(D - sig.p)) / pow(Rational(N) * theta, static_cast<unsigned>(sig.p));
  }
  if (sig.k == std::vector<int>{2} && sig.p == 0) {
    if (conv == LowerConvention::exact) throw UnsupportedSignature("|k|=2 functional is stated for the simplified lowering");
    Rational s = 0;
    for (const auto& [before, after] : downs) s += after;
    return -make_rational(N - 1, N * N) * s;
  }
  throw UnsupportedSignature("walk functional only for (0,p) and single-variable |k|=2");
}

struct ClassCheck {
  Signature signature;
  Rational ledger_value;
  Rational walk_sum;
  bool ok = false;
};

struct ClassificationReport {
  std::vector<ClassCheck> checks;
  std::optional<Signature> first_mismatch;
  bool ok() const { return !first_mismatch; }
};

/// Compares the (0,p) and ((2),0) ledger classes with sums of walk functionals times walk weights.
inline ClassificationReport classify_against_walks(const DunklExpansion& ex, const CumulantSequence& kappa) {
  ClassificationReport rep;
  auto walks = enumerate_excursions(ex.M);
  std::vector<Signature> sigs;
  for (int p = 0; p <= ex.M; ++p) sigs.push_back(Signature{{}, p});
  if (ex.convention != LowerConvention::exact && ex.N >= 2) sigs.push_back(Signature{{2}, 0});
  for (const auto& sig : sigs) {
    Rational sum = 0;
    for (const auto& w : walks) {
      Rational f = walk_functional(w, sig, ex.N, ex.theta, ex.convention);
      if (f != 0) sum += f * walk_weight(w, kappa);
    }
    ClassCheck c{sig, ex.class_value(sig), sum, false};
    c.ok = c.ledger_value == c.walk_sum;
    if (!c.ok && !rep.first_mismatch) rep.first_mismatch = sig;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace edgelab
