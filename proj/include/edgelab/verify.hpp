#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "combinatorics.hpp"
#include "dunkl.hpp"
#include "edge.hpp"
#include "freeprob.hpp"
#include "random_spec.hpp"
#include "symbolic.hpp"

namespace edgelab {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  bool soft = false;
  std::string detail;
  double seconds = 0;
};

/// Runs fn, times it and turns exceptions into a failed check.
inline CheckResult run_check(const std::string& id, const std::string& name,
                             const std::function<bool(std::ostringstream&)>& fn, bool soft = false) {
  CheckResult r;
  r.id = id;
  r.name = name;
  r.soft = soft;
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream os;
  try {
    r.passed = fn(os);
  } catch (const std::exception& e) {
    r.passed = false;
    os << "exception: " << e.what();
  }
  r.detail = os.str();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// moment_nc = moment_coefficient = sum of walk weights, exactly.
inline bool check_cross_route(std::ostringstream& os, int n_specs = 50, int max_M = 10, std::uint64_t seed = 1) {
  std::mt19937_64 g(seed);
  std::vector<std::vector<LukasiewiczWalk>> walks(max_M + 1);
  for (int M = 1; M <= max_M; ++M) walks[M] = enumerate_excursions(M);
  int compared = 0;
  for (int s = 0; s < n_specs; ++s) {
    auto spec = random_spec(g);
    auto k = cumulants(spec, CumulantKind::limiting(), max_M + 1);
    for (int M = 1; M <= max_M; ++M) {
      Rational a = moment_nc(k, M), b = moment_coefficient(k, M), c = 0;
      for (const auto& w : walks[M]) c += walk_weight(w, k);
      if (a != b || a != c) {
        os << "spec " << s << " M=" << M << ": nc=" << to_string(a) << " coeff=" << to_string(b)
           << " walks=" << to_string(c);
        return false;
      }
      ++compared;
    }
  }
  os << compared << " (spec, M) pairs equal on three routes";
  return true;
}

inline bool check_catalan(std::ostringstream& os) {
  auto sc = cumulants(semicircle_spec(), CumulantKind::limiting(), 15);
  for (int n = 0; n <= 7; ++n) {
    if (n > 0 && moment_nc(sc, 2 * n) != catalan(n)) {
      os << "semicircle m_" << 2 * n;
      return false;
    }
    if (2 * n + 1 <= kDefaultEnumerationBound && moment_nc(sc, 2 * n + 1) != 0) {
      os << "semicircle odd moment " << 2 * n + 1;
      return false;
    }
  }
  auto mp = cumulants(mp_spec(1), CumulantKind::limiting(), 11);
  for (int M = 1; M <= 10; ++M)
    if (moment_nc(mp, M) != catalan(M)) {
      os << "MP m_" << M;
      return false;
    }
  os << "C_n for n <= 7 and n <= 10";
  return true;
}

/// Symbolic M = 3 classes, N = 2..5, for the walk-level lowering conventions.
inline bool check_dunkl_table(std::ostringstream& os) {
  auto k1 = KappaPoly::kappa(1), k2 = KappaPoly::kappa(2), k3 = KappaPoly::kappa(3);
  for (long N = 2; N <= 5; ++N)
    for (auto conv : {LowerConvention::counting, LowerConvention::simplified}) {
      auto ex = expand_dunkl(symbolic_ring(N), 3, conv);
      KappaPoly walk = k3 + k2 * k1 * Rational(3) + k1 * k1 * k1;
      KappaPoly p2 = k3 * KappaPoly::theta(-2) * make_rational(2, N * N);
      KappaPoly swap = k3 * make_rational(-1, N * N);
      if (!(ex.class_value({{}, 0}) == walk) || !(ex.class_value({{}, 2}) == p2) ||
          !(ex.per_choice({{2}, 0}) == swap)) {
        os << "N=" << N << " " << to_string(conv) << ": walk=" << ex.class_value({{}, 0}).str()
           << " p2=" << ex.class_value({{}, 2}).str() << " k2=" << ex.per_choice({{2}, 0}).str();
        return false;
      }
    }
  os << "walk, p=2 and |k|=2 classes reproduced for N=2..5";
  return true;
}

/// N = 1, L = 1, theta = 1 Laguerre: E[lambda^M] = M!.
inline bool check_gamma_moments(std::ostringstream& os, int max_M = 6) {
  EnsembleSpec s;
  s.components.push_back({1, std::nullopt, 1L});
  for (int M = 0; M <= max_M; ++M) {
    auto m = dunkl_moment(s, 1, 1, M).moment();
    if (m != factorial(M)) {
      os << "M=" << M << " gives " << to_string(m);
      return false;
    }
  }
  os << "M! for M <= " << max_M;
  return true;
}

inline bool check_ballot(std::ostringstream& os, std::uint64_t seed = 1) {
  std::mt19937_64 g(seed);
  int n = 0;
  for (int L = 1; L <= 10; ++L) {
    WeightedStepSystem s;
    s.w_down = 1 + random_rational(g, 5, 4);
    for (int k = 0; k <= 5; ++k) s.up.push_back(random_rational(g, 6, 5));
    for (int y0 = 0; y0 <= L; ++y0) {
      auto r = ballot_partition_functions(y0, L, s);
      if (r.Z_good != make_rational(y0, L) * r.Z) {
        os << "ballot y0=" << y0 << " L=" << L;
        return false;
      }
      ++n;
    }
  }
  auto spec = random_spec(g);
  auto k = cumulants(spec, CumulantKind::limiting(), 12);
  Rational z = random_rational(g, 3, 7) + make_rational(1, 9);
  auto st = WeightedStepSystem::from_cumulants(k, z, 11);
  for (int H = 0; H <= 3; ++H)
    for (int M = 0; M <= 10; ++M) {
      Rational e = bridge_partition_enum(H, M, st);
      if (e != bridge_partition_series(H, M, st) || e != bridge_partition_voiculescu(H, M, k, z)) {
        os << "bridge H=" << H << " M=" << M;
        return false;
      }
    }
  os << n << " ballot cases; bridge H <= 3, M <= 10";
  return true;
}

inline bool check_steepest_descent(std::ostringstream& os) {
  for (long gamma : {1L, 2L, 4L}) {
    auto vt = voiculescu(mp_spec(gamma));
    auto p = edge_parameters(vt);
    auto c = contour_moment(vt, 2000);
    auto a = steepest_descent_moment(p, 2000);
    double ratio = c.normalized / a.normalized * std::pow(c.base / a.base, 2000);
    os << "gamma=" << gamma << " ratio=" << ratio << "; ";
    if (!(ratio >= 0.995 && ratio <= 1.005)) return false;
  }
  auto p1 = edge_parameters(voiculescu(mp_spec(1)));
  auto a = steepest_descent_moment(p1, 1000);
  double expect = 1 / std::sqrt(std::numbers::pi) * std::pow(1000.0, -1.5);
  double rel = std::abs(a.normalized / expect - 1);
  os << "MP1 constant rel err " << rel << " base " << a.base;
  return rel < 1e-12 && std::abs(a.base - 4) < 1e-12;
}

inline bool check_universality_identity(std::ostringstream& os, int n = 1000, std::uint64_t seed = 1) {
  std::mt19937_64 g(seed);
  double worst = 0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(universality_residual(edge_parameters(voiculescu(random_spec(g))))));
  os << "max residual " << worst << " over " << n << " specs";
  return worst < 1e-10;
}

/// (0,p) classes under the exact and simplified lowering, |k|=2 class under the simplified one.
inline bool check_walk_functionals(std::ostringstream& os, std::uint64_t seed = 1) {
  std::mt19937_64 g(seed);
  int n = 0;
  for (int rep = 0; rep < 3; ++rep) {
    auto spec = random_spec(g);
    Rational theta = random_rational(g, 4, 3) + make_rational(1, 2);
    for (long N = 1; N <= 4; ++N) {
      auto k = finite_cumulants(spec, N, 8);
      for (int M = 1; M <= 6; ++M)
        for (auto conv : {LowerConvention::exact, LowerConvention::simplified}) {
          auto r = classify_against_walks(dunkl_moment(spec, N, theta, M, conv), k);
          if (!r.ok()) {
            os << "N=" << N << " M=" << M << " " << to_string(conv) << " first mismatch " << r.first_mismatch->str();
            return false;
          }
          n += static_cast<int>(r.checks.size());
        }
    }
  }
  os << n << " class identities exact";
  return true;
}

/// The exact-equality suite.
inline std::vector<CheckResult> run_exact_suite(std::uint64_t seed = 1) {
  std::vector<CheckResult> out;
  out.push_back(run_check("AC1", "cross-route moments", [&](auto& os) { return check_cross_route(os, 50, 10, seed); }));
  out.push_back(run_check("AC2", "Catalan identities", [](auto& os) { return check_catalan(os); }));
  out.push_back(run_check("AC3", "Dunkl M=3 table", [](auto& os) { return check_dunkl_table(os); }));
  out.push_back(run_check("AC4a", "Gamma moments N=1", [](auto& os) { return check_gamma_moments(os); }));
  out.push_back(run_check("AC5", "ballot and bridge identities", [&](auto& os) { return check_ballot(os, seed); }));
  out.push_back(run_check("AC6", "steepest descent", [](auto& os) { return check_steepest_descent(os); }));
  out.push_back(run_check("AC7", "universality identity", [&](auto& os) { return check_universality_identity(os, 1000, seed); }));
  out.push_back(run_check("AC8", "walk functionals vs ledger", [&](auto& os) { return check_walk_functionals(os, seed); }));
  return out;
}

}  // namespace edgelab
