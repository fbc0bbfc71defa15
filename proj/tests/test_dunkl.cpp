#include <doctest.h>

#include <random>

#include <edgelab/dunkl.hpp>

#include "support.hpp"

using namespace edgelab;

namespace {

// M! [z^M] exp(sum_l kappa_l theta^{1-l} z^l / l): the N = 1 moment from the generating function.
Rational univariate_moment(const CumulantSequence& k, const Rational& theta, int M) {
  std::vector<Rational> f(M + 1, 0), g(M + 1, 0);
  for (int l = 1; l <= M; ++l) f[l] = k(l) / pow(theta, l - 1) / l;
  g[0] = 1;
  for (int n = 1; n <= M; ++n) {
    Rational s = 0;
    for (int j = 1; j <= n; ++j) s += j * f[j] * g[n - j];
    g[n] = s / n;
  }
  return g[M] * factorial(M);
}

// N = 2 Gaussian: lambda = s +- t/2 with s ~ N(0, N/(2 theta)) and t^2 ~ Gamma(theta + 1/2, 4N/theta).
Rational gauss2_mixed(long a, long b, const Rational& theta) {
  const long N = 2;
  auto s_mom = [&](long k) -> Rational {
    if (k % 2) return 0;
    Rational v = Rational(N) / (2 * theta), out = 1;
    for (long i = 1; i < k; i += 2) out *= i * v;
    return out;
  };
  auto t_mom = [&](long k) -> Rational {
    if (k % 2) return 0;
    Rational out = 1, a0 = theta + make_rational(1, 2);
    for (long i = 0; i < k / 2; ++i) out *= (a0 + i) * 4 * N / theta;
    return out;
  };
  Rational total = 0;
  for (long i = 0; i <= a; ++i)
    for (long j = 0; j <= b; ++j) {
      Rational c = Rational(binomial(a, i) * binomial(b, j)) * s_mom(a - i + b - j) * t_mom(i + j) /
                   pow(Rational(2), static_cast<unsigned>(i + j));
      total += (j % 2 ? -c : c);
    }
  return total;
}

// N = 2, beta = 2 Laguerre with L columns: density (x y)^{L-2} e^{-x-y} (x-y)^2.
Rational laguerre2_mixed(long a, long b, long L) {
  auto F = [&](long p, long q) -> Rational { return Rational(factorial(p + L - 2) * factorial(q + L - 2)); };
  auto I = [&](long p, long q) -> Rational { return F(p + 2, q) - 2 * F(p + 1, q + 1) + F(p, q + 2); };
  return I(a, b) / I(0, 0);
}

Rational power_sum_moment(const std::vector<int>& powers, const std::function<Rational(long, long)>& mixed) {
  // expand prod_m (x^{k_m} + y^{k_m})
  std::map<std::pair<long, long>, Rational> poly{{{0, 0}, 1}};
  for (int k : powers) {
    std::map<std::pair<long, long>, Rational> next;
    for (auto& [e, c] : poly) {
      next[{e.first + k, e.second}] += c;
      next[{e.first, e.second + k}] += c;
    }
    poly.swap(next);
  }
  Rational total = 0;
  for (auto& [e, c] : poly) total += c * mixed(e.first, e.second);
  return total;
}

}  // namespace

TEST_CASE("N=1 Laguerre with L=1 has Gamma moments") {
  EnsembleSpec s;
  s.components.push_back({1, std::nullopt, 1L});
  for (int M = 0; M <= 6; ++M) CHECK(dunkl_moment(s, 1, 1, M).moment() == factorial(M));
  // rising factorial (theta)_M / theta^M for shape theta, rate theta
  Rational theta = make_rational(5, 2);
  Rational expected = 1;
  for (int M = 1; M <= 6; ++M) {
    expected *= (theta + M - 1) / theta;
    CHECK(dunkl_moment(s, 1, theta, M).moment() == expected);
  }
}

TEST_CASE("N=1 agrees with the univariate generating function") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 10; ++rep) {
    auto spec = testsupport::random_spec(g);
    Rational theta = testsupport::random_rational(g, 5, 3) + make_rational(1, 3);
    auto k = finite_cumulants(spec, 1, 11);
    for (int M = 0; M <= 10; ++M) CHECK(dunkl_moment(spec, 1, theta, M).moment() == univariate_moment(k, theta, M));
  }
}

TEST_CASE("N=2 Gaussian moments match the two-point density") {
  for (Rational theta : {Rational(make_rational(1, 2)), Rational(1), Rational(2)}) {
    auto mixed = [&](long a, long b) { return gauss2_mixed(a, b, theta); };
    for (int M = 1; M <= 7; ++M)
      CHECK(dunkl_moment(semicircle_spec(), 2, theta, M).moment() == power_sum_moment({M}, mixed));
    CHECK(dunkl_moment(semicircle_spec(), 2, theta, 2).moment() == 4 + 4 / theta);
    for (auto pw : std::vector<std::vector<int>>{{1, 1}, {2, 2}, {2, 1, 1}, {3, 3}, {4, 2}, {2, 2, 2}})
      CHECK(dunkl_joint_moment(semicircle_spec(), 2, theta, pw) == power_sum_moment(pw, mixed));
  }
}

TEST_CASE("N=2 beta=2 Laguerre moments match the two-point density") {
  for (long L : {2L, 3L, 5L}) {
    EnsembleSpec s;
    s.components.push_back({1, std::nullopt, L});
    auto mixed = [&](long a, long b) { return laguerre2_mixed(a, b, L); };
    for (int M = 1; M <= 6; ++M) CHECK(dunkl_moment(s, 2, 1, M).moment() == power_sum_moment({M}, mixed));
    for (auto pw : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {2, 2}, {3, 1, 1}})
      CHECK(dunkl_joint_moment(s, 2, 1, pw) == power_sum_moment(pw, mixed));
    CHECK(dunkl_joint_moment(s, 2, 1, {1, 1}) - dunkl_joint_moment(s, 2, 1, {2}) >= 0);
  }
}

TEST_CASE("joint moments reduce to single moments") {
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 4; ++rep) {
    auto spec = testsupport::random_spec(g, 2);
    Rational theta = testsupport::random_rational(g, 3, 2) + 1;
    for (long N = 1; N <= 3; ++N) {
      auto k = finite_cumulants(spec, N, 2);
      CHECK(dunkl_joint_moment(spec, N, theta, {1}) == N * N * k(1));  // eigenvalues live on scale N
      for (int M = 1; M <= 5; ++M)
        CHECK(dunkl_joint_moment(spec, N, theta, {M}) == dunkl_moment(spec, N, theta, M).moment());
    }
    // one variable: E[lambda^a] E-products collapse to E[lambda^{a+b}]
    CHECK(dunkl_joint_moment(spec, 1, theta, {2, 3}) == dunkl_moment(spec, 1, theta, 5).moment());
  }
}

TEST_CASE("symbolic M=3 table") {
  auto k1 = KappaPoly::kappa(1), k2 = KappaPoly::kappa(2), k3 = KappaPoly::kappa(3);
  for (long N = 2; N <= 5; ++N) {
    for (auto conv : {LowerConvention::counting, LowerConvention::simplified}) {
      auto ex = expand_dunkl(symbolic_ring(N), 3, conv);
      CHECK(ex.class_value({{}, 0}) == k3 + k2 * k1 * Rational(3) + k1 * k1 * k1);
      CHECK(ex.class_value({{}, 2}) == k3 * KappaPoly::theta(-2) * make_rational(2, N * N));
      CHECK(ex.per_choice({{2}, 0}) == k3 * make_rational(-1, N * N));
      CHECK(ex.class_value({{2}, 0}) == k3 * make_rational(-(N - 1), N * N));
      CHECK(ex.class_value({{}, 1}) == (k3 + k1 * k2) * KappaPoly::theta(-1) * make_rational(3, N));
      CHECK(ex.ledger.size() == 4);
      KappaPoly sum;
      for (auto& [sig, c] : ex.ledger) sum += c;
      CHECK(sum == ex.total);
    }
  }
}

TEST_CASE("step operator images") {
  // Swap on z1^2 with z2 at degree 0 leaves one term z2; reaching the constant needs the negative branch.
  auto ex = expand_dunkl(symbolic_ring(2), 3, LowerConvention::exact);
  CHECK(ex.sign_audit.at({Signature{{2}, 0}, 1}) == KappaPoly::kappa(3) * make_rational(-1, 4));
  // zero M
  auto e0 = expand_dunkl(symbolic_ring(3), 0, LowerConvention::exact);
  CHECK(e0.total == KappaPoly(1));
}

TEST_CASE("sign audit follows negative-swap parity") {
  for (long N = 2; N <= 4; ++N)
    for (int M = 1; M <= 5; ++M)
      for (auto conv : {LowerConvention::exact, LowerConvention::counting, LowerConvention::simplified}) {
        auto ex = expand_dunkl(symbolic_ring(N), M, conv);
        KappaPoly sum;
        for (auto& [key, c] : ex.sign_audit) {
          CHECK_MESSAGE(c.all_signs(key.second ? -1 : 1), key.first.str() << " " << c.str());
          sum += c;
        }
        CHECK(sum == ex.total);
      }
}

TEST_CASE("expanding through another variable gives the same ledger") {
  std::mt19937_64 g(3);
  auto spec = testsupport::random_spec(g);
  for (long N = 2; N <= 4; ++N)
    for (int M = 1; M <= 6; ++M) {
      auto a = dunkl_moment(spec, N, make_rational(3, 2), M, LowerConvention::exact, 0);
      auto b = dunkl_moment(spec, N, make_rational(3, 2), M, LowerConvention::exact, static_cast<int>(N - 1));
      CHECK(a.ledger == b.ledger);
    }
}

TEST_CASE("centered mode kills the first moment") {
  auto s = mp_spec(2);
  s.centering = Centering::centered;
  auto ex = dunkl_moment(s, 3, 1, 1, LowerConvention::counting);
  CHECK(ex.class_value({{}, 0}) == 0);
  CHECK(dunkl_moment(s, 3, 1, 1).moment() == 0);
}

TEST_CASE("walk class equals the non-crossing moment") {
  std::mt19937_64 g(19);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Rational> kv;
    for (int l = 0; l < 8; ++l) kv.push_back(testsupport::random_rational(g, 6, 5));
    auto k = CumulantSequence::from_values(kv);
    auto ring = numeric_ring(k, 3, make_rational(2, 3));
    for (int M = 1; M <= 6; ++M) {
      auto ex = expand_dunkl(ring, M, LowerConvention::counting);
      CHECK(ex.class_value({{}, 0}) == moment_nc(k, M));
      // the exact lowering scales each of the M - (up-steps) down-steps by (N-1)/N
      auto exact = expand_dunkl(ring, M, LowerConvention::exact);
      Rational walks = 0;
      for (auto& w : enumerate_excursions(M)) {
        walks += walk_weight(w, k) * pow(make_rational(2, 3), static_cast<unsigned>(w.down_steps()));
      }
      CHECK(exact.class_value({{}, 0}) == walks);
    }
  }
}

TEST_CASE("walk functional examples") {
  LukasiewiczWalk flat{{0, 0, 0}};
  CHECK(walk_functional(flat, {{}, 1}, 3, 2) == 0);
  LukasiewiczWalk w{{2, -1, -1}};
  for (long N : {2L, 5L})
    CHECK(walk_functional(w, {{}, 1}, N, make_rational(1, 2)) == Rational(3) / (N * make_rational(1, 2)));
  CHECK_THROWS_AS(walk_functional(w, {{1, 1}, 0}, 3, 1), UnsupportedSignature);
  // sum over 3-step walks of the |k|=2 functional gives -(N-1) kappa_3 / N^2
  auto k = cumulants(mp_spec(make_rational(3, 2)), CumulantKind::finite(3), 4);
  Rational s = 0;
  for (auto& x : enumerate_excursions(3)) s += walk_functional(x, {{2}, 0}, 3, 1) * walk_weight(x, k);
  CHECK(s == -make_rational(2, 9) * k(3));
}

TEST_CASE("walk functionals reproduce ledger classes") {
  std::mt19937_64 g(23);
  for (int rep = 0; rep < 3; ++rep) {
    auto spec = testsupport::random_spec(g);
    Rational theta = testsupport::random_rational(g, 4, 3) + make_rational(1, 2);
    for (long N = 2; N <= 4; ++N) {
      auto k = finite_cumulants(spec, N, 8);
      for (int M = 1; M <= 6; ++M) {
        for (auto conv : {LowerConvention::exact, LowerConvention::simplified}) {
          auto rep2 = classify_against_walks(dunkl_moment(spec, N, theta, M, conv), k);
          CHECK_MESSAGE(rep2.ok(), "N=" << N << " M=" << M << " " << to_string(conv));
        }
      }
    }
  }
}

TEST_CASE("counting lowering breaks the |k|=2 identity beyond M=3") {
  auto spec = mp_spec(make_rational(3, 2));
  auto k = finite_cumulants(spec, 3, 8);
  auto rep = classify_against_walks(dunkl_moment(spec, 3, make_rational(1, 2), 3, LowerConvention::counting), k);
  CHECK(rep.ok());
  rep = classify_against_walks(dunkl_moment(spec, 3, make_rational(1, 2), 4, LowerConvention::counting), k);
  REQUIRE(rep.first_mismatch);
  CHECK(*rep.first_mismatch == Signature{{2}, 0});
}

TEST_CASE("term budget guard") {
  auto ring = symbolic_ring(5);
  CHECK_THROWS_AS(expand_dunkl(ring, 7, LowerConvention::exact, 0, 10), TermBudgetExceeded);
}
