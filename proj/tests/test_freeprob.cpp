#include <doctest.h>

#include <random>

#include <edgelab/freeprob.hpp>

#include "support.hpp"

using namespace edgelab;

TEST_CASE("parse_rational handles fractions and decimals") {
  CHECK(parse_rational("1/2") == make_rational(1, 2));
  CHECK(parse_rational("-6/4") == make_rational(-3, 2));
  CHECK(parse_rational("0.125") == make_rational(1, 8));
  CHECK(parse_rational("-2.5e-1") == make_rational(-1, 4));
  CHECK(parse_rational("3") == 3);
  CHECK_THROWS_AS(parse_rational("x"), SpecError);
  CHECK_THROWS_AS(parse_rational("1/0"), SpecError);
}

TEST_CASE("cumulant examples") {
  auto sc = cumulants(semicircle_spec(), CumulantKind::limiting(), 6);
  for (int l = 1; l <= 6; ++l) CHECK(sc(l) == (l == 2 ? 1 : 0));

  auto mp = cumulants(mp_spec(1), CumulantKind::limiting(), 8);
  for (int l = 1; l <= 8; ++l) CHECK(mp(l) == 1);

  EnsembleSpec fin;
  fin.components.push_back({1, std::nullopt, 3L});
  auto k2 = cumulants(fin, CumulantKind::finite(2), 6);
  for (int l = 1; l <= 6; ++l) CHECK(k2(l) == make_rational(3, 2));
  CHECK_THROWS_AS(cumulants(fin, CumulantKind::limiting(), 2), SpecError);
  CHECK_THROWS_AS(cumulants(fin, CumulantKind::finite(4), 2), SpecError);  // L < N
}

TEST_CASE("cumulants follow the closed form with mixed signs") {
  EnsembleSpec s;
  s.delta = make_rational(1, 3);
  s.components.push_back({1, 2, std::nullopt});
  s.components.push_back({make_rational(-1, 2), 1, std::nullopt});
  auto k = cumulants(s, CumulantKind::limiting(), 5);
  CHECK(k(1) == make_rational(3, 2));
  CHECK(k(2) == make_rational(1, 3) + 2 + make_rational(1, 4));
  CHECK(k(3) == 2 - make_rational(1, 8));
  CHECK_FALSE(first_negative_cumulant(s, CumulantKind::limiting()));
}

TEST_CASE("negative cumulants are rejected") {
  EnsembleSpec s = mp_spec(1, -1);
  CHECK_THROWS_AS(cumulants(s, CumulantKind::limiting(), 3), NegativeCumulant);
  try {
    cumulants(s, CumulantKind::limiting(), 3);
  } catch (const NegativeCumulant& e) {
    CHECK(e.index == 1);
  }
  EnsembleSpec t;
  t.components.push_back({1, 1, std::nullopt});
  t.components.push_back({make_rational(-9, 10), 3, std::nullopt});
  auto bad = first_negative_cumulant(t, CumulantKind::limiting());
  REQUIRE(bad);
  CHECK(*bad == 1);
}

TEST_CASE("spec validation") {
  EnsembleSpec s;
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.components.push_back({1, 1, std::nullopt});
  s.components.push_back({-1, 1, std::nullopt});
  CHECK_THROWS_AS(s.validate(), SpecError);
  s.components.back().alpha = make_rational(1, 2);
  CHECK_NOTHROW(s.validate());
  s.delta = -1;
  CHECK_THROWS_AS(s.validate(), SpecError);
}

TEST_CASE("centered mode drops kappa_1") {
  EnsembleSpec s = mp_spec(2);
  s.centering = Centering::centered;
  auto k = cumulants(s, CumulantKind::limiting(), 3);
  CHECK(k(1) == 0);
  CHECK(k(2) == 2);
  VoiculescuTransform vt(s, CumulantKind::limiting());
  // V - 1/z has no constant term
  Rational z(1, 5);
  Rational series = 1 / z;
  for (int l = 1; l <= 60; ++l) series += cumulant_value(s, CumulantKind::limiting(), l) * pow(z, l - 1);
  CHECK(std::abs(to_double(vt.eval(z, 0) - series)) < 1e-15);
}

TEST_CASE("Voiculescu transform values") {
  VoiculescuTransform mp1(mp_spec(1), CumulantKind::limiting());
  CHECK(mp1.eval(make_rational(1, 2), 0) == 4);
  CHECK(mp1.eval(make_rational(1, 2), 1) == 0);
  CHECK(mp1.eval(make_rational(1, 2), 2) == 32);
  CHECK(mp1.eval(make_rational(1, 2), 3) == -96 + 6 * 16);  // -6/z^4 + 6/(1-z)^4
  VoiculescuTransform sc(semicircle_spec(), CumulantKind::limiting());
  CHECK(sc.eval(Rational(1), 2) == 2);
  CHECK_THROWS_AS(mp1.eval(Rational(1), 0), PoleEvaluation);
  CHECK_THROWS_AS(mp1.eval(Rational(0), 1), PoleEvaluation);
}

TEST_CASE("closed form agrees with truncated series inside the disc") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto s = testsupport::random_spec(g);
    VoiculescuTransform vt(s, CumulantKind::limiting());
    double a1 = s.components.empty() ? 0 : std::abs(to_double(s.components[0].alpha));
    double z = a1 > 0 ? 0.5 / a1 : 0.7;
    double exact = vt.eval(z, 0), approx = vt.eval_series(z, 80);
    CHECK(std::abs(exact - approx) < 1e-12 * std::abs(exact));
    // derivative by central difference
    double h = 1e-5;
    double d1 = (vt.eval(z + h, 0) - vt.eval(z - h, 0)) / (2 * h);
    CHECK(std::abs(d1 - vt.eval(z, 1)) < 1e-6 * (1 + std::abs(d1)));
    double d3 = (vt.eval(z + h, 2) - vt.eval(z - h, 2)) / (2 * h);
    CHECK(std::abs(d3 - vt.eval(z, 3)) < 1e-5 * (1 + std::abs(d3)));
  }
}

TEST_CASE("moment examples") {
  auto sc = cumulants(semicircle_spec(), CumulantKind::limiting(), 15);
  CHECK(moment_nc(sc, 4) == 2);
  CHECK(moment_coefficient(sc, 3) == 0);
  auto mp1 = cumulants(mp_spec(1), CumulantKind::limiting(), 15);
  CHECK(moment_nc(mp1, 3) == 5);
  CHECK(moment_coefficient(mp1, 6) == 132);
  auto mp4 = cumulants(mp_spec(4), CumulantKind::limiting(), 4);
  CHECK(moment_coefficient(mp4, 2) == 20);
  auto ex = CumulantSequence::from_values({make_rational(3, 7), Rational(2), Rational(5)});
  CHECK(moment_nc(ex, 1) == make_rational(3, 7));
  CHECK_THROWS_AS(moment_nc(sc, 15), EnumerationTooLarge);
}

TEST_CASE("semicircle moments are Catalan numbers") {
  auto sc = cumulants(semicircle_spec(), CumulantKind::limiting(), 15);
  for (int n = 0; n <= 7; ++n) {
    if (n >= 1) CHECK(moment_coefficient(sc, 2 * n) == Rational(catalan(n)));
    CHECK(moment_coefficient(sc, 2 * n + 1) == 0);
  }
  CHECK(moment_nc(sc, 14) == Rational(catalan(7)));
  CHECK(moment_nc(sc, 13) == 0);
}

TEST_CASE("Marchenko-Pastur moments are Narayana polynomials") {
  for (int M = 1; M <= 8; ++M) {
    // Narayana numbers from an independent block count over NC(M)
    std::vector<long> by_blocks(M + 1, 0);
    for_each_nc(M, [&](const NonCrossingPartition& p) { ++by_blocks[p.blocks.size()]; });
    for (int k = 1; k <= M; ++k) {
      Integer nar = binomial(M, k) * binomial(M, k - 1) / M;
      CHECK(Integer(by_blocks[k]) == nar);
    }
    for (Rational gamma : {Rational(1), Rational(2), make_rational(5, 3)}) {
      auto k = cumulants(mp_spec(gamma), CumulantKind::limiting(), M + 1);
      Rational poly = 0;
      for (int b = 1; b <= M; ++b) poly += by_blocks[b] * pow(gamma, b);
      CHECK(moment_coefficient(k, M) == poly);
      CHECK(moment_nc(k, M) == poly);
    }
  }
}

TEST_CASE("two exact moment routes agree on random specs") {
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 8; ++rep) {
    auto s = testsupport::random_spec(g);
    auto k = cumulants(s, CumulantKind::limiting(), 13);
    for (int M = 1; M <= 12; ++M) CHECK(moment_nc(k, M) == moment_coefficient(k, M));
  }
  // arbitrary signed cumulants too: the identity is algebraic
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Rational> v;
    for (int l = 0; l < 10; ++l) v.push_back(testsupport::random_rational(g, 9, 7, true));
    auto k = CumulantSequence::from_values(v);
    for (int M = 1; M <= 10; ++M) CHECK(moment_nc(k, M) == moment_coefficient(k, M));
  }
}

TEST_CASE("finite-N cumulants approach the limit at rate 1/N") {
  EnsembleSpec s;
  s.delta = make_rational(1, 2);
  s.components.push_back({1, make_rational(7, 3), std::nullopt});
  s.components.push_back({make_rational(1, 3), make_rational(13, 10), std::nullopt});
  for (int l = 1; l <= 5; ++l) {
    Rational lim = cumulant_value(s, CumulantKind::limiting(), l);
    for (long N : {10L, 37L, 100L, 1001L}) {
      Rational diff = abs(cumulant_value(s, CumulantKind::finite(N), l) - lim);
      CHECK(diff * N <= 2);
    }
  }
}
