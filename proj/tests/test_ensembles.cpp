#include <doctest.h>

#include <edgelab/dunkl.hpp>
#include <edgelab/ensembles.hpp>

using namespace edgelab;

namespace {

MCEstimate mc(std::size_t n, std::uint64_t seed, const std::function<double(Rng&)>& f) {
  return summarize(run_samples(n, seed, 1, [&](std::size_t, Rng& g) { return f(g); }), seed);
}

}  // namespace

TEST_CASE("N=1 tridiagonal laws") {
  for (double beta : {1.0, 2.0, 4.0}) {
    auto e = mc(100000, 1, [&](Rng& g) {
      double x = sample_spectrum(TridiagonalKind::gaussian_beta, 1, 1, beta, g).largest();
      return x * x;
    });
    CHECK(std::abs(e.mean - 2 / beta) < 4 * e.std_error);
  }
  std::vector<double> draws(1000000);
  Rng g(2);
  for (auto& x : draws) x = sample_spectrum(TridiagonalKind::laguerre_beta, 1, 1, 2, g).largest();
  double fact = 1;
  for (int M = 1; M <= 4; ++M) {
    fact *= M;
    std::vector<double> p(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) p[i] = std::pow(draws[i], M);
    auto e = summarize(p, 2);
    CHECK_MESSAGE(std::abs(e.mean - fact) < 3 * e.std_error, "M=" << M << " " << e.mean);
  }
}

TEST_CASE("Laguerre spectra are nonnegative and sorted") {
  Rng g(3);
  auto s = sample_spectrum(TridiagonalKind::laguerre_beta, 50, 60, 1.5, g);
  CHECK(s.eigenvalues.size() == 50);
  CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
  CHECK(s.eigenvalues.back() >= 0);
  CHECK_THROWS_AS(sample_spectrum(TridiagonalKind::laguerre_beta, 5, 4, 2, g), Error);
}

TEST_CASE("GUE bulk follows the semicircle") {
  Rng g(4);
  auto s = sample_spectrum(TridiagonalKind::gaussian_beta, 2000, 2000, 2, g);
  CHECK(density_sup_distance(s.eigenvalues, 2000, -2, 2, 40, semicircle_cdf) < 0.02);
}

TEST_CASE("Laguerre edge location") {
  for (long gamma : {1L, 4L}) {
    Rng g(5 + gamma);
    double mu = std::pow(std::sqrt(static_cast<double>(gamma)) + 1, 2), m = 0;
    const int reps = 5;
    for (int r = 0; r < reps; ++r) m += sample_spec_spectrum(mp_spec(gamma), 4000, 2, g).largest() / 4000;
    CHECK(std::abs(m / reps / mu - 1) < 0.01);
  }
}

TEST_CASE("dense and tridiagonal samplers agree with exact N=2 moments") {
  EnsembleSpec mix;
  mix.delta = make_rational(1, 2);
  mix.components.push_back({1, std::nullopt, 3L});
  for (int beta : {1, 2}) {
    Rational theta = make_rational(beta, 2);
    auto exact = [&](std::vector<int> pw) { return to_double(dunkl_joint_moment(mix, 2, theta, pw)); };
    const std::size_t n = 200000;
    std::vector<double> p11(n), p2(n), p3(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rng g = stream_rng(20 + beta, i);
      auto t = trace_powers(sample_classical_matrix(mix, 2, beta, g), 3);
      p11[i] = t[0] * t[0];
      p2[i] = t[1];
      p3[i] = t[2];
    }
    auto a = summarize(p11, 0), b = summarize(p2, 0), c = summarize(p3, 0);
    CHECK_MESSAGE(std::abs(a.mean - exact({1, 1})) < 4 * a.std_error, beta);
    CHECK_MESSAGE(std::abs(b.mean - exact({2})) < 4 * b.std_error, beta);
    CHECK_MESSAGE(std::abs(c.mean - exact({3})) < 4 * c.std_error, beta);
  }
  // tridiagonal Gaussian at a non-classical beta
  for (double beta : {0.5, 3.0}) {
    Rational theta = make_rational(static_cast<long>(beta * 2), 4);
    std::vector<double> p4(100000);
    for (std::size_t i = 0; i < p4.size(); ++i) {
      Rng g = stream_rng(30, i);
      auto s = sample_spectrum(TridiagonalKind::gaussian_beta, 2, 2, beta, g);
      p4[i] = std::pow(s.eigenvalues[0], 4) + std::pow(s.eigenvalues[1], 4);
    }
    auto e = summarize(p4, 0);
    double ex = to_double(dunkl_moment(semicircle_spec(), 2, theta, 4).moment());
    CHECK_MESSAGE(std::abs(e.mean - ex) < 4 * e.std_error, beta);
  }
}

TEST_CASE("classical addition bulk moments") {
  EnsembleSpec mix;
  mix.delta = 1;
  mix.components.push_back({make_rational(1, 2), 2, std::nullopt});
  const long N = 100;
  auto k = cumulants(mix, CumulantKind::finite(N), 2);
  std::vector<double> m1, m2;
  Rng g(7);
  for (int r = 0; r < 100; ++r) {
    auto t = trace_powers(sample_classical_matrix(mix, N, 2, g), 2);
    m1.push_back(t[0] / (N * N));
    m2.push_back(t[1] / (static_cast<double>(N) * N * N));
  }
  auto a = summarize(m1, 0), b = summarize(m2, 0);
  CHECK(std::abs(a.mean - to_double(k(1))) < 4 * a.std_error);
  CHECK(std::abs(b.mean - to_double(moment_nc(k, 2))) < 4 * b.std_error);
  auto s = sample_classical_addition(semicircle_spec(), 10, 1, g);
  CHECK(s.eigenvalues.size() == 10);
  CHECK_THROWS_AS(sample_classical_matrix(mix, 3, 4, g), Error);
}

TEST_CASE("edge statistics") {
  Rng g(8);
  auto p = edge_parameters(voiculescu(semicircle_spec()));
  auto s = sample_spectrum(TridiagonalKind::gaussian_beta, 400, 400, 2, g);
  CHECK(empirical_power_sum(s, 0, p) == 400);
  double lap = empirical_laplace(s, 1, p);
  double pw = empirical_power_sum(s, edge_power(1, 400), p);
  CHECK(lap > 0);
  CHECK(pw > 0);
  CHECK(edge_power(1, 1000) == 100);
  CHECK(edge_power(0.5, 8) == 2);
}

TEST_CASE("universality experiment report") {
  std::vector<std::pair<std::string, EnsembleSpec>> specs{{"gauss", semicircle_spec()}, {"mp1", mp_spec(1)}};
  auto rep = edge_universality_experiment(specs, {2.0}, 100, 300, {1, 1});
  REQUIRE(rep.cases.size() == 2);
  REQUIRE(rep.pairs.size() == 1);
  CHECK(rep.pairs[0].ks.p_value > 0.001);
  for (auto& c : rep.cases) CHECK(std::abs(c.mean - kTracyWidom2Mean) < 0.4);
}
