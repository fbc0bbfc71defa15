#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "edge.hpp"
#include "errors.hpp"
#include "freeprob.hpp"
#include "rng.hpp"
#include "stochastics.hpp"

namespace edgelab {

// Normalization throughout: the Gaussian ensemble has density prop. to |Delta|^beta exp(-theta sum l^2 / (2N)),
// theta = beta/2, and a Laguerre ensemble with L columns reduces at N = 1 to Gamma(shape theta L, rate theta).
// Both spectra then sit on scale N with the edge at mu_+ N.

enum class TridiagonalKind { gaussian_beta, laguerre_beta };

struct TridiagonalModel {
  TridiagonalKind kind = TridiagonalKind::gaussian_beta;
  long N = 1, L = 1;
  double beta = 2;
  std::vector<double> diagonal, offdiagonal;
};

struct SpectrumSample {
  std::vector<double> eigenvalues;  // descending
  long N = 0;
  double beta = 0;
  std::uint64_t seed = 0;
  double largest() const { return eigenvalues.front(); }
};

template <class G>
double sample_chi(double dof, G& g) {
  return std::sqrt(std::chi_squared_distribution<double>(dof)(g));
}

template <class G>
TridiagonalModel sample_tridiagonal(TridiagonalKind kind, long N, long L, double beta, G& g) {
  if (N < 1) throw Error("N must be >= 1");
  if (!(beta > 0)) throw Error("beta must be positive");
  TridiagonalModel m;
  m.kind = kind;
  m.N = N;
  m.L = L;
  m.beta = beta;
  m.diagonal.resize(N);
  m.offdiagonal.resize(N - 1);
  if (kind == TridiagonalKind::gaussian_beta) {
    std::normal_distribution<double> nd(0, 1);
    const double sd = std::sqrt(2.0 * N / beta), so = std::sqrt(N / beta);
    for (long i = 0; i < N; ++i) m.diagonal[i] = sd * nd(g);
    for (long i = 0; i + 1 < N; ++i) m.offdiagonal[i] = so * sample_chi(beta * (N - 1 - i), g);
    return m;
  }
  if (L < N) throw Error("Laguerre ensemble needs L >= N");
  // B lower bidiagonal, diag chi_{beta(L-i)}, sub chi_{beta(N-1-i)} (0-based); spectrum of B B^T / beta
  std::vector<double> d(N), s(N - 1);
  for (long i = 0; i < N; ++i) d[i] = sample_chi(beta * (L - i), g);
  for (long i = 0; i + 1 < N; ++i) s[i] = sample_chi(beta * (N - 1 - i), g);
  for (long i = 0; i < N; ++i) m.diagonal[i] = (d[i] * d[i] + (i ? s[i - 1] * s[i - 1] : 0.0)) / beta;
  for (long i = 0; i + 1 < N; ++i) m.offdiagonal[i] = d[i] * s[i] / beta;
  return m;
}

inline std::vector<double> tridiagonal_eigenvalues(const TridiagonalModel& m) {
  if (m.N == 1) return {m.diagonal[0]};
  Eigen::Map<const Eigen::VectorXd> diag(m.diagonal.data(), m.N);
  Eigen::Map<const Eigen::VectorXd> sub(m.offdiagonal.data(), m.N - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("tridiagonal eigensolver failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.N);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

template <class G>
SpectrumSample sample_spectrum(TridiagonalKind kind, long N, long L, double beta, G& g) {
  SpectrumSample s;
  s.eigenvalues = tridiagonal_eigenvalues(sample_tridiagonal(kind, N, L, beta, g));
  s.N = N;
  s.beta = beta;
  return s;
}

/// Tridiagonal spectrum for a delta-only or single-component spec, any beta > 0.
template <class G>
SpectrumSample sample_spec_spectrum(const EnsembleSpec& spec, long N, double beta, G& g) {
  spec.validate();
  SpectrumSample s;
  double scale = 1;
  TridiagonalKind kind;
  long L = N;
  if (spec.components.empty()) {
    kind = TridiagonalKind::gaussian_beta;
    scale = std::sqrt(to_double(spec.delta));
  } else if (spec.components.size() == 1 && spec.delta == 0) {
    kind = TridiagonalKind::laguerre_beta;
    L = component_size(spec.components[0], N);
    scale = to_double(spec.components[0].alpha);
  } else {
    throw Error("no tridiagonal model for this spec; use the classical addition sampler");
  }
  s = sample_spectrum(kind, N, L, beta, g);
  for (double& x : s.eigenvalues) x = scale * x;
  if (spec.centering == Centering::centered) {
    EnsembleSpec raw = spec;
    raw.centering = Centering::uncentered;
    const double shift = N * to_double(cumulant_value(raw, CumulantKind::finite(N), 1));
    for (double& x : s.eigenvalues) x -= shift;
  }
  if (scale < 0) std::sort(s.eigenvalues.rbegin(), s.eigenvalues.rend());
  return s;
}

// ---------------------------------------------------------------------------
// Classical (beta = 1, 2) dense additions sqrt(delta) G + sum alpha_i W_i.

using ComplexMatrix = Eigen::MatrixXcd;

template <class G>
ComplexMatrix sample_gaussian_matrix(long N, int beta, G& g) {
  std::normal_distribution<double> nd(0, 1);
  ComplexMatrix h(N, N);
  const double n = static_cast<double>(N);
  for (long i = 0; i < N; ++i) {
    h(i, i) = beta == 1 ? std::sqrt(2 * n) * nd(g) : std::sqrt(n) * nd(g);
    for (long j = i + 1; j < N; ++j) {
      std::complex<double> x = beta == 1 ? std::complex<double>(std::sqrt(n) * nd(g), 0)
                                         : std::complex<double>(nd(g), nd(g)) * std::sqrt(n / 2);
      h(i, j) = x;
      h(j, i) = std::conj(x);
    }
  }
  return h;
}

template <class G>
ComplexMatrix sample_wishart_matrix(long N, long L, int beta, G& g) {
  std::normal_distribution<double> nd(0, 1);
  ComplexMatrix x(N, L);
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < L; ++j)
      x(i, j) = beta == 1 ? std::complex<double>(nd(g), 0) : std::complex<double>(nd(g), nd(g)) * std::sqrt(0.5);
  return x * x.adjoint();
}

template <class G>
ComplexMatrix sample_classical_matrix(const EnsembleSpec& spec, long N, int beta, G& g) {
  spec.validate();
  if (beta != 1 && beta != 2) throw Error("classical additions exist only for beta in {1, 2}");
  ComplexMatrix m = ComplexMatrix::Zero(N, N);
  if (spec.delta != 0) m += std::sqrt(to_double(spec.delta)) * sample_gaussian_matrix(N, beta, g);
  for (const auto& c : spec.components)
    m += to_double(c.alpha) * sample_wishart_matrix(N, component_size(c, N), beta, g);
  if (spec.centering == Centering::centered) {
    EnsembleSpec raw = spec;
    raw.centering = Centering::uncentered;
    double shift = N * to_double(cumulant_value(raw, CumulantKind::finite(N), 1));
    m -= shift * ComplexMatrix::Identity(N, N);
  }
  return m;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("dense eigensolver failed");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

template <class G>
SpectrumSample sample_classical_addition(const EnsembleSpec& spec, long N, int beta, G& g) {
  SpectrumSample s;
  s.eigenvalues = hermitian_eigenvalues(sample_classical_matrix(spec, N, beta, g));
  s.N = N;
  s.beta = beta;
  return s;
}

/// tr(H^k), k = 1..kmax.
inline std::vector<double> trace_powers(const ComplexMatrix& h, int kmax) {
  std::vector<double> out;
  ComplexMatrix p = h;
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) p = p * h;
    out.push_back(p.trace().real());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge statistics.

/// lambda' = (lambda - mu_+ N) / N^{1/3}.
inline double edge_rescale(double lambda, const EdgeParameters& p, long N) {
  return (lambda - p.mu_plus * N) / std::cbrt(static_cast<double>(N));
}

/// sum_i (lambda_i / (mu_+ N))^M.
inline double empirical_power_sum(const SpectrumSample& s, long M, const EdgeParameters& p) {
  if (M == 0) return static_cast<double>(s.eigenvalues.size());
  std::vector<double> t;
  t.reserve(s.eigenvalues.size());
  for (double x : s.eigenvalues) t.push_back(std::pow(x / (p.mu_plus * s.N), static_cast<double>(M)));
  return pairwise_sum(t);
}

/// sum_i exp(T lambda'_i / mu_+).
inline double empirical_laplace(const SpectrumSample& s, double T, const EdgeParameters& p) {
  std::vector<double> t;
  t.reserve(s.eigenvalues.size());
  for (double x : s.eigenvalues) t.push_back(std::exp(T * edge_rescale(x, p, s.N) / p.mu_plus));
  return pairwise_sum(t);
}

/// floor(T N^{2/3}).
inline long edge_power(double T, long N) {
  return static_cast<long>(std::floor(T * std::cbrt(static_cast<double>(N) * N) + 1e-9));
}

/// Histogram of x / N on [lo, hi) against the bin averages of a reference CDF; returns the sup-norm.
inline double density_sup_distance(const std::vector<double>& eig, long N, double lo, double hi, int bins,
                                   const std::function<double(double)>& cdf) {
  std::vector<double> counts(bins, 0);
  const double w = (hi - lo) / bins;
  for (double x : eig) {
    double y = x / N;
    if (y < lo || y >= hi) continue;
    counts[std::min(bins - 1, static_cast<int>((y - lo) / w))] += 1;
  }
  double worst = 0;
  for (int b = 0; b < bins; ++b) {
    double emp = counts[b] / (eig.size() * w);
    double ref = (cdf(lo + (b + 1) * w) - cdf(lo + b * w)) / w;
    worst = std::max(worst, std::abs(emp - ref));
  }
  return worst;
}

inline double semicircle_cdf(double x) {
  if (x <= -2) return 0;
  if (x >= 2) return 1;
  return 0.5 + x * std::sqrt(4 - x * x) / (4 * std::numbers::pi) + std::asin(x / 2) / std::numbers::pi;
}

struct UniversalityCase {
  std::string label;
  EnsembleSpec spec;
  double beta = 2;
  EdgeParameters params;
  std::vector<double> rescaled;  // lambda'_1 / C_0
  double mean = 0, std_error = 0;
};

struct UniversalityPair {
  std::size_t a = 0, b = 0;
  KSResult ks;
};

struct UniversalityReport {
  std::vector<UniversalityCase> cases;
  std::vector<UniversalityPair> pairs;  // same beta only
};

/// Largest eigenvalue of rep r for (spec, beta): tridiagonal when available, dense otherwise.
inline double sample_largest(const EnsembleSpec& spec, long N, double beta, Rng& g) {
  bool tridiag = spec.components.empty() || (spec.components.size() == 1 && spec.delta == 0);
  if (tridiag) return sample_spec_spectrum(spec, N, beta, g).largest();
  return sample_classical_addition(spec, N, static_cast<int>(beta), g).largest();
}

inline UniversalityReport edge_universality_experiment(const std::vector<std::pair<std::string, EnsembleSpec>>& specs,
                                                       const std::vector<double>& betas, long N, std::size_t reps,
                                                       MCOptions opt = {}) {
  UniversalityReport rep;
  std::uint64_t stream = 0;
  for (double beta : betas) {
    std::size_t first = rep.cases.size();
    for (const auto& [label, spec] : specs) {
      UniversalityCase c;
      c.label = label;
      c.spec = spec;
      c.beta = beta;
      c.params = edge_parameters(VoiculescuTransform(spec, CumulantKind::finite(N)));
      const double c0 = c.params.c0;
      const std::uint64_t seed = splitmix64(opt.seed + (++stream));
      c.rescaled = run_samples(reps, seed, opt.threads, [&](std::size_t, Rng& g) {
        return edge_rescale(sample_largest(spec, N, beta, g), c.params, N) / c0;
      });
      auto e = summarize(c.rescaled, seed);
      c.mean = e.mean;
      c.std_error = e.std_error;
      rep.cases.push_back(std::move(c));
    }
    for (std::size_t i = first; i < rep.cases.size(); ++i)
      for (std::size_t j = i + 1; j < rep.cases.size(); ++j)
        rep.pairs.push_back({i, j, ks_two_sample(rep.cases[i].rescaled, rep.cases[j].rescaled)});
  }
  return rep;
}

/// Tracy-Widom (beta = 2) mean, used as a soft reference.
inline constexpr double kTracyWidom2Mean = -1.7710868074;

}  // namespace edgelab
