#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "freeprob.hpp"
#include "numerics.hpp"

namespace edgelab {

struct EdgeParameters {
  double z_c = 0;
  double mu_plus = 0;   // V(z_c)
  double sigma2 = 0;    // z_c^2 V''(z_c) / V(z_c)
  double p_minus1 = 0;  // 1 / (z_c V(z_c))
  double c0 = 0;        // 2^{-1/3} V''(z_c)^{1/3}
  double f2 = 0;        // V''(z_c) / V(z_c)
  double v2 = 0;        // V''(z_c)
  bool pure_gaussian = false;

  double sigma() const { return std::sqrt(sigma2); }
};

/// A large positive number stored as normalized * base^power.
struct PowerScaled {
  double normalized = 0;
  double base = 1;
  long power = 0;

  long double value() const { return static_cast<long double>(normalized) * std::pow(static_cast<long double>(base), power); }
  double log_value() const { return std::log(std::abs(normalized)) + power * std::log(base); }
};

/// Root of V' on (0, 1/alpha_max) by bisection; V' is increasing there.
inline double critical_point(const VoiculescuTransform& vt) {
  auto dv = [&](double z) { return vt.eval(z, 1); };
  double lo = 0, hi = vt.positive_pole();
  if (!std::isfinite(hi)) {
    hi = 1;
    while (dv(hi) < 0) {
      hi *= 2;
      if (hi > 1e300) throw NoSignChange("V' never changes sign on (0, inf)");
    }
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (dv(mid) < 0) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  double z = 0.5 * (lo + hi);
  double d1 = dv(z), d2 = vt.eval(z, 2);
  if (!(std::abs(d1) < 1e-10 * std::abs(d2)) || !std::isfinite(d1))
    throw NoSignChange("no root of V' found on (0, 1/alpha_1)");
  return z;
}

inline EdgeParameters edge_parameters(const VoiculescuTransform& vt) {
  EdgeParameters p;
  p.z_c = critical_point(vt);
  double v = vt.eval(p.z_c, 0), v2 = vt.eval(p.z_c, 2);
  p.mu_plus = v;
  p.v2 = v2;
  p.f2 = v2 / v;
  p.sigma2 = p.z_c * p.z_c * v2 / v;
  p.p_minus1 = 1.0 / (p.z_c * v);
  p.c0 = std::cbrt(v2 / 2.0);
  p.pure_gaussian = vt.spec().pure_gaussian();
  if (!(p.z_c * v2 > 0)) throw Error("edge: z_c V''(z_c) <= 0");
  if (!(p.mu_plus > 0 && p.sigma2 > 0 && p.p_minus1 > 0 && p.p_minus1 < 1))
    throw Error("edge: parameters outside their admissible ranges");
  return p;
}

/// sigma P_{-1} (mu_+ / (2 C_0))^{3/2} - 1/2.
inline double universality_residual(const EdgeParameters& p) {
  return p.sigma() * p.p_minus1 * std::pow(p.mu_plus / (2 * p.c0), 1.5) - 0.5;
}

struct ContourOptions {
  long start_nodes = 1024;
  long max_nodes = 1L << 20;
  double rtol = 1e-10;
};

struct ContourMoment : PowerScaled {
  long nodes = 0;
};

/// m_M = (1/(M+1)) (1/2 pi i) \oint V^{M+1} dz on |z| = z_c by the trapezoid rule on the upper half.
inline ContourMoment contour_moment(const VoiculescuTransform& vt, int M, ContourOptions opt = {}) {
  if (M < 1) throw Error("moment order must be positive");
  double zc = critical_point(vt);
  double mu = vt.eval(zc, 0);
  auto f = [&](double phi) {
    std::complex<double> z = std::polar(zc, phi);
    std::complex<double> r = vt.eval(z, 0) / mu;
    return (std::exp(static_cast<double>(M + 1) * std::log(r)) * z).real();
  };
  long n = opt.start_nodes;
  std::vector<double> vals(n + 1);
  for (long i = 0; i <= n; ++i) vals[i] = f(std::numbers::pi * i / n);
  auto integrate = [&](const std::vector<double>& v, long nn) {
    std::vector<double> w(v);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return pairwise_sum(w) * (std::numbers::pi / nn);
  };
  double scale = mu / (M + 1) / std::numbers::pi;
  double prev = integrate(vals, n) * scale;
  double atol = 1e-15 * zc * mu / (M + 1);
  while (true) {
    if (2 * n > opt.max_nodes) throw NoConvergence("contour quadrature did not converge");
    std::vector<double> next(2 * n + 1);
    for (long i = 0; i <= n; ++i) next[2 * i] = vals[i];
    for (long i = 0; i < n; ++i) next[2 * i + 1] = f(std::numbers::pi * (2 * i + 1) / (2 * n));
    vals.swap(next);
    n *= 2;
    double cur = integrate(vals, n) * scale;
    if (std::abs(cur - prev) <= std::max(opt.rtol * std::abs(cur), atol)) {
      ContourMoment out;
      out.normalized = cur;
      out.base = mu;
      out.power = M;
      out.nodes = n;
      return out;
    }
    prev = cur;
  }
}

/// mu_+^M V^{3/2} / (sqrt(2 pi) V''^{1/2}) M^{-3/2}.
inline PowerScaled steepest_descent_moment(const EdgeParameters& p, int M) {
  if (p.pure_gaussian) throw PureGaussianSpec("single-saddle asymptotic does not apply to a delta-only spec");
  if (M < 1) throw Error("moment order must be positive");
  PowerScaled out;
  out.normalized = std::pow(p.mu_plus, 1.5) / (std::sqrt(2 * std::numbers::pi * p.v2)) * std::pow(M, -1.5);
  out.base = p.mu_plus;
  out.power = M;
  return out;
}

/// sqrt(L+1) z_c^2 V^{L+1} (V''/V)^{1/2} / sqrt(2 pi).
inline PowerScaled free_start_asymptotic(const EdgeParameters& p, long L) {
  if (p.pure_gaussian) throw PureGaussianSpec("single-saddle asymptotic does not apply to a delta-only spec");
  PowerScaled out;
  out.normalized = std::sqrt(static_cast<double>(L + 1)) * p.z_c * p.z_c * p.mu_plus * std::sqrt(p.f2) /
                   std::sqrt(2 * std::numbers::pi);
  out.base = p.mu_plus;
  out.power = L;
  return out;
}

/// sigma / (P_{-1} sqrt(2 pi)): the limit of sqrt(L) P[backward walk stays >= 0].
inline double survival_constant(const EdgeParameters& p) {
  return p.sigma() / (p.p_minus1 * std::sqrt(2 * std::numbers::pi));
}

struct DriftRow {
  long N;
  double z_c_N;
  double scaled_drift;  // |z_c(N) - z_c| N^{2/3}
};

/// z_c(N) under L_i = ceil(gamma_i N) against the limiting z_c.
inline std::vector<DriftRow> critical_point_drift(const EnsembleSpec& spec, const std::vector<long>& Ns) {
  double zc = critical_point(VoiculescuTransform(spec, CumulantKind::limiting()));
  std::vector<DriftRow> rows;
  for (long N : Ns) {
    double zn = critical_point(VoiculescuTransform(spec, CumulantKind::finite(N)));
    rows.push_back({N, zn, std::abs(zn - zc) * std::pow(static_cast<double>(N), 2.0 / 3.0)});
  }
  return rows;
}

}  // namespace edgelab
