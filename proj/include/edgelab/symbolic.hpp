#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace edgelab {

/// Polynomial in kappa_1..kappa_kMax and Laurent in theta, rational coefficients.
class KappaPoly {
 public:
  static constexpr int kMax = 12;
  struct Mono {
    std::array<std::uint8_t, kMax> kappa{};
    std::int16_t theta = 0;
    auto operator<=>(const Mono&) const = default;
  };

  KappaPoly() = default;
  KappaPoly(long c) { if (c) terms_[Mono{}] = c; }
  KappaPoly(const Rational& c) { if (c != 0) terms_[Mono{}] = c; }

  static KappaPoly kappa(int l, unsigned power = 1) {
    if (l < 1 || l > kMax) throw Error("kappa index out of symbolic range");
    Mono m;
    m.kappa[l - 1] = static_cast<std::uint8_t>(power);
    KappaPoly p;
    p.terms_[m] = 1;
    return p;
  }

  static KappaPoly theta(int power = 1) {
    Mono m;
    m.theta = static_cast<std::int16_t>(power);
    KappaPoly p;
    p.terms_[m] = 1;
    return p;
  }

  const std::map<Mono, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  KappaPoly& operator+=(const KappaPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  KappaPoly& operator-=(const KappaPoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend KappaPoly operator+(KappaPoly a, const KappaPoly& b) { return a += b; }
  friend KappaPoly operator-(KappaPoly a, const KappaPoly& b) { return a -= b; }
  friend KappaPoly operator-(const KappaPoly& a) { return KappaPoly(0) - a; }

  friend KappaPoly operator*(const KappaPoly& a, const KappaPoly& b) {
    KappaPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m;
        for (int i = 0; i < kMax; ++i) m.kappa[i] = static_cast<std::uint8_t>(ma.kappa[i] + mb.kappa[i]);
        m.theta = static_cast<std::int16_t>(ma.theta + mb.theta);
        out.add(m, ca * cb);
      }
    return out;
  }
  KappaPoly& operator*=(const KappaPoly& o) { return *this = *this * o; }
  friend KappaPoly operator*(KappaPoly a, const Rational& r) {
    if (r == 0) return KappaPoly();
    for (auto& [m, c] : a.terms_) c *= r;
    return a;
  }
  friend KappaPoly operator*(const Rational& r, KappaPoly a) { return std::move(a) * r; }
  friend KappaPoly operator/(KappaPoly a, const Rational& r) { return std::move(a) * Rational(1 / r); }

  friend bool operator==(const KappaPoly& a, const KappaPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator==(const KappaPoly& a, long b) { return a == KappaPoly(b); }

  /// Substitute numeric kappa_l and theta.
  template <class KappaFn>
  Rational evaluate(KappaFn&& kappa, const Rational& theta) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < kMax; ++i)
        if (m.kappa[i]) t *= pow(Rational(kappa(i + 1)), m.kappa[i]);
      if (m.theta > 0) t *= pow(theta, static_cast<unsigned>(m.theta));
      if (m.theta < 0) t /= pow(theta, static_cast<unsigned>(-m.theta));
      total += t;
    }
    return total;
  }

  /// Every coefficient has the given sign (+1 or -1).
  bool all_signs(int sign) const {
    for (const auto& [m, c] : terms_)
      if (sgn(c) != sign) return false;
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      os << (first ? "" : " + ") << "(" << to_string(c) << ")";
      first = false;
      for (int i = 0; i < kMax; ++i)
        if (m.kappa[i]) os << "*k" << i + 1 << (m.kappa[i] > 1 ? "^" + std::to_string(m.kappa[i]) : "");
      if (m.theta) os << "*theta^" << m.theta;
    }
    return os.str();
  }

 private:
  void add(const Mono& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  std::map<Mono, Rational> terms_;
};

}  // namespace edgelab
