#pragma once

#include <stdexcept>
#include <string>

namespace edgelab {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-hypothesis ensemble specification.
struct SpecError : Error {
  using Error::Error;
};

/// A free cumulant came out negative.
struct NegativeCumulant : Error {
  int index;
  explicit NegativeCumulant(int l)
      : Error("negative free cumulant kappa_" + std::to_string(l)), index(l) {}
};

struct PoleEvaluation : Error {
  using Error::Error;
};

struct EnumerationTooLarge : Error {
  using Error::Error;
};

struct NoSignChange : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

/// Single-saddle asymptotics requested for a delta-only spec.
struct PureGaussianSpec : Error {
  using Error::Error;
};

struct TermBudgetExceeded : Error {
  using Error::Error;
};

struct UnsupportedSignature : Error {
  using Error::Error;
};

struct VarianceGuard : Error {
  using Error::Error;
};

}  // namespace edgelab
