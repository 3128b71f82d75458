#pragma once

#include <cmath>
#include <string>

#include "smdpde/errors.hpp"

namespace smdpde {

/// Boundary guard on correlation parameters: objectives are only evaluated
/// for |rho| <= 1 - kRhoGuard.
inline constexpr double kRhoGuard = 1e-6;

/// DPD tuning parameter beta in [0, 1]. Zero is stored exactly and selects
/// the maximum-likelihood limit of every objective.
class TuningBeta {
 public:
  constexpr TuningBeta() = default;

  explicit TuningBeta(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ValidationError("beta must lie in the range [0,1], got " +
                            std::to_string(value));
    }
  }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_mle() const noexcept { return value_ == 0.0; }

  friend constexpr bool operator==(TuningBeta, TuningBeta) = default;

 private:
  double value_ = 0.0;
};

/// Location and variance of one normal component.
struct MarginalParams {
  double mu = 0.0;
  double sigma2 = 1.0;

  double sigma() const { return std::sqrt(sigma2); }
};

/// Two marginals and their correlation.
struct PairParams {
  MarginalParams a;
  MarginalParams b;
  double rho = 0.0;
};

inline void require_positive_variance(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("variance must be positive and finite, got " +
                      std::to_string(sigma2));
  }
}

inline void require_open_correlation(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("correlation must satisfy |rho| < 1, got " +
                      std::to_string(rho));
  }
}

}  // namespace smdpde
