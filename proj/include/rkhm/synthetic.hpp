#pragma once

// Seeded multivariate sample sources for the two-sample experiments.

#include <random>

#include "rkhm/matalg.hpp"

namespace rkhm {

/// Zero-mean Gaussian with unit variances and the given correlation matrix,
/// so every marginal is N(0, 1) whatever the correlation structure.
class CorrelatedSource {
 public:
  explicit CorrelatedSource(RealMatrix correlation);

  /// Three variables: a fixed (X1, X2) correlation of 0.3 and X3 tied to X1
  /// with correlation `coupling`. Changing the coupling changes only the
  /// cross-variable structure.
  static CorrelatedSource three_variable(double coupling);

  Index dim() const { return chol_.rows(); }
  const RealMatrix& correlation() const { return correlation_; }

  /// n x dim sample matrix.
  RealMatrix sample(Index n, std::mt19937_64& rng) const;

 private:
  RealMatrix correlation_;
  RealMatrix chol_;
};

}  // namespace rkhm
