#pragma once

// Kernel mean embeddings into the RKHM M_k and their A-valued inner products.
//
// Vectors are stored lazily as finite sums u = sum_i phi(x_i) c_i; every
// quantity below is computed from kernel evaluations only.

#include <span>
#include <vector>

#include "rkhm/measures.hpp"

namespace rkhm {

struct Term {
  Point point;
  ComplexMatrix coeff;
};

class RKHMVector {
 public:
  /// The zero vector.
  explicit RKHMVector(KernelSpec kernel);
  /// Validates every point against the kernel and every coefficient shape.
  RKHMVector(KernelSpec kernel, std::vector<Term> terms);

  const KernelSpec& kernel() const { return kernel_; }
  const std::vector<Term>& terms() const { return terms_; }
  Index dim() const { return kernel_.dim(); }

  /// Term-list concatenation.
  friend RKHMVector operator+(const RKHMVector& u, const RKHMVector& v);
  friend RKHMVector operator-(const RKHMVector& u, const RKHMVector& v);
  RKHMVector operator-() const;
  /// Right A-module action: u c.
  friend RKHMVector operator*(const RKHMVector& u, const ComplexMatrix& c);

 private:
  KernelSpec kernel_;
  std::vector<Term> terms_;
};

/// Phi(mu) = sum_i phi(x_i) c_i for mu = sum_i delta_{x_i} c_i.
RKHMVector embed(const KernelSpec& kernel, const AtomicMeasure& mu);

/// <u, v> = sum_{ij} c_i^* k(x_i, y_j) d_j.
ComplexMatrix inner_product(const RKHMVector& u, const RKHMVector& v);

/// |u| = <u, u>^{1/2}.
HermitianMatrix absolute_value(const RKHMVector& u, double tol_psd = kPsdTolerance);

/// ||u|| = || |u| ||_op.
double norm(const RKHMVector& u, double tol_psd = kPsdTolerance);

/// u(x) = <phi(x), u> = sum_i k(x, x_i) c_i.
ComplexMatrix evaluate(const RKHMVector& u, const Point& x);

/// Hermitian mn x mn matrix whose (i,j) block is <Phi(mu_i), Phi(mu_j)>.
/// Upper-triangle blocks may be spread over `threads` workers (0 = auto);
/// the result does not depend on the thread count.
HermitianMatrix gram_blocks(const KernelSpec& kernel, std::span<const AtomicMeasure> measures,
                            unsigned threads = 1);
HermitianMatrix gram_blocks(std::span<const RKHMVector> vectors, unsigned threads = 1);

/// mn x m stack of <Phi(mu_i), v> over the given vectors.
ComplexMatrix cross_inner_products(std::span<const RKHMVector> vectors, const RKHMVector& v);

}  // namespace rkhm
