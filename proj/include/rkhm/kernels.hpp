#pragma once

// Matrix-valued positive definite kernels k : X x X -> C^{m x m}.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rkhm/matalg.hpp"

namespace rkhm {

/// A point of (X x X), used by cross-covariance measures.
struct PointPair {
  RealVector first;
  RealVector second;
};

using Point = std::variant<RealVector, ComplexVector, PointPair>;

Point real_point(std::initializer_list<double> values);
Point pair_point(double first, double second);

/// Bit-identical comparison: same alternative, same sizes, same bit patterns.
bool identical_points(const Point& a, const Point& b);

/// Byte key with identical_points semantics, usable for ordered lookup.
std::string point_key(const Point& p);

const char* point_kind_name(const Point& p);

enum class ScalarFamily { Gaussian, Laplacian, InverseMultiquadric };

struct ScalarKernel {
  ScalarFamily family = ScalarFamily::Gaussian;
  double gamma = 1.0;  // Gaussian, Laplacian
  double c = 1.0;      // inverse multiquadric offset
  double beta = 0.5;   // inverse multiquadric exponent

  static ScalarKernel gaussian(double gamma = 1.0);
  static ScalarKernel laplacian(double gamma = 1.0);
  static ScalarKernel inverse_multiquadric(double c = 1.0, double beta = 0.5);

  void validate() const;

  /// Evaluates from ||x - y||_2^2 and ||x - y||_1.
  double from_distances(double squared_l2, double l1) const;

  double operator()(const RealVector& x, const RealVector& y) const;
  /// Complex scalars are treated as points of R^2.
  double operator()(Complex x, Complex y) const;
  double operator()(double x, double y) const;

  friend bool operator==(const ScalarKernel&, const ScalarKernel&) = default;
};

const char* family_name(ScalarFamily f);

/// k(x,y) = diag(k_1(x,y), ..., k_m(x,y)). Accepts real vectors and pairs
/// (a pair is treated as the concatenation of its halves, so a Gaussian on
/// a pair is the product of the two Gaussians).
struct DiagonalScalar {
  std::vector<ScalarKernel> diagonal;
  friend bool operator==(const DiagonalScalar&, const DiagonalScalar&) = default;
};

/// [k(x,y)]_{ij} = base(x_i, y_j) for m-tuples x, y (real or complex).
struct Elementwise {
  ScalarKernel base;
  Index m = 1;
  friend bool operator==(const Elementwise&, const Elementwise&) = default;
};

/// k(a, b) = |a><a|b><b| for a, b in C^m.
struct QuantumProjective {
  Index m = 2;
  friend bool operator==(const QuantumProjective&, const QuantumProjective&) = default;
};

/// k((x1,x2),(y1,y2)) = first(x1,y1) * second(x2,y2) * I_m.
struct ProductScalarTimesIdentity {
  ScalarKernel first;
  ScalarKernel second;
  Index m = 1;
  friend bool operator==(const ProductScalarTimesIdentity&,
                         const ProductScalarTimesIdentity&) = default;
};

class KernelSpec {
 public:
  using Variant = std::variant<DiagonalScalar, Elementwise, QuantumProjective, ProductScalarTimesIdentity>;

  explicit KernelSpec(Variant v);

  static KernelSpec diagonal(std::vector<ScalarKernel> diagonal);
  static KernelSpec diagonal(const ScalarKernel& k, Index m);
  static KernelSpec elementwise(const ScalarKernel& k, Index m);
  static KernelSpec quantum_projective(Index m);
  static KernelSpec product_identity(const ScalarKernel& first, const ScalarKernel& second, Index m);

  Index dim() const { return m_; }
  const Variant& variant() const { return v_; }
  std::string name() const;

  /// Throws PointKindMismatch / DimensionMismatch if x cannot be fed to k.
  void check_point(const Point& x) const;

  ComplexMatrix operator()(const Point& x, const Point& y) const;
  /// Same as operator() but writes into a preallocated m x m buffer and
  /// skips the point checks.
  void evaluate_into(const Point& x, const Point& y, ComplexMatrix& out) const;

  /// True when k(x,y) = scalar(x,y) * I for every x, y.
  bool is_scalar_times_identity() const { return scalar_identity_; }
  /// Valid only when is_scalar_times_identity().
  double scalar_value(const Point& x, const Point& y) const;

  friend bool operator==(const KernelSpec& a, const KernelSpec& b) { return a.v_ == b.v_; }

 private:
  Variant v_;
  Index m_ = 0;
  bool scalar_identity_ = false;
};

inline ComplexMatrix eval_kernel(const KernelSpec& k, const Point& x, const Point& y) { return k(x, y); }

/// Minimum eigenvalue test of sum_{ij} c_i^* k(x_i, x_j) c_j. Works for any
/// callable (Point, Point) -> ComplexMatrix.
template <typename KernelFn>
bool check_positive_definite(const KernelFn& kernel, std::span<const Point> points,
                             std::span<const ComplexMatrix> coeffs, double tol) {
  if (points.empty() || points.size() != coeffs.size())
    throw Error(ErrorCode::DimensionMismatch, "need equally many points and coefficients (>= 1)");
  const Index m = coeffs[0].cols();
  ComplexMatrix sum = ComplexMatrix::Zero(m, m);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      sum += coeffs[i].adjoint() * kernel(points[i], points[j]) * coeffs[j];
  return is_psd(hermitize(sum), tol);
}

bool check_positive_definite(const KernelSpec& kernel, std::span<const Point> points,
                             std::span<const ComplexMatrix> coeffs, double tol);

}  // namespace rkhm
