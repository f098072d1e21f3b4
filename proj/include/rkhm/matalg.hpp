#pragma once

// Dense complex matrix algebra over A = C^{m x m}: Hermitian eigensolver,
// PSD square root, operator norm and block assembly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "rkhm/error.hpp"

namespace rkhm {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-8;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const auto v = m(i, j);
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
    }
  return true;
}

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

struct JacobiOptions {
  int max_sweeps = 100;
  // Convergence when the off-diagonal Frobenius mass drops below
  // tolerance * ||H||_F.
  double tolerance = 1e-13;
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Works on the full matrix; each rotation is a unitary 2x2 similarity
/// that zeroes one off-diagonal pair. Eigenvalues come back sorted in
/// descending order, eigenvectors as the matching columns of a unitary
/// matrix.
template <typename RealScalar>
class JacobiHermitianSolver {
 public:
  using Scalar = std::complex<RealScalar>;
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVectorType = Eigen::Matrix<RealScalar, Eigen::Dynamic, 1>;

  JacobiHermitianSolver() = default;

  explicit JacobiHermitianSolver(const MatrixType& h, const JacobiOptions& opts = {}) {
    compute(h, opts);
  }

  JacobiHermitianSolver& compute(const MatrixType& h, const JacobiOptions& opts = {}) {
    const Index n = h.rows();
    if (h.cols() != n) throw Error(ErrorCode::DimensionMismatch, "eigensolver needs a square matrix");
    MatrixType a = h;
    MatrixType v = MatrixType::Identity(n, n);
    const RealScalar total = a.norm();
    const RealScalar target = static_cast<RealScalar>(opts.tolerance) * total;

    sweeps_ = 0;
    while (off_diagonal_norm(a) > target) {
      if (sweeps_ == opts.max_sweeps)
        throw Error(ErrorCode::IterationLimitExceeded,
                    "Jacobi sweeps exhausted before off-diagonal mass converged");
      ++sweeps_;
      for (Index p = 0; p + 1 < n; ++p)
        for (Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
      return std::real(a(i, i)) > std::real(a(j, j));
    });
    eigenvalues_.resize(n);
    eigenvectors_.resize(n, n);
    for (Index k = 0; k < n; ++k) {
      eigenvalues_(k) = std::real(a(order[k], order[k]));
      eigenvectors_.col(k) = v.col(order[k]);
    }
    return *this;
  }

  const RealVectorType& eigenvalues() const { return eigenvalues_; }
  const MatrixType& eigenvectors() const { return eigenvectors_; }
  int sweeps() const { return sweeps_; }

 private:
  static RealScalar off_diagonal_norm(const MatrixType& a) {
    RealScalar s = 0;
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  }

  // Zeroes a(p,q) with U = diag-phase * real rotation * diag-phase^*.
  static void rotate(MatrixType& a, MatrixType& v, Index p, Index q) {
    const Scalar z = a(p, q);
    const RealScalar mag = std::abs(z);
    if (mag == RealScalar(0)) return;
    const Scalar phase = z / mag;
    const RealScalar app = std::real(a(p, p));
    const RealScalar aqq = std::real(a(q, q));
    const RealScalar theta = (aqq - app) / (RealScalar(2) * mag);
    const RealScalar t = (theta >= 0 ? RealScalar(1) : RealScalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + RealScalar(1)));
    const RealScalar c = RealScalar(1) / std::sqrt(t * t + RealScalar(1));
    const RealScalar s = t * c;
    const Scalar s_phase = s * phase;
    const Scalar s_phase_conj = s * std::conj(phase);

    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
      const Scalar akp = a(k, p), akq = a(k, q);
      a(k, p) = c * akp - s_phase_conj * akq;
      a(k, q) = s_phase * akp + c * akq;
    }
    for (Index k = 0; k < n; ++k) {
      const Scalar apk = a(p, k), aqk = a(q, k);
      a(p, k) = c * apk - s_phase * aqk;
      a(q, k) = s_phase_conj * apk + c * aqk;
    }
    a(p, q) = a(q, p) = Scalar(0);
    a(p, p) = Scalar(app - t * mag);
    a(q, q) = Scalar(aqq + t * mag);
    for (Index k = 0; k < n; ++k) {
      const Scalar vkp = v(k, p), vkq = v(k, q);
      v(k, p) = c * vkp - s_phase_conj * vkq;
      v(k, q) = s_phase * vkp + c * vkq;
    }
  }

  RealVectorType eigenvalues_;
  MatrixType eigenvectors_;
  int sweeps_ = 0;
};

/// Square matrix with exact Hermitian symmetry.
///
/// Construction replaces M by (M + M^*)/2 and rejects M when
/// ||M - M^*||_op > tol * ||M||_op.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kHermitianTolerance);

  static HermitianMatrix identity(Index dim);
  static HermitianMatrix zero(Index dim);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  friend HermitianMatrix hermitize(const ComplexMatrix& m);

  ComplexMatrix m_;
};

/// (M + M^*)/2 without the asymmetry check; for Gram-type matrices whose
/// asymmetry is pure roundoff.
HermitianMatrix hermitize(const ComplexMatrix& m);

struct EigenDecomposition {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // orthonormal columns
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h, const JacobiOptions& opts = {});

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);
/// Largest eigenvalue modulus.
double operator_norm(const HermitianMatrix& h);

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  return operator_norm(ComplexMatrix(m.template cast<Complex>()));
}

double min_eigenvalue(const HermitianMatrix& h);

/// V diag(sqrt(max(sigma, 0))) V^*. Throws NotPSD when an eigenvalue is
/// below -tol_psd * ||H||_op.
HermitianMatrix psd_sqrt(const HermitianMatrix& h, double tol_psd = kPsdTolerance);

/// As above, but negative eigenvalues are judged against `scale` instead of
/// ||H||_op. Used for differences such as residuals, whose own norm may be
/// pure roundoff.
HermitianMatrix psd_sqrt(const HermitianMatrix& h, double tol_psd, double scale);

/// True when min eigenvalue >= -tol * ||H||_op.
bool is_psd(const HermitianMatrix& h, double tol = kPsdTolerance);

inline double real_trace(const HermitianMatrix& h) { return std::real(h.matrix().trace()); }

/// Entrywise product of M with conj(M), i.e. the squared moduli.
RealMatrix squared_moduli(const ComplexMatrix& m);

using BlockGrid = std::vector<std::vector<ComplexMatrix>>;

/// output(i*m + p, j*m + q) == blocks[i][j](p, q).
ComplexMatrix block_assemble(const BlockGrid& blocks);
BlockGrid block_extract(const ComplexMatrix& m, Index block_dim);

}  // namespace rkhm
