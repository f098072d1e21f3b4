#include "rkhm/matalg.hpp"

#include <string>

namespace rkhm {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

namespace {

double hermitian_abs_max_eig(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  const JacobiHermitianSolver<double> solver(h);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "Hermitian matrix must be square");
  require_finite(m, "Hermitian matrix");
  const ComplexMatrix skew = m - m.adjoint();
  const double skew_f = skew.norm();
  if (skew_f > 0.0) {
    // ||S||_op <= ||S||_F and ||M||_F / sqrt(n) <= ||M||_op, so this cheap
    // test is sufficient; fall back to exact norms only when it fails.
    const double n = static_cast<double>(m.rows());
    if (skew_f > tol * m.norm() / std::sqrt(n)) {
      const double skew_op = hermitian_abs_max_eig(Complex(0, 1) * skew);
      if (skew_op > tol * operator_norm(m))
        throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
    }
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix hermitize(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "Hermitian matrix must be square");
  return HermitianMatrix(ComplexMatrix((m + m.adjoint()) / 2.0), HermitianMatrix::Trusted{});
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h, const JacobiOptions& opts) {
  const JacobiHermitianSolver<double> solver(h.matrix(), opts);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  // sigma_max(M)^2 is the top eigenvalue of the smaller Gram product.
  const ComplexMatrix gram = m.rows() <= m.cols() ? ComplexMatrix(m * m.adjoint())
                                                  : ComplexMatrix(m.adjoint() * m);
  const JacobiHermitianSolver<double> solver(ComplexMatrix((gram + gram.adjoint()) / 2.0));
  return std::sqrt(std::max(solver.eigenvalues()(0), 0.0));
}

double operator_norm(const HermitianMatrix& h) { return hermitian_abs_max_eig(h.matrix()); }

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  const JacobiHermitianSolver<double> solver(h.matrix());
  return solver.eigenvalues()(h.dim() - 1);
}

HermitianMatrix psd_sqrt(const HermitianMatrix& h, double tol_psd) { return psd_sqrt(h, tol_psd, -1.0); }

HermitianMatrix psd_sqrt(const HermitianMatrix& h, double tol_psd, double scale) {
  if (h.dim() == 0) return h;
  const auto eig = hermitian_eig(h);
  const auto& ev = eig.eigenvalues;
  if (scale < 0.0) scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (ev(ev.size() - 1) < -tol_psd * scale)
    throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(ev(ev.size() - 1)) +
                                       " below -tol_psd * ||H||");
  const RealVector root = ev.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& v = eig.eigenvectors;
  return hermitize(v * root.cast<Complex>().asDiagonal() * v.adjoint());
}

bool is_psd(const HermitianMatrix& h, double tol) {
  if (h.dim() == 0) return true;
  const auto eig = hermitian_eig(h);
  const auto& ev = eig.eigenvalues;
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(ev.size() - 1) >= -tol * scale;
}

RealMatrix squared_moduli(const ComplexMatrix& m) { return m.cwiseAbs2(); }

ComplexMatrix block_assemble(const BlockGrid& blocks) {
  const auto rows = static_cast<Index>(blocks.size());
  if (rows == 0) return ComplexMatrix(0, 0);
  const auto cols = static_cast<Index>(blocks[0].size());
  const Index m = cols == 0 ? 0 : blocks[0][0].rows();
  for (const auto& row : blocks) {
    if (static_cast<Index>(row.size()) != cols)
      throw Error(ErrorCode::DimensionMismatch, "block grid rows must have equal length");
    for (const auto& b : row)
      if (b.rows() != m || b.cols() != m)
        throw Error(ErrorCode::DimensionMismatch, "all blocks must be m x m with equal m");
  }
  ComplexMatrix out(rows * m, cols * m);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out.block(i * m, j * m, m, m) = blocks[i][j];
  return out;
}

BlockGrid block_extract(const ComplexMatrix& m, Index block_dim) {
  if (block_dim <= 0 || m.rows() % block_dim != 0 || m.cols() % block_dim != 0)
    throw Error(ErrorCode::DimensionMismatch, "matrix is not a grid of block_dim x block_dim blocks");
  const Index rows = m.rows() / block_dim;
  const Index cols = m.cols() / block_dim;
  BlockGrid out(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    out[i].reserve(static_cast<std::size_t>(cols));
    for (Index j = 0; j < cols; ++j)
      out[i].push_back(m.block(i * block_dim, j * block_dim, block_dim, block_dim));
  }
  return out;
}

}  // namespace rkhm
