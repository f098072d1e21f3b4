#include "rkhm/measures.hpp"

#include <cmath>
#include <numbers>

namespace rkhm {

AtomicMeasure::AtomicMeasure(Index m) : m_(m) {
  if (m < 1) throw Error(ErrorCode::InvalidDimension, "measure weights need m >= 1");
}

void AtomicMeasure::add_atom(const Point& x, const ComplexMatrix& weight) {
  if (weight.rows() != m_ || weight.cols() != m_)
    throw Error(ErrorCode::DimensionMismatch, "atom weight must be m x m");
  require_finite(weight, "atom weight");
  if (!atoms_.empty() && atoms_.front().point.index() != x.index())
    throw Error(ErrorCode::PointKindMismatch, "all atoms of a measure share one point kind");
  auto [it, inserted] = index_.try_emplace(point_key(x), atoms_.size());
  if (inserted) atoms_.push_back({x, weight});
  else atoms_[it->second].weight += weight;
}

AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "measures differ in weight dimension");
  AtomicMeasure out = a;
  for (const auto& atom : b.atoms()) out.add_atom(atom.point, atom.weight);
  return out;
}

AtomicMeasure AtomicMeasure::operator-() const {
  AtomicMeasure out = *this;
  for (auto& atom : out.atoms_) atom.weight = -atom.weight;
  return out;
}

AtomicMeasure dirac(const Point& x, Index m) {
  AtomicMeasure mu(m);
  mu.add_atom(x, ComplexMatrix::Identity(m, m));
  return mu;
}

AtomicMeasure scale_measure(const AtomicMeasure& mu, const ComplexMatrix& c) {
  if (c.rows() != mu.dim() || c.cols() != mu.dim())
    throw Error(ErrorCode::DimensionMismatch, "scaling matrix must be m x m");
  AtomicMeasure out(mu.dim());
  for (const auto& atom : mu.atoms()) out.add_atom(atom.point, atom.weight * c);
  return out;
}

namespace {

void check_samples(const RealMatrix& samples) {
  if (samples.rows() == 0) throw Error(ErrorCode::EmptySample, "no samples");
  if (samples.cols() == 0) throw Error(ErrorCode::InvalidDimension, "samples need at least one variable");
  if (!samples.allFinite()) throw Error(ErrorCode::NonFinite, "samples contain non-finite values");
}

}  // namespace

AtomicMeasure cross_covariance_measure(const RealMatrix& samples, bool centered) {
  check_samples(samples);
  const Index n = samples.rows();
  const Index m = samples.cols();
  AtomicMeasure mu(m);
  ComplexMatrix unit = ComplexMatrix::Zero(m, m);
  const double joint = 1.0 / static_cast<double>(n);
  for (Index t = 0; t < n; ++t)
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        unit(i, j) = joint;
        mu.add_atom(pair_point(samples(t, i), samples(t, j)), unit);
        unit(i, j) = 0.0;
      }
  if (centered) {
    const double product = -joint * joint;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        for (Index t = 0; t < n; ++t)
          for (Index s = 0; s < n; ++s) {
            unit(i, j) = product;
            mu.add_atom(pair_point(samples(t, i), samples(s, j)), unit);
            unit(i, j) = 0.0;
          }
  }
  return mu;
}

AtomicMeasure empirical_measure(const RealMatrix& samples, Index m) {
  check_samples(samples);
  AtomicMeasure mu(m);
  const ComplexMatrix w = ComplexMatrix::Identity(m, m) / static_cast<double>(samples.rows());
  for (Index t = 0; t < samples.rows(); ++t) mu.add_atom(RealVector(samples.row(t).transpose()), w);
  return mu;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(const HermitianMatrix& rho, double tol_psd, double tol_trace) : rho_(rho) {
  if (rho_.dim() < 1) throw Error(ErrorCode::InvalidDimension, "density matrix needs dim >= 1");
  const double tr = real_trace(rho_);
  if (std::abs(tr - 1.0) > tol_trace)
    throw Error(ErrorCode::InvalidArgument, "density matrix trace is " + std::to_string(tr) + ", expected 1");
  if (!is_psd(rho_, tol_psd)) throw Error(ErrorCode::NotPSD, "density matrix is not positive semi-definite");
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw Error(ErrorCode::InvalidArgument, "pure state needs a nonzero vector");
  const ComplexVector u = psi / nrm;
  return DensityMatrix(hermitize(u * u.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index m) {
  return DensityMatrix(hermitize(ComplexMatrix::Identity(m, m) / static_cast<double>(m)));
}

MeasurementBasis::MeasurementBasis(ComplexMatrix unitary, double tol) : u_(std::move(unitary)) {
  if (u_.rows() < 1 || u_.rows() != u_.cols())
    throw Error(ErrorCode::DimensionMismatch, "basis must hold m vectors in C^m");
  require_finite(u_, "basis");
  const ComplexMatrix gram = u_.adjoint() * u_;
  for (Index i = 0; i < gram.rows(); ++i)
    for (Index j = 0; j < gram.cols(); ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(gram(i, j) - expected) > tol)
        throw Error(ErrorCode::InvalidArgument, "basis vectors are not orthonormal");
    }
}

MeasurementBasis MeasurementBasis::computational(Index m) {
  return MeasurementBasis(ComplexMatrix::Identity(m, m));
}

MeasurementBasis MeasurementBasis::fourier(Index m) {
  ComplexMatrix f(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index j = 0; j < m; ++j)
    for (Index k = 0; k < m; ++k)
      f(j, k) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(m));
  return MeasurementBasis(f);
}

MeasurementBasis MeasurementBasis::random(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  // Modified Gram-Schmidt, run twice for orthogonality to roundoff.
  for (int pass = 0; pass < 2; ++pass)
    for (Index j = 0; j < m; ++j) {
      for (Index k = 0; k < j; ++k) g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
      g.col(j).normalize();
    }
  return MeasurementBasis(g);
}

AtomicMeasure povm_state_measure(const MeasurementBasis& basis, const DensityMatrix& rho) {
  if (basis.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "basis and state differ in dimension");
  AtomicMeasure mu(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) {
    const ComplexVector psi = basis.vector(i);
    mu.add_atom(psi, psi * (psi.adjoint() * rho.matrix()));
  }
  return mu;
}

}  // namespace rkhm
