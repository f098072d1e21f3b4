#pragma once

// Finitely supported C^{m x m}-valued measures mu = sum_i delta_{x_i} c_i,
// plus the cross-covariance and POVM constructions.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rkhm/kernels.hpp"

namespace rkhm {

struct Atom {
  Point point;
  ComplexMatrix weight;
};

/// Atoms at bit-identical points are merged by weight addition, so the atom
/// list never holds duplicate points. Atom order is first-insertion order.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(Index m);

  void add_atom(const Point& x, const ComplexMatrix& weight);

  Index dim() const { return m_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  friend AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b);
  AtomicMeasure operator-() const;

 private:
  Index m_;
  std::vector<Atom> atoms_;
  std::map<std::string, std::size_t> index_;
};

/// delta_x with weight 1_A = I_m.
AtomicMeasure dirac(const Point& x, Index m);

/// Right-multiplies every weight by c.
AtomicMeasure scale_measure(const AtomicMeasure& mu, const ComplexMatrix& c);

/// Empirical plug-in of the cross-covariance measure of the columns of an
/// n x m sample matrix. Uncentered: an atom at (x_t[i], x_t[j]) with weight
/// e_ij / n for every sample t. Centered additionally subtracts the product
/// of marginals as atoms at (x_t[i], x_s[j]) with weight e_ij / n^2
/// (V-statistic over all n^2 pairs).
AtomicMeasure cross_covariance_measure(const RealMatrix& samples, bool centered);

/// Empirical measure of the rows with weight I_m / n each.
AtomicMeasure empirical_measure(const RealMatrix& samples, Index m);

/// PSD, unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& rho, double tol_psd = kPsdTolerance,
                         double tol_trace = 1e-10);
  explicit DensityMatrix(const ComplexMatrix& rho) : DensityMatrix(HermitianMatrix(rho)) {}

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(Index m);

  Index dim() const { return rho_.dim(); }
  const HermitianMatrix& hermitian() const { return rho_; }
  const ComplexMatrix& matrix() const { return rho_.matrix(); }

 private:
  HermitianMatrix rho_;
};

/// Orthonormal basis |psi_1>, ..., |psi_m> of C^m (columns of a unitary).
class MeasurementBasis {
 public:
  explicit MeasurementBasis(ComplexMatrix unitary, double tol = 1e-10);

  static MeasurementBasis computational(Index m);
  static MeasurementBasis fourier(Index m);
  static MeasurementBasis random(Index m, std::mt19937_64& rng);

  Index dim() const { return u_.rows(); }
  ComplexVector vector(Index i) const { return u_.col(i); }
  const ComplexMatrix& unitary() const { return u_; }

 private:
  ComplexMatrix u_;
};

/// Atom i = (|psi_i>, |psi_i><psi_i| rho).
AtomicMeasure povm_state_measure(const MeasurementBasis& basis, const DensityMatrix& rho);

}  // namespace rkhm
