#pragma once

// Kernel PCA for matrix-valued measures and the reconstruction-error
// anomaly score.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rkhm/embedding.hpp"
#include "rkhm/quantum.hpp"

namespace rkhm {

// Axes with sigma_j / sigma_1 near machine precision cannot be normalized to
// 1e-8 accuracy, since the error of the unit-norm check grows like
// eps * sigma_1 / sigma_j. The cutoff keeps that error below 1e-8.
inline constexpr double kRankTolerance = 1e-8;

/// Principal axes p_j = W c_j with W = [Phi(mu_1), ..., Phi(mu_n)].
///
/// c_j is the mn x m block whose first column is sigma_j^{-1/2} v_j for the
/// j-th eigenpair (sigma_j, v_j) of the block Gram matrix G and whose other
/// columns are zero, so <p_i, p_j> = delta_ij e_11: an orthonormal system
/// whose self inner products are rank-one projections.
class PCAModel {
 public:
  PCAModel(std::vector<RKHMVector> training, HermitianMatrix gram, RealVector eigenvalues,
           ComplexMatrix eigenvectors, Index axes);

  const KernelSpec& kernel() const { return training_.front().kernel(); }
  const std::vector<RKHMVector>& training() const { return training_; }
  const HermitianMatrix& gram() const { return gram_; }
  Index dim() const { return kernel().dim(); }

  /// Nonzero eigenvalues sigma_1 >= ... >= sigma_{n0} > 0.
  const RealVector& eigenvalues() const { return eigenvalues_; }
  Index nonzero_count() const { return eigenvalues_.size(); }
  /// Retained axis count s <= n0.
  Index axes() const { return axes_; }

  /// Same fit with a different retained axis count (clamped to n0).
  PCAModel with_axes(Index s) const;

  /// The mn x m coefficient block c_j (0-based j < n0).
  ComplexMatrix coefficient_block(Index j) const;

  /// p_j as an explicit RKHM vector.
  RKHMVector axis(Index j) const;

  /// <p_i, p_j> = c_i^* G c_j.
  ComplexMatrix axis_inner_product(Index i, Index j) const;

 private:
  std::vector<RKHMVector> training_;
  HermitianMatrix gram_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;  // mn x n0
  Index axes_;
};

/// Eigenvalues at or below rank_tol * sigma_1 are discarded; s is clamped
/// to the number kept. Throws DegenerateGram if nothing survives.
PCAModel fit_pca(const KernelSpec& kernel, std::span<const AtomicMeasure> measures, Index s,
                 double rank_tol = kRankTolerance, unsigned threads = 1);

/// <p_j, Phi(mu)> for j < s, evaluated Gram-side as c_j^* [<Phi(mu_i), Phi(mu)>]_i.
std::vector<ComplexMatrix> principal_components(const PCAModel& model, const AtomicMeasure& mu);
std::vector<ComplexMatrix> principal_components(const PCAModel& model, const RKHMVector& u);

/// <r, r> for r = Phi(mu) - sum_{j<s} p_j <p_j, Phi(mu)>, from
/// <r, r> = <Phi(mu), Phi(mu)> - sum_j <Phi(mu), p_j><p_j, Phi(mu)>.
HermitianMatrix squared_reconstruction_error(const PCAModel& model, const AtomicMeasure& mu);

/// |r|, the matrix-valued reconstruction error.
HermitianMatrix reconstruction_error(const PCAModel& model, const AtomicMeasure& mu,
                                     double tol_psd = kPsdTolerance);

enum class ScoreReduction { OperatorNorm, HadamardThenOpNorm };

const char* score_reduction_name(ScoreReduction r);

struct AnomalyConfig {
  ScoreReduction reduction = ScoreReduction::HadamardThenOpNorm;
  Index axes = 1;
};

/// OperatorNorm: ||E||_op. HadamardThenOpNorm: ||E o conj(E)||_op, the
/// operator norm of the entrywise squared moduli of E.
double score_error(const HermitianMatrix& error, ScoreReduction r);

double anomaly_score(const PCAModel& model, const AtomicMeasure& mu, const AnomalyConfig& cfg);

/// Mann-Whitney estimate of P(anomalous score > normal score), ties 1/2.
double auc(std::span<const double> scores_normal, std::span<const double> scores_anomalous);

/// Uncentered scalar kernel PCA of density matrices under the
/// Hilbert-Schmidt inner product tr(rho^* rho'). Scores are residual norms.
class HilbertSchmidtPca {
 public:
  HilbertSchmidtPca(std::span<const DensityMatrix> training, Index axes, double rank_tol = kRankTolerance);

  Index axes() const { return axes_; }
  const RealVector& eigenvalues() const { return eigenvalues_; }

  double score(const DensityMatrix& rho) const;

 private:
  std::vector<ComplexMatrix> training_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
  Index axes_;
};

// ---------------------------------------------------------------------------
// Anomaly detection experiment on synthetic states.

struct AnomalyExperiment {
  Index m = 4;
  double noise_level = 0.05;
  Index train_normal = 40;
  Index test_normal = 40;
  Index test_anomalous = 15;
  std::vector<StateFamily> families{StateFamily::phase(0.3)};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double gamma = 1.0;
  AnomalyConfig scoring;
};

struct AnomalyResult {
  std::string family;
  double rkhm_auc = 0.0;  // mean over seeds
  double hs_auc = 0.0;
};

/// RKHM-PCA with the elementwise Gaussian kernel on POVM state measures over
/// the Fourier basis, against Hilbert-Schmidt PCA, mean AUC per family.
std::vector<AnomalyResult> run_anomaly_experiment(const AnomalyExperiment& cfg);

/// Measure used for a state in the anomaly pipeline.
AtomicMeasure state_measure(const DensityMatrix& rho);

}  // namespace rkhm
