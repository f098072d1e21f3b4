#include "rkhm/rkhm_pca.hpp"

#include "rkhm/random.hpp"

namespace rkhm {

PCAModel::PCAModel(std::vector<RKHMVector> training, HermitianMatrix gram, RealVector eigenvalues,
                   ComplexMatrix eigenvectors, Index axes)
    : training_(std::move(training)),
      gram_(std::move(gram)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      axes_(axes) {
  if (training_.empty()) throw Error(ErrorCode::EmptySample, "PCA model needs training vectors");
  if (axes_ < 1 || axes_ > eigenvalues_.size())
    throw Error(ErrorCode::InvalidArgument, "retained axis count must lie in [1, n0]");
}

PCAModel PCAModel::with_axes(Index s) const {
  if (s < 1) throw Error(ErrorCode::InvalidArgument, "axis count must be >= 1");
  PCAModel out = *this;
  out.axes_ = std::min(s, nonzero_count());
  return out;
}

ComplexMatrix PCAModel::coefficient_block(Index j) const {
  if (j < 0 || j >= nonzero_count()) throw Error(ErrorCode::InvalidArgument, "axis index out of range");
  ComplexMatrix c = ComplexMatrix::Zero(gram_.dim(), dim());
  c.col(0) = eigenvectors_.col(j) / std::sqrt(eigenvalues_(j));
  return c;
}

RKHMVector PCAModel::axis(Index j) const {
  const ComplexMatrix c = coefficient_block(j);
  const Index m = dim();
  RKHMVector p(kernel());
  for (std::size_t i = 0; i < training_.size(); ++i)
    p = p + training_[i] * ComplexMatrix(c.block(static_cast<Index>(i) * m, 0, m, m));
  return p;
}

ComplexMatrix PCAModel::axis_inner_product(Index i, Index j) const {
  return coefficient_block(i).adjoint() * gram_.matrix() * coefficient_block(j);
}

PCAModel fit_pca(const KernelSpec& kernel, std::span<const AtomicMeasure> measures, Index s, double rank_tol,
                 unsigned threads) {
  if (measures.empty()) throw Error(ErrorCode::EmptySample, "PCA needs at least one measure");
  if (s < 1) throw Error(ErrorCode::InvalidArgument, "axis count must be >= 1");
  std::vector<RKHMVector> training;
  training.reserve(measures.size());
  for (const auto& mu : measures) training.push_back(embed(kernel, mu));
  HermitianMatrix gram = gram_blocks(training, threads);
  const auto eig = hermitian_eig(gram);

  const double top = eig.eigenvalues(0);
  Index kept = 0;
  if (top > 0.0)
    while (kept < eig.eigenvalues.size() && eig.eigenvalues(kept) > rank_tol * top) ++kept;
  if (kept == 0) throw Error(ErrorCode::DegenerateGram, "all embeddings are numerically zero");

  return PCAModel(std::move(training), std::move(gram), eig.eigenvalues.head(kept),
                  eig.eigenvectors.leftCols(kept), std::min(s, kept));
}

std::vector<ComplexMatrix> principal_components(const PCAModel& model, const RKHMVector& u) {
  const ComplexMatrix g = cross_inner_products(model.training(), u);
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(model.axes()));
  for (Index j = 0; j < model.axes(); ++j) out.push_back(model.coefficient_block(j).adjoint() * g);
  return out;
}

std::vector<ComplexMatrix> principal_components(const PCAModel& model, const AtomicMeasure& mu) {
  return principal_components(model, embed(model.kernel(), mu));
}

namespace {

struct Residual {
  HermitianMatrix squared;
  double scale;
};

Residual residual(const PCAModel& model, const AtomicMeasure& mu) {
  const RKHMVector u = embed(model.kernel(), mu);
  const ComplexMatrix self = inner_product(u, u);
  ComplexMatrix r = self;
  for (const auto& comp : principal_components(model, u)) r -= comp.adjoint() * comp;
  return {hermitize(r), operator_norm(hermitize(self))};
}

}  // namespace

HermitianMatrix squared_reconstruction_error(const PCAModel& model, const AtomicMeasure& mu) {
  return residual(model, mu).squared;
}

HermitianMatrix reconstruction_error(const PCAModel& model, const AtomicMeasure& mu, double tol_psd) {
  const Residual r = residual(model, mu);
  return psd_sqrt(r.squared, tol_psd, r.scale);
}

const char* score_reduction_name(ScoreReduction r) {
  switch (r) {
    case ScoreReduction::OperatorNorm: return "operator_norm";
    case ScoreReduction::HadamardThenOpNorm: return "hadamard_then_operator_norm";
  }
  return "?";
}

double score_error(const HermitianMatrix& error, ScoreReduction r) {
  switch (r) {
    case ScoreReduction::OperatorNorm: return operator_norm(error);
    case ScoreReduction::HadamardThenOpNorm: return operator_norm(squared_moduli(error.matrix()));
  }
  return 0.0;
}

double anomaly_score(const PCAModel& model, const AtomicMeasure& mu, const AnomalyConfig& cfg) {
  if (cfg.axes != model.axes())
    return score_error(reconstruction_error(model.with_axes(cfg.axes), mu), cfg.reduction);
  return score_error(reconstruction_error(model, mu), cfg.reduction);
}

double auc(std::span<const double> normal, std::span<const double> anomalous) {
  if (normal.empty() || anomalous.empty()) throw Error(ErrorCode::EmptySample, "AUC needs both score sets");
  double wins = 0.0;
  for (double a : anomalous)
    for (double n : normal) wins += a > n ? 1.0 : (a == n ? 0.5 : 0.0);
  return wins / (static_cast<double>(normal.size()) * static_cast<double>(anomalous.size()));
}

// ---------------------------------------------------------------------------

HilbertSchmidtPca::HilbertSchmidtPca(std::span<const DensityMatrix> training, Index axes, double rank_tol) {
  if (training.empty()) throw Error(ErrorCode::EmptySample, "PCA needs at least one state");
  if (axes < 1) throw Error(ErrorCode::InvalidArgument, "axis count must be >= 1");
  const auto n = static_cast<Index>(training.size());
  for (const auto& rho : training) training_.push_back(rho.matrix());
  ComplexMatrix k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) k(i, j) = hilbert_schmidt(training_[i], training_[j]);
  const auto eig = hermitian_eig(hermitize(k));
  const double top = eig.eigenvalues(0);
  Index kept = 0;
  if (top > 0.0)
    while (kept < n && eig.eigenvalues(kept) > rank_tol * top) ++kept;
  if (kept == 0) throw Error(ErrorCode::DegenerateGram, "all states are numerically zero");
  eigenvalues_ = eig.eigenvalues.head(kept);
  eigenvectors_ = eig.eigenvectors.leftCols(kept);
  axes_ = std::min(axes, kept);
}

double HilbertSchmidtPca::score(const DensityMatrix& rho) const {
  const auto n = static_cast<Index>(training_.size());
  ComplexVector g(n);
  for (Index i = 0; i < n; ++i) g(i) = hilbert_schmidt(training_[i], rho.matrix());
  double r = std::real(hilbert_schmidt(rho.matrix(), rho.matrix()));
  for (Index j = 0; j < axes_; ++j) r -= std::norm(eigenvectors_.col(j).dot(g)) / eigenvalues_(j);
  return std::sqrt(std::max(r, 0.0));
}

// ---------------------------------------------------------------------------

AtomicMeasure state_measure(const DensityMatrix& rho) {
  return povm_state_measure(MeasurementBasis::fourier(rho.dim()), rho);
}

std::vector<AnomalyResult> run_anomaly_experiment(const AnomalyExperiment& cfg) {
  if (cfg.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "experiment needs at least one seed");
  const KernelSpec kernel = KernelSpec::elementwise(ScalarKernel::gaussian(cfg.gamma), cfg.m);
  const auto measures_of = [](const std::vector<DensityMatrix>& states) {
    std::vector<AtomicMeasure> out;
    out.reserve(states.size());
    for (const auto& rho : states) out.push_back(state_measure(rho));
    return out;
  };

  std::vector<AnomalyResult> results;
  for (const auto& family : cfg.families) {
    AnomalyResult res{family.label(), 0.0, 0.0};
    for (std::uint64_t seed : cfg.seeds) {
      const auto normal = StateFamily::normal();
      const auto train = generate_quantum_states(normal, cfg.train_normal, cfg.m, cfg.noise_level,
                                                 derive_seed(seed, "train"));
      const auto test_normal = generate_quantum_states(normal, cfg.test_normal, cfg.m, cfg.noise_level,
                                                       derive_seed(seed, "test-normal"));
      const auto test_anomalous = generate_quantum_states(family, cfg.test_anomalous, cfg.m, cfg.noise_level,
                                                          derive_seed(seed, "test-anomalous"));

      const auto train_measures = measures_of(train);
      const PCAModel model = fit_pca(kernel, train_measures, cfg.scoring.axes);
      const HilbertSchmidtPca baseline(train, cfg.scoring.axes);

      std::vector<double> rkhm_normal, rkhm_anomalous, hs_normal, hs_anomalous;
      for (const auto& rho : test_normal) {
        rkhm_normal.push_back(anomaly_score(model, state_measure(rho), cfg.scoring));
        hs_normal.push_back(baseline.score(rho));
      }
      for (const auto& rho : test_anomalous) {
        rkhm_anomalous.push_back(anomaly_score(model, state_measure(rho), cfg.scoring));
        hs_anomalous.push_back(baseline.score(rho));
      }
      res.rkhm_auc += auc(rkhm_normal, rkhm_anomalous);
      res.hs_auc += auc(hs_normal, hs_anomalous);
    }
    res.rkhm_auc /= static_cast<double>(cfg.seeds.size());
    res.hs_auc /= static_cast<double>(cfg.seeds.size());
    results.push_back(res);
  }
  return results;
}

}  // namespace rkhm
