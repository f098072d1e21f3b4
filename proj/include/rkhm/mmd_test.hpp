#pragma once

// A-valued maximum mean discrepancy and the permutation two-sample test.

#include <cstdint>
#include <string>
#include <vector>

#include "rkhm/embedding.hpp"
#include "rkhm/random.hpp"
#include "rkhm/synthetic.hpp"

namespace rkhm {

enum class Reduction { OperatorNorm, Trace };
enum class MeasureKind { CrossCovariance, PlainEmpirical };

const char* reduction_name(Reduction r);
const char* measure_kind_name(MeasureKind k);

struct TestConfig {
  double alpha = 0.05;
  int bootstrap_count = 200;
  Reduction reduction = Reduction::OperatorNorm;
  std::uint64_t rng_seed = kDefaultSeed;
  unsigned threads = 1;

  void validate() const;
};

struct TestReport {
  double statistic = 0.0;
  double threshold = 0.0;
  bool accept = true;
  HermitianMatrix mmd_matrix;
};

/// |Phi(mu) - Phi(nu)|. The squared form is assembled as
/// (<mu,mu> + <nu,nu>) - (<mu,nu> + <nu,mu>), which is exactly zero for
/// identical inputs and exactly symmetric in (mu, nu).
HermitianMatrix mmd(const KernelSpec& kernel, const AtomicMeasure& mu, const AtomicMeasure& nu);

double reduce(const HermitianMatrix& h, Reduction r);

double mmd_scalar(const KernelSpec& kernel, const AtomicMeasure& mu, const AtomicMeasure& nu, Reduction r);

/// Classical RKHS MMD between the empirical laws of the rows of X and Y.
double scalar_rkhs_mmd(const ScalarKernel& kernel, const RealMatrix& x, const RealMatrix& y);

/// The measure the two-sample test builds from a sample matrix: the
/// uncentered cross-covariance measure, or the empirical measure with
/// weights I_m / n.
AtomicMeasure sample_measure(const RealMatrix& samples, MeasureKind kind, Index m);

/// Block Gram matrix of the per-row measures of a pooled sample. Since
/// sample_measure is an average of per-row measures, <Phi(mu_A), Phi(mu_B)>
/// for any two row subsets A, B is an average of blocks of this matrix; the
/// permutation replicates reuse it instead of re-embedding.
class PooledSampleGram {
 public:
  PooledSampleGram(const KernelSpec& kernel, const RealMatrix& pooled, MeasureKind kind, unsigned threads = 1);

  Index size() const { return n_; }
  Index dim() const { return m_; }

  /// |Phi(mu_A) - Phi(mu_B)| for disjoint row index sets A, B.
  HermitianMatrix mmd(const std::vector<Index>& a, const std::vector<Index>& b) const;

 private:
  ComplexMatrix block_sum(const std::vector<Index>& a, const std::vector<Index>& b) const;

  Index n_;
  Index m_;
  // blocks_[p * m + q](t, s) = [<Phi(nu_t), Phi(nu_s)>]_{pq}
  std::vector<ComplexMatrix> blocks_;
};

/// Permutation test of H0: the measures built from X and Y coincide.
/// Replicate b shuffles the pooled rows with substream (seed, "bootstrap", b)
/// and splits them into groups of the original sizes. The threshold is the
/// ceil((1 - alpha) B)-th smallest replicate statistic.
TestReport bootstrap_two_sample_test(const KernelSpec& kernel, const RealMatrix& x, const RealMatrix& y,
                                     const TestConfig& cfg, MeasureKind kind);

/// ceil((1 - alpha) B)-th order statistic, B = values.size().
double upper_quantile(std::vector<double> values, double alpha);

struct AcceptanceScenario {
  CorrelatedSource source_x = CorrelatedSource::three_variable(0.5);
  CorrelatedSource source_y = CorrelatedSource::three_variable(0.5);
  std::vector<Index> sample_sizes{10, 20, 30, 50, 100};
  double gamma = 1.0;
  TestConfig test;
};

struct AcceptanceRow {
  std::string method;
  Index n = 0;
  double rate = 0.0;
};

/// Fraction of accepted trials per (method, N) for the RKHM cross-covariance
/// test (k = exp(-gamma ||x - y||^2) I_m on pairs) and the scalar RKHS test
/// (exp(-gamma ||x - y||^2) on rows). Trial t at size N draws both samples
/// from substream (seed, "trial", N, t); both methods see the same data.
std::vector<AcceptanceRow> acceptance_rate_experiment(const AcceptanceScenario& scenario, int trials);

}  // namespace rkhm
