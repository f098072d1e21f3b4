#include <doctest.h>

#include "rkhm/mmd_test.hpp"
#include "support.hpp"

using namespace rkhm;
using namespace rkhm::testing;

TEST_CASE("MMD of identical measures is exactly zero") {
  std::mt19937_64 rng(1);
  const auto k = KernelSpec::diagonal(ScalarKernel::gaussian(1.0), 3);
  const AtomicMeasure mu = cross_covariance_measure(random_samples(10, 3, rng), false);
  CHECK(mmd(k, mu, mu).matrix().isZero(0.0));
}

TEST_CASE("MMD is symmetric") {
  std::mt19937_64 rng(2);
  const auto k = KernelSpec::elementwise(ScalarKernel::gaussian(1.0), 2);
  const AtomicMeasure mu = random_measure(k, 4, rng), nu = random_measure(k, 3, rng);
  CHECK(mmd(k, mu, nu) == mmd(k, nu, mu));
}

TEST_CASE("scalar MMD closed form and reductions") {
  const auto k = KernelSpec::diagonal(ScalarKernel::gaussian(1.0), 1);
  const double expected = std::sqrt(2.0 - 2.0 * std::exp(-1.0));
  const AtomicMeasure a = dirac(real_point({0.0}), 1), b = dirac(real_point({1.0}), 1);
  CHECK(mmd_scalar(k, a, b, Reduction::OperatorNorm) == doctest::Approx(expected));
  CHECK(mmd_scalar(k, a, b, Reduction::Trace) == doctest::Approx(expected));
  RealMatrix x(1, 1), y(1, 1);
  x << 0.0;
  y << 1.0;
  CHECK(scalar_rkhs_mmd(ScalarKernel::gaussian(1.0), x, y) == doctest::Approx(expected));
  CHECK(scalar_rkhs_mmd(ScalarKernel::gaussian(1.0), x, x) == 0.0);
}

TEST_CASE("MMD grows with the scaled difference") {
  std::mt19937_64 rng(3);
  const auto k = KernelSpec::diagonal(ScalarKernel::gaussian(1.0), 2);
  const AtomicMeasure mu = random_measure(k, 3, rng), nu = random_measure(k, 3, rng);
  double previous = -1.0;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const AtomicMeasure mixed = mu + scale_measure(nu + (-mu), ComplexMatrix::Identity(2, 2) * t);
    const double d = mmd_scalar(k, mu, mixed, Reduction::Trace);
    CHECK(d >= previous - 1e-12);
    previous = d;
  }
}

TEST_CASE("pooled Gram statistic matches the direct MMD") {
  std::mt19937_64 rng(4);
  for (auto kind : {MeasureKind::CrossCovariance, MeasureKind::PlainEmpirical}) {
    const Index m = kind == MeasureKind::CrossCovariance ? 3 : 1;
    const auto k = KernelSpec::diagonal(ScalarKernel::gaussian(1.0), m);
    const RealMatrix x = random_samples(7, 3, rng), y = random_samples(5, 3, rng);
    RealMatrix pooled(12, 3);
    pooled << x, y;
    const PooledSampleGram gram(k, pooled, kind);
    std::vector<Index> a{0, 1, 2, 3, 4, 5, 6}, b{7, 8, 9, 10, 11};
    const HermitianMatrix fast = gram.mmd(a, b);
    const HermitianMatrix direct = mmd(k, sample_measure(x, kind, m), sample_measure(y, kind, m));
    CHECK(max_abs(fast.matrix() - direct.matrix()) < 1e-10);
  }
}

TEST_CASE("upper quantile uses the ceil((1 - alpha) B)-th order statistic") {
  std::vector<double> v(200);
  for (int i = 0; i < 200; ++i) v[static_cast<std::size_t>(i)] = 199 - i;
  CHECK(upper_quantile(v, 0.05) == 189.0);
  CHECK(upper_quantile({3.0}, 0.05) == 3.0);
  CHECK(upper_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.0);
}

TEST_CASE("bootstrap test is deterministic and thread independent") {
  std::mt19937_64 rng(5);
  const auto k = KernelSpec::diagonal(ScalarKernel::gaussian(1.0), 3);
  const RealMatrix x = random_samples(12, 3, rng), y = random_samples(10, 3, rng);
  TestConfig cfg;
  cfg.bootstrap_count = 50;
  const TestReport a = bootstrap_two_sample_test(k, x, y, cfg, MeasureKind::CrossCovariance);
  cfg.threads = 3;
  const TestReport b = bootstrap_two_sample_test(k, x, y, cfg, MeasureKind::CrossCovariance);
  CHECK(a.statistic == b.statistic);
  CHECK(a.threshold == b.threshold);
  CHECK(a.accept == (a.statistic <= a.threshold));
  CHECK(a.mmd_matrix == b.mmd_matrix);

  const TestReport same = bootstrap_two_sample_test(k, x, x, cfg, MeasureKind::CrossCovariance);
  CHECK(same.statistic == 0.0);
  CHECK(same.accept);

  CHECK_THROWS_AS(bootstrap_two_sample_test(k, x.topRows(1), y, cfg, MeasureKind::CrossCovariance), Error);
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(bootstrap_two_sample_test(k, x, y, cfg, MeasureKind::CrossCovariance), Error);
}

TEST_CASE("acceptance harness rejects zero trials") {
  CHECK_THROWS_AS(acceptance_rate_experiment(AcceptanceScenario{}, 0), Error);
}
