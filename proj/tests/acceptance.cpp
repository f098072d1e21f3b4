// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

#include "rkhm/cli.hpp"
#include "rkhm/mmd_test.hpp"
#include "rkhm/rkhm_pca.hpp"
#include "support.hpp"

using namespace rkhm;
using namespace rkhm::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1. Quantum inner product equals the Hilbert-Schmidt inner product.
Outcome povm_trace_identity() {
  const auto start = Clock::now();
  const auto k = KernelSpec::quantum_projective(4);
  double worst = 0.0;
  for (std::uint64_t b = 0; b < 5; ++b) {
    auto basis_rng = substream(1, "acceptance-basis", {b});
    const MeasurementBasis basis = MeasurementBasis::random(4, basis_rng);
    for (std::uint64_t p = 0; p < 50; ++p) {
      auto rng = substream(1, "acceptance-states", {b, p});
      const DensityMatrix r1 = random_density(4, rng), r2 = random_density(4, rng);
      const ComplexMatrix g =
          inner_product(embed(k, povm_state_measure(basis, r1)), embed(k, povm_state_measure(basis, r2)));
      const Complex expected = (r2.matrix() * r1.matrix().adjoint()).trace();
      worst = std::max(worst, std::abs(g.trace() - expected));
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-10 && t < 5.0, fmt("max |error| %.2e over 250 pairs, %.2fs", worst, t)};
}

// Independent scalar-Gram oracle for tr <Phi(mu_X), Phi(mu_Y)> under the
// product kernel k1 * k2 * I on pairs.
double pair_gram_oracle(const ScalarKernel& k1, const ScalarKernel& k2, const RealMatrix& x, const RealMatrix& y) {
  const Index m = x.cols();
  double total = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      double s = 0.0;
      for (Index t = 0; t < x.rows(); ++t)
        for (Index u = 0; u < y.rows(); ++u) s += k1(x(t, i), y(u, i)) * k2(x(t, j), y(u, j));
      total += s / (static_cast<double>(x.rows()) * static_cast<double>(y.rows()));
    }
  return total;
}

// 2. Embedding distance of cross-covariance measures equals the
// Hilbert-Schmidt distance of cross-covariance operators.
Outcome cross_covariance_identity() {
  const auto start = Clock::now();
  const ScalarKernel g = ScalarKernel::gaussian(1.0);
  const auto k = KernelSpec::product_identity(g, g, 3);
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    auto rng = substream(2, "acceptance-cross-covariance", {inst});
    std::uniform_int_distribution<Index> size(2, 20);
    const Index n = size(rng), n2 = size(rng);
    const RealMatrix x = random_samples(n, 3, rng);
    RealMatrix y = random_samples(n2, 3, rng);
    y.col(2) = 0.6 * y.col(0) + 0.8 * y.col(2);
    const RKHMVector d = embed(k, cross_covariance_measure(x, false)) - embed(k, cross_covariance_measure(y, false));
    const double ours = std::real(inner_product(d, d).trace());
    const double oracle =
        pair_gram_oracle(g, g, x, x) + pair_gram_oracle(g, g, y, y) - 2.0 * pair_gram_oracle(g, g, x, y);
    worst = std::max(worst, std::abs(ours - oracle) / std::abs(oracle));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-8 && t < 10.0, fmt("max relative error %.2e over 20 instances, %.2fs", worst, t)};
}

// 3. Reproducing property and the Dirac law for every kernel variant.
Outcome reproducing_property() {
  double worst = 0.0;
  std::uint64_t variant = 0;
  for (const auto& k : all_kernel_variants(3)) {
    for (std::uint64_t draw = 0; draw < 100; ++draw) {
      auto rng = substream(3, "acceptance-reproducing", {variant, draw});
      const Point x = random_point(k, rng), y = random_point(k, rng);
      const RKHMVector dx = embed(k, dirac(x, 3));
      worst = std::max(worst, max_abs(inner_product(dx, embed(k, dirac(y, 3))) - k(x, y)));
      const RKHMVector u = embed(k, random_measure(k, 4, rng));
      worst = std::max(worst, max_abs(evaluate(u, x) - inner_product(dx, u)));
    }
    ++variant;
  }
  return {worst <= 1e-12, fmt("max |error| %.2e over 5 variants x 100 draws", worst)};
}

// 4. Cauchy-Schwarz inequality in Loewner order.
Outcome cauchy_schwarz() {
  double worst = 0.0;
  const auto kernels = all_kernel_variants(3);
  for (std::uint64_t pair = 0; pair < 100; ++pair) {
    auto rng = substream(4, "acceptance-cauchy-schwarz", {pair});
    const KernelSpec& k = kernels[pair % kernels.size()];
    const RKHMVector u = random_vector(k, 3, rng), v = random_vector(k, 4, rng);
    const ComplexMatrix uv = inner_product(u, v);
    const double nu = norm(u);
    const ComplexMatrix bound = nu * nu * inner_product(v, v);
    const HermitianMatrix gap = hermitize(bound - uv.adjoint() * uv);
    worst = std::max(worst, -min_eigenvalue(gap) / std::max(1.0, operator_norm(bound)));
  }
  return {worst <= 1e-8, fmt("worst relative negative eigenvalue %.2e over 100 pairs", std::max(worst, 0.0))};
}

// 5. Structural properties of fitted PCA models.
Outcome pca_structure() {
  double ons = 0.0, idem = 0.0, rank = 0.0, monotone = 0.0, full = 0.0;
  for (std::uint64_t set = 0; set < 20; ++set) {
    auto rng = substream(5, "acceptance-pca", {set});
    const Index m = std::uniform_int_distribution<Index>(1, 4)(rng);
    const Index n = std::uniform_int_distribution<Index>(1, 6)(rng);
    const auto kernels = all_kernel_variants(m);
    const KernelSpec& k = kernels[set % kernels.size()];
    std::vector<AtomicMeasure> training;
    for (Index i = 0; i < n; ++i) training.push_back(random_measure(k, 3, rng));
    const PCAModel model = fit_pca(k, training, m * n);

    for (Index i = 0; i < model.axes(); ++i)
      for (Index j = 0; j < model.axes(); ++j) {
        const ComplexMatrix p = model.axis_inner_product(i, j);
        if (i != j) {
          ons = std::max(ons, max_abs(p));
        } else {
          idem = std::max(idem, max_abs(p * p - p));
          const RealVector ev = hermitian_eig(hermitize(p)).eigenvalues;
          if (ev.size() > 1) rank = std::max(rank, std::abs(ev(1)));
        }
      }

    double self = 0.0, self_abs = 0.0;
    for (const auto& mu : training) {
      const RKHMVector u = embed(k, mu);
      const HermitianMatrix g = hermitize(inner_product(u, u));
      self += real_trace(g);
      self_abs += real_trace(psd_sqrt(g));
    }
    double previous = std::numeric_limits<double>::infinity();
    double last_squared = 0.0;
    for (Index s = 1; s <= model.nonzero_count(); ++s) {
      const PCAModel ms = model.with_axes(s);
      double err = 0.0;
      last_squared = 0.0;
      for (const auto& mu : training) {
        err += real_trace(reconstruction_error(ms, mu));
        last_squared += real_trace(squared_reconstruction_error(ms, mu));
      }
      if (err > previous) monotone = std::max(monotone, (err - previous) / self_abs);
      previous = err;
    }
    full = std::max(full, last_squared / self);
  }
  const bool pass = ons <= 1e-8 && idem <= 1e-8 && rank <= 1e-8 && monotone <= 1e-9 && full <= 1e-6;
  std::ostringstream os;
  os << fmt("orthogonality %.1e, idempotence %.1e, rank-one %.1e, ", ons, idem, rank)
     << fmt("monotonicity violation %.1e, full-rank residual %.1e", monotone, full);
  return {pass, os.str()};
}

// 6. MMD axioms and the scalar degeneration.
Outcome mmd_axioms() {
  double zero = 0.0, degeneration = 0.0;
  bool symmetric = true;
  const auto kernels = all_kernel_variants(3);
  for (std::uint64_t set = 0; set < 50; ++set) {
    auto rng = substream(6, "acceptance-mmd", {set});
    const KernelSpec& k = kernels[set % kernels.size()];
    const AtomicMeasure mu = random_measure(k, 4, rng), nu = random_measure(k, 3, rng);
    zero = std::max(zero, max_abs(mmd(k, mu, mu).matrix()));
    symmetric = symmetric && mmd(k, mu, nu) == mmd(k, nu, mu);

    const Index n = std::uniform_int_distribution<Index>(1, 15)(rng);
    const Index n2 = std::uniform_int_distribution<Index>(1, 15)(rng);
    const Index d = std::uniform_int_distribution<Index>(1, 3)(rng);
    const RealMatrix x = random_samples(n, d, rng), y = random_samples(n2, d, rng);
    const ScalarKernel g = ScalarKernel::gaussian(0.5 + 0.1 * static_cast<double>(set % 5));
    const double ours = mmd_scalar(KernelSpec::diagonal(g, 1), empirical_measure(x, 1), empirical_measure(y, 1),
                                   Reduction::OperatorNorm);
    degeneration = std::max(degeneration, std::abs(ours - scalar_rkhs_mmd(g, x, y)));
  }
  return {zero <= 1e-10 && symmetric && degeneration <= 1e-10,
          fmt("self-distance %.1e, ", zero) + (symmetric ? "symmetric (bitwise), " : "ASYMMETRIC, ") +
              fmt("m=1 vs scalar MMD %.1e over 50 sets", degeneration)};
}

// 7. Two-sample calibration on the synthetic sources.
Outcome two_sample_calibration() {
  const auto start = Clock::now();
  AcceptanceScenario same;
  same.sample_sizes = {20};
  same.test.alpha = 0.05;
  same.test.bootstrap_count = 200;
  const auto same_rows = acceptance_rate_experiment(same, 100);

  AcceptanceScenario different = same;
  different.source_y = CorrelatedSource::three_variable(-0.5);
  different.sample_sizes = {100};
  const auto diff_rows = acceptance_rate_experiment(different, 100);
  const double t = seconds_since(start);

  const auto rate = [](const std::vector<AcceptanceRow>& rows, const std::string& method) {
    for (const auto& r : rows)
      if (r.method == method) return r.rate;
    return -1.0;
  };
  const double same_rkhm = rate(same_rows, "rkhm_cross_covariance"), same_rkhs = rate(same_rows, "rkhs");
  const double diff_rkhm = rate(diff_rows, "rkhm_cross_covariance"), diff_rkhs = rate(diff_rows, "rkhs");
  const bool same_ok = same_rkhm >= 0.88 && same_rkhs >= 0.88;
  const bool order_ok = diff_rkhm < diff_rkhs;
  std::ostringstream os;
  os << fmt("same source N=20: rkhm %.2f, rkhs %.2f; ", same_rkhm, same_rkhs)
     << fmt("coupling 0.5 vs -0.5 N=100: rkhm %.2f, rkhs %.2f; %.1fs", diff_rkhm, diff_rkhs, t);
  if (!order_ok) os << " [ordering not reproduced]";
  return {same_ok && order_ok && t < 180.0, os.str()};
}

// 8. Anomaly detection ordering against Hilbert-Schmidt PCA.
Outcome anomaly_ordering() {
  const auto start = Clock::now();
  const AnomalyExperiment experiment;
  const auto results = run_anomaly_experiment(experiment);
  const double t = seconds_since(start);
  const AnomalyResult& r = results.front();
  std::ostringstream os;
  os << r.family << ", noise " << experiment.noise_level << ": "
     << fmt("rkhm AUC %.4f, hilbert-schmidt AUC %.4f; %.1fs", r.rkhm_auc, r.hs_auc, t);
  if (!(r.rkhm_auc > r.hs_auc)) os << " [ordering not reproduced]";
  return {r.rkhm_auc > r.hs_auc && t < 120.0, os.str()};
}

// 9. Eigensolver and square root accuracy.
Outcome numerical_substrate() {
  double eig = 0.0, sqrt_err = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = substream(9, "acceptance-eigen", {i});
    const Index dim = std::uniform_int_distribution<Index>(1, 64)(rng);
    const ComplexMatrix h = random_hermitian(dim, rng);
    const auto e = hermitian_eig(HermitianMatrix(h));
    const ComplexMatrix back = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
    eig = std::max(eig, (back - h).norm() / h.norm());

    const ComplexMatrix a = random_complex(dim, dim, rng);
    const HermitianMatrix p = hermitize(a * a.adjoint());
    const HermitianMatrix r = psd_sqrt(p);
    sqrt_err = std::max(sqrt_err, (r.matrix() * r.matrix() - p.matrix()).norm() / p.matrix().norm());
  }
  return {eig <= 1e-9 && sqrt_err <= 1e-8,
          fmt("eigen reconstruction %.1e, psd_sqrt squared %.1e over 200 matrices (dim <= 64)", eig, sqrt_err)};
}

// 10. Every CLI command produces byte-identical output across two runs.
Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("rkhm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return (dir / name).string(); };
  std::ofstream(path("cfg.json")) << R"({
    "seed": 2024,
    "test": {"bootstrap_count": 100},
    "accept_rates": {"trials": 5, "sample_sizes": [10, 20]},
    "generate": {"n": 40, "groups": [{"family": "normal", "count": 20},
                                     {"family": "phase", "theta": 0.5, "count": 8}]}
  })";
  const auto read = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string cfg = path("cfg.json");
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"x.csv", {"generate-samples", "--config", cfg}},
      {"y.csv", {"generate-samples", "--config", cfg, "--seed", "11"}},
      {"train.json", {"generate-states", "--config", cfg, "--seed", "12"}},
      {"test.json", {"generate-states", "--config", cfg}},
      {"two.json", {"two-sample", "--x", path("x.csv_a"), "--y", path("y.csv_a"), "--config", cfg}},
      {"pca.json", {"pca-anomaly", "--train", path("train.json_a"), "--test", path("test.json_a"), "--config", cfg}},
      {"rates.json", {"accept-rates", "--config", cfg}},
      {"check.json", {"kernel-check", "--config", cfg}},
  };
  bool ok = true;
  std::string failures;
  for (const auto& [name, args] : commands) {
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      auto a = args;
      a.insert(a.end(), {"--out", path(name + (run == 0 ? "_a" : "_b"))});
      std::ostringstream out, err;
      codes[run] = cli::run(a, out, err);
    }
    const std::string first = read(path(name + "_a"));
    const bool same = codes[0] == codes[1] && codes[0] <= cli::kExitReject && !first.empty() &&
                      first == read(path(name + "_b"));
    if (!same) failures += " " + name;
    ok = ok && same;
  }
  fs::remove_all(dir);
  return {ok, ok ? std::string("8 commands byte-identical across two runs") : "differences in:" + failures};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 quantum inner product trace identity", povm_trace_identity},
      {"2 cross-covariance Hilbert-Schmidt identity", cross_covariance_identity},
      {"3 reproducing property and Dirac law", reproducing_property},
      {"4 Cauchy-Schwarz in Loewner order", cauchy_schwarz},
      {"5 PCA structural suite", pca_structure},
      {"6 MMD axioms and scalar degeneration", mmd_axioms},
      {"7 two-sample calibration", two_sample_calibration},
      {"8 anomaly ordering vs Hilbert-Schmidt PCA", anomaly_ordering},
      {"9 eigensolver and psd_sqrt accuracy", numerical_substrate},
      {"10 CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
