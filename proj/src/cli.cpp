#include "rkhm/cli.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "rkhm/io.hpp"
#include "rkhm/mmd_test.hpp"
#include "rkhm/random.hpp"
#include "rkhm/rkhm_pca.hpp"

namespace rkhm::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDimension:
    case ErrorCode::KernelMismatch:
      return kExitConfig;
    case ErrorCode::DataError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::PointKindMismatch:
    case ErrorCode::EmptySample:
    case ErrorCode::NonFinite:
      return kExitData;
    case ErrorCode::IterationLimitExceeded:
    case ErrorCode::NotPSD:
    case ErrorCode::NotHermitian:
    case ErrorCode::DegenerateGram:
      return kExitNumerical;
  }
  return kExitNumerical;
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

// Section readers: every key is optional, unknown keys are rejected so that
// typos do not silently fall back to defaults.
class Section {
 public:
  Section(const json& raw, std::string name) : raw_(raw), name_(std::move(name)) {
    if (!raw_.is_null() && !raw_.is_object()) config_error("'" + name_ + "' must be an object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (raw_.is_null() || !raw_.contains(key)) return fallback;
    try {
      return raw_.at(key).get<T>();
    } catch (const json::exception&) {
      config_error("'" + name_ + "." + key + "' has the wrong type");
    }
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    static const json null;
    return raw_.is_null() || !raw_.contains(key) ? null : raw_.at(key);
  }

  void finish() const {
    if (raw_.is_null()) return;
    for (const auto& [key, value] : raw_.items())
      if (!seen_.count(key)) config_error("unknown key '" + name_ + "." + key + "'");
  }

 private:
  const json& raw_;
  std::string name_;
  std::set<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& value, const std::vector<std::pair<std::string, E>>& table, const std::string& what) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  config_error("unknown " + what + " '" + value + "'");
}

const std::vector<std::pair<std::string, Reduction>> kReductions{{"operator_norm", Reduction::OperatorNorm},
                                                                 {"trace", Reduction::Trace}};
const std::vector<std::pair<std::string, MeasureKind>> kMeasureKinds{
    {"cross_covariance", MeasureKind::CrossCovariance}, {"plain_empirical", MeasureKind::PlainEmpirical}};
const std::vector<std::pair<std::string, ScoreReduction>> kScoreReductions{
    {"operator_norm", ScoreReduction::OperatorNorm},
    {"hadamard_then_operator_norm", ScoreReduction::HadamardThenOpNorm}};

StateFamily family_from_json(Section& s) {
  const auto kind = s.get<std::string>("family", "normal");
  const double theta = s.get<double>("theta", 0.5);
  const double delta = s.get<double>("delta", 0.2);
  if (kind == "normal") return StateFamily::normal();
  if (kind == "phase") return StateFamily::phase(theta);
  if (kind == "amplitude") return StateFamily::amplitude(delta);
  if (kind == "both") return StateFamily::both(theta, delta);
  config_error("unknown state family '" + kind + "'");
}

json family_to_json(const StateFamily& f) {
  json j{{"family", state_kind_name(f.kind)}};
  if (f.kind == StateKind::PhaseError || f.kind == StateKind::BothError) j["theta"] = f.theta;
  if (f.kind == StateKind::AmplitudeError || f.kind == StateKind::BothError) j["delta"] = f.delta;
  return j;
}

}  // namespace

json resolve_config(const json& raw) {
  if (!raw.is_object()) config_error("config must be a JSON object");
  Section top(raw, "config");
  const auto version = top.get<int>("spec_version", 1);
  if (version != 1) config_error("unsupported spec_version " + std::to_string(version));

  json out;
  out["spec_version"] = 1;
  out["seed"] = top.get<std::uint64_t>("seed", kDefaultSeed);
  const auto threads = top.get<long long>("threads", 1);
  if (threads < 0) config_error("threads must be >= 0");
  out["threads"] = threads;

  const json& kernel = top.raw("kernel");
  if (!kernel.is_null()) {
    io::kernel_from_json(kernel, 1);  // validates; the final m may come from the data
    out["kernel"] = kernel;
  } else {
    out["kernel"] = nullptr;
  }

  {
    Section s(top.raw("test"), "test");
    TestConfig t;
    t.alpha = s.get<double>("alpha", t.alpha);
    t.bootstrap_count = s.get<int>("bootstrap_count", t.bootstrap_count);
    t.reduction = parse_enum(s.get<std::string>("reduction", "operator_norm"), kReductions, "reduction");
    const auto kind = parse_enum(s.get<std::string>("measure_kind", "cross_covariance"), kMeasureKinds, "measure kind");
    s.finish();
    try {
      t.validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
    out["test"] = {{"alpha", t.alpha},
                   {"bootstrap_count", t.bootstrap_count},
                   {"reduction", reduction_name(t.reduction)},
                   {"measure_kind", measure_kind_name(kind)}};
  }

  {
    Section s(top.raw("anomaly"), "anomaly");
    const auto reduction = parse_enum(s.get<std::string>("reduction", "hadamard_then_operator_norm"),
                                      kScoreReductions, "score reduction");
    const auto axes = s.get<long long>("axes", 1);
    const auto basis = s.get<std::string>("basis", "fourier");
    const auto rank_tol = s.get<double>("rank_tol", kRankTolerance);
    s.finish();
    if (axes < 1) config_error("anomaly.axes must be >= 1");
    if (basis != "fourier" && basis != "computational") config_error("unknown measurement basis '" + basis + "'");
    if (!(rank_tol > 0.0 && rank_tol < 1.0)) config_error("anomaly.rank_tol must lie in (0, 1)");
    out["anomaly"] = {{"reduction", score_reduction_name(reduction)},
                      {"axes", axes},
                      {"basis", basis},
                      {"rank_tol", rank_tol}};
  }

  {
    Section s(top.raw("accept_rates"), "accept_rates");
    const auto trials = s.get<int>("trials", 100);
    const auto sizes = s.get<std::vector<long long>>("sample_sizes", {10, 20, 30, 50, 100});
    const auto coupling_x = s.get<double>("coupling_x", 0.5);
    const auto coupling_y = s.get<double>("coupling_y", 0.5);
    const auto gamma = s.get<double>("gamma", 1.0);
    s.finish();
    if (trials < 1) config_error("accept_rates.trials must be >= 1");
    if (sizes.empty()) config_error("accept_rates.sample_sizes must be nonempty");
    for (auto n : sizes)
      if (n < 2) config_error("accept_rates.sample_sizes entries must be >= 2");
    try {
      CorrelatedSource::three_variable(coupling_x);
      CorrelatedSource::three_variable(coupling_y);
      ScalarKernel::gaussian(gamma);
    } catch (const Error& e) {
      config_error(std::string("accept_rates: ") + e.what());
    }
    out["accept_rates"] = {{"trials", trials},
                           {"sample_sizes", sizes},
                           {"coupling_x", coupling_x},
                           {"coupling_y", coupling_y},
                           {"gamma", gamma}};
  }

  {
    Section s(top.raw("kernel_check"), "kernel_check");
    const auto points = s.get<long long>("points", 10);
    const auto point_dim = s.get<long long>("point_dim", 2);
    const auto draws = s.get<int>("coefficient_draws", 5);
    const auto tol = s.get<double>("tol", kPsdTolerance);
    s.finish();
    if (points < 1 || point_dim < 1 || draws < 1) config_error("kernel_check counts must be >= 1");
    if (!(tol >= 0.0)) config_error("kernel_check.tol must be >= 0");
    out["kernel_check"] = {{"points", points}, {"point_dim", point_dim}, {"coefficient_draws", draws}, {"tol", tol}};
  }

  {
    Section s(top.raw("generate"), "generate");
    const auto n = s.get<long long>("n", 100);
    const auto coupling = s.get<double>("coupling", 0.5);
    const auto m = s.get<long long>("m", 4);
    const auto noise = s.get<double>("noise_level", 0.05);
    const json& groups_raw = s.raw("groups");
    s.finish();
    if (n < 1) config_error("generate.n must be >= 1");
    if (m < 2) config_error("generate.m must be >= 2");
    if (!(noise >= 0.0) || !std::isfinite(noise)) config_error("generate.noise_level must be >= 0");
    try {
      CorrelatedSource::three_variable(coupling);
    } catch (const Error& e) {
      config_error(std::string("generate: ") + e.what());
    }
    json groups = json::array();
    if (groups_raw.is_null()) {
      groups.push_back({{"family", "normal"}, {"count", 40}});
    } else {
      if (!groups_raw.is_array() || groups_raw.empty()) config_error("generate.groups must be a nonempty list");
      for (const auto& g : groups_raw) {
        Section gs(g, "generate.groups[]");
        const StateFamily f = family_from_json(gs);
        const auto count = gs.get<long long>("count", 40);
        gs.finish();
        if (count < 1) config_error("group count must be >= 1");
        if (!(f.delta >= 0.0 && f.delta < 1.0)) config_error("delta must lie in [0, 1)");
        json gj = family_to_json(f);
        gj["count"] = count;
        groups.push_back(gj);
      }
    }
    out["generate"] = {{"n", n}, {"coupling", coupling}, {"m", m}, {"noise_level", noise}, {"groups", groups}};
  }
  top.finish();
  return out;
}

namespace {

struct Context {
  json config;  // resolved
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

KernelSpec resolve_kernel(Context& ctx, Index default_m, const json& fallback) {
  const json& raw = ctx.config["kernel"].is_null() ? fallback : ctx.config["kernel"];
  KernelSpec k = io::kernel_from_json(raw, default_m);
  ctx.config["kernel"] = io::to_json(k);
  return k;
}

TestConfig test_config(const Context& ctx) {
  const json& t = ctx.config["test"];
  TestConfig cfg;
  cfg.alpha = t["alpha"].get<double>();
  cfg.bootstrap_count = t["bootstrap_count"].get<int>();
  cfg.reduction = parse_enum(t["reduction"].get<std::string>(), kReductions, "reduction");
  cfg.rng_seed = ctx.seed;
  cfg.threads = ctx.threads;
  return cfg;
}

json report_header(const Context& ctx, const std::string& command) {
  return json{{"spec_version", 1}, {"command", command}, {"seed", ctx.seed}, {"config", ctx.config}};
}

// ---------------------------------------------------------------------------

int cmd_two_sample(Context& ctx, const std::string& x_path, const std::string& y_path, json& report) {
  const RealMatrix x = io::load_samples(x_path);
  const RealMatrix y = io::load_samples(y_path);
  if (x.cols() != y.cols())
    throw Error(ErrorCode::DataError, "samples have " + std::to_string(x.cols()) + " and " +
                                          std::to_string(y.cols()) + " variables");
  const auto kind = parse_enum(ctx.config["test"]["measure_kind"].get<std::string>(), kMeasureKinds, "measure kind");
  const Index m = kind == MeasureKind::CrossCovariance ? x.cols() : 1;
  const KernelSpec kernel = resolve_kernel(ctx, m, json{{"variant", "diagonal_scalar"}, {"family", "gaussian"}});
  const TestConfig cfg = test_config(ctx);
  const TestReport r = bootstrap_two_sample_test(kernel, x, y, cfg, kind);

  report = report_header(ctx, "two-sample");
  report["statistic"] = r.statistic;
  report["threshold"] = r.threshold;
  report["accept"] = r.accept;
  report["alpha"] = cfg.alpha;
  report["B"] = cfg.bootstrap_count;
  report["n_x"] = x.rows();
  report["n_y"] = y.rows();
  report["mmd_matrix"] = io::to_json(r.mmd_matrix.matrix());
  return r.accept ? kExitOk : kExitReject;
}

int cmd_pca_anomaly(Context& ctx, const std::string& train_path, const std::string& test_path, json& report) {
  const io::StateSet train = io::load_states(train_path);
  const io::StateSet test = io::load_states(test_path);
  const Index m = train.states.front().dim();
  if (test.states.front().dim() != m)
    throw Error(ErrorCode::DataError, "train and test states differ in dimension");

  const json& a = ctx.config["anomaly"];
  AnomalyConfig scoring;
  scoring.reduction = parse_enum(a["reduction"].get<std::string>(), kScoreReductions, "score reduction");
  scoring.axes = a["axes"].get<Index>();
  const double rank_tol = a["rank_tol"].get<double>();
  const MeasurementBasis basis =
      a["basis"] == "fourier" ? MeasurementBasis::fourier(m) : MeasurementBasis::computational(m);

  const KernelSpec kernel = resolve_kernel(ctx, m, json{{"variant", "elementwise"}, {"family", "gaussian"}});
  std::vector<AtomicMeasure> train_measures;
  for (const auto& rho : train.states) train_measures.push_back(povm_state_measure(basis, rho));
  const PCAModel model = fit_pca(kernel, train_measures, scoring.axes, rank_tol, ctx.threads);
  const HilbertSchmidtPca baseline(train.states, scoring.axes, rank_tol);

  json scores = json::array();
  std::map<std::string, std::vector<double>> rkhm_by_label, hs_by_label;
  for (std::size_t i = 0; i < test.states.size(); ++i) {
    const double s = anomaly_score(model, povm_state_measure(basis, test.states[i]), scoring);
    const double b = baseline.score(test.states[i]);
    json row{{"index", i}, {"score", s}, {"baseline_score", b}};
    if (!test.labels.empty()) {
      row["label"] = test.labels[i];
      rkhm_by_label[test.labels[i]].push_back(s);
      hs_by_label[test.labels[i]].push_back(b);
    }
    scores.push_back(row);
  }

  json aucs = json::object();
  if (rkhm_by_label.count("normal")) {
    for (const auto& [label, values] : rkhm_by_label) {
      if (label == "normal") continue;
      aucs[label] = {{"rkhm", auc(rkhm_by_label["normal"], values)},
                     {"baseline", auc(hs_by_label["normal"], hs_by_label[label])}};
    }
  }

  report = report_header(ctx, "pca-anomaly");
  report["eigenvalues"] = std::vector<double>(model.eigenvalues().data(),
                                              model.eigenvalues().data() + model.eigenvalues().size());
  report["axes"] = model.axes();
  report["scores"] = scores;
  report["auc"] = aucs;
  return kExitOk;
}

int cmd_accept_rates(Context& ctx, json& report) {
  const json& a = ctx.config["accept_rates"];
  AcceptanceScenario sc;
  sc.source_x = CorrelatedSource::three_variable(a["coupling_x"].get<double>());
  sc.source_y = CorrelatedSource::three_variable(a["coupling_y"].get<double>());
  sc.sample_sizes.clear();
  for (const auto& n : a["sample_sizes"]) sc.sample_sizes.push_back(n.get<Index>());
  sc.gamma = a["gamma"].get<double>();
  sc.test = test_config(ctx);
  const auto rows = acceptance_rate_experiment(sc, a["trials"].get<int>());

  json table = json::array();
  for (const auto& r : rows) table.push_back({{"method", r.method}, {"n", r.n}, {"acceptance_rate", r.rate}});
  report = report_header(ctx, "accept-rates");
  report["rows"] = table;
  return kExitOk;
}

Point random_point(const KernelSpec& kernel, Index point_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto real_vec = [&](Index d) {
    RealVector v(d);
    for (Index i = 0; i < d; ++i) v(i) = normal(rng);
    return v;
  };
  return std::visit(
      [&](const auto& v) -> Point {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, QuantumProjective>) {
          ComplexVector z(kernel.dim());
          for (Index i = 0; i < z.size(); ++i) z(i) = Complex(normal(rng), normal(rng));
          return ComplexVector(z.normalized());
        } else if constexpr (std::is_same_v<V, Elementwise>) {
          return real_vec(kernel.dim());
        } else if constexpr (std::is_same_v<V, ProductScalarTimesIdentity>) {
          return PointPair{real_vec(point_dim), real_vec(point_dim)};
        } else {
          return real_vec(point_dim);
        }
      },
      kernel.variant());
}

int cmd_kernel_check(Context& ctx, json& report) {
  const json& c = ctx.config["kernel_check"];
  const KernelSpec kernel = resolve_kernel(ctx, 1, json{{"variant", "diagonal_scalar"}, {"family", "gaussian"}});
  const Index n = c["points"].get<Index>();
  const Index point_dim = c["point_dim"].get<Index>();
  const int draws = c["coefficient_draws"].get<int>();
  const double tol = c["tol"].get<double>();
  const Index m = kernel.dim();

  auto rng = substream(ctx.seed, "kernel-check");
  std::vector<Point> points;
  for (Index i = 0; i < n; ++i) points.push_back(random_point(kernel, point_dim, rng));

  std::normal_distribution<double> normal;
  bool pd = true;
  for (int d = 0; d < draws; ++d) {
    std::vector<ComplexMatrix> coeffs;
    for (Index i = 0; i < n; ++i) {
      ComplexMatrix cm(m, m);
      for (Index r = 0; r < m; ++r)
        for (Index k = 0; k < m; ++k) cm(r, k) = Complex(normal(rng), normal(rng));
      coeffs.push_back(cm);
    }
    pd = pd && check_positive_definite(kernel, points, coeffs, tol);
  }

  ComplexMatrix block(n * m, n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) block.block(i * m, j * m, m, m) = kernel(points[i], points[j]);
  const HermitianMatrix gram = hermitize(block);
  const double scale = operator_norm(gram);
  const double min_eig = min_eigenvalue(gram);
  pd = pd && min_eig >= -tol * scale;

  report = report_header(ctx, "kernel-check");
  report["positive_definite"] = pd;
  report["min_eigenvalue"] = min_eig;
  report["gram_operator_norm"] = scale;
  return pd ? kExitOk : kExitReject;
}

int cmd_generate_samples(Context& ctx, std::string& text) {
  const json& g = ctx.config["generate"];
  const auto source = CorrelatedSource::three_variable(g["coupling"].get<double>());
  auto rng = substream(ctx.seed, "generate-samples");
  text = io::format_samples(source.sample(g["n"].get<Index>(), rng));
  return kExitOk;
}

int cmd_generate_states(Context& ctx, json& doc) {
  const json& g = ctx.config["generate"];
  io::StateSet set;
  std::uint64_t index = 0;
  for (const auto& gj : g["groups"]) {
    Section s(gj, "group");
    const StateFamily f = family_from_json(s);
    const auto count = s.get<Index>("count", 1);
    const auto states = generate_quantum_states(f, count, g["m"].get<Index>(), g["noise_level"].get<double>(),
                                                derive_seed(ctx.seed, "generate-states", {index++}));
    for (const auto& rho : states) {
      set.states.push_back(rho);
      set.labels.push_back(state_kind_name(f.kind));
    }
  }
  doc = io::to_json(set);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel mean embeddings of matrix-valued measures"};
  app.require_subcommand(1);

  std::string config_path, out_path, x_path, y_path, train_path, test_path;
  std::uint64_t seed_override = 0;
  long long threads_override = -1;
  std::vector<CLI::Option*> seed_options;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config JSON")->required();
    sub->add_option("--out", out_path, "Output path (default: stdout)");
    seed_options.push_back(sub->add_option("--seed", seed_override, "Overrides the config seed"));
    sub->add_option("--threads", threads_override, "Worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
  };
  auto* two = app.add_subcommand("two-sample", "Permutation two-sample test on CSV samples");
  two->add_option("--x", x_path, "First sample CSV")->required();
  two->add_option("--y", y_path, "Second sample CSV")->required();
  add_common(two);
  auto* pca = app.add_subcommand("pca-anomaly", "Kernel PCA anomaly scores for density matrices");
  pca->add_option("--train", train_path, "Training states JSON")->required();
  pca->add_option("--test", test_path, "Test states JSON")->required();
  add_common(pca);
  auto* rates = app.add_subcommand("accept-rates", "Acceptance-rate table on synthetic sources");
  add_common(rates);
  auto* check = app.add_subcommand("kernel-check", "Positive definiteness check on random points");
  add_common(check);
  auto* gen_samples = app.add_subcommand("generate-samples", "Write a synthetic CSV sample");
  add_common(gen_samples);
  auto* gen_states = app.add_subcommand("generate-states", "Write labelled synthetic density matrices");
  add_common(gen_states);

  std::vector<std::string> argv_storage{"rkhm"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Context ctx;
    ctx.config = resolve_config(io::read_json(config_path));
    for (const auto* opt : seed_options)
      if (opt->count() > 0) ctx.config["seed"] = seed_override;
    if (threads_override >= 0) ctx.config["threads"] = threads_override;
    ctx.seed = ctx.config["seed"].get<std::uint64_t>();
    ctx.threads = static_cast<unsigned>(ctx.config["threads"].get<long long>());

    int code = kExitOk;
    std::string text;
    json report;
    if (two->parsed()) {
      code = cmd_two_sample(ctx, x_path, y_path, report);
    } else if (pca->parsed()) {
      code = cmd_pca_anomaly(ctx, train_path, test_path, report);
    } else if (rates->parsed()) {
      code = cmd_accept_rates(ctx, report);
    } else if (check->parsed()) {
      code = cmd_kernel_check(ctx, report);
    } else if (gen_samples->parsed()) {
      code = cmd_generate_samples(ctx, text);
    } else if (gen_states->parsed()) {
      code = cmd_generate_states(ctx, report);
    }
    if (text.empty()) text = report.dump(2) + "\n";

    if (out_path.empty())
      out << text;
    else
      io::write_text_atomic(out_path, text);
    return code;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error [config]: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace rkhm::cli
