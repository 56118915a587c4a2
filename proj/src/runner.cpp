#include "xprod/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace xprod {

namespace {

using Json = nlohmann::ordered_json;

struct TaskOutput {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  std::vector<SweepRow> sweep;
};

std::uint64_t task_seed(const RunConfig& config, const std::string& task) {
  return config.seed ^ fnv1a(task);
}

std::vector<CrossedElement> make_test_set(const RunConfig& config,
                                          const BuiltSystem& built,
                                          std::uint64_t seed) {
  std::vector<CrossedElement> out;
  const SystemPtr& sys = built.sys;
  if (config.test_set.kind == "random") {
    Rng rng(seed);
    for (int i = 0; i < config.test_set.count; ++i)
      out.push_back(random_crossed_element(sys, rng));
    return out;
  }
  const auto& crossed = *sys->represented_algebra();
  for (int i = 0; i < crossed.dim(); ++i)
    out.push_back(sys->from_represented_coefficients(
        Vector::Unit(crossed.dim(), i)));
  return out;
}

AmenabilityField field_or_constant(const BuiltSystem& built, const Tolerances& tol) {
  if (built.field) return *built.field;
  return AmenabilityField::constant(built.sys, tol);
}

WitnessChecks auto_level(const BuiltSystem& built, const Window& f) {
  const auto& sys = *built.sys;
  long long choi_dim = static_cast<long long>(sys.algebra()->dim()) * f.size() *
                       f.size() * sys.rep_dim();
  return choi_dim <= 4096 ? WitnessChecks::full : WitnessChecks::fast;
}

TaskOutput task_structure(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const auto& sys = *built.sys;
  const Tolerances& tol = config.tolerances;
  out.checks.push_back(CheckResult::info("group-order", sys.group()->order()));
  out.checks.push_back(CheckResult::info("algebra-dimension", sys.algebra()->dim()));
  out.checks.push_back(
      CheckResult::info("crossed-dimension", sys.represented_algebra()->dim()));
  out.checks.push_back(CheckResult::info(
      "crossed-center-dimension", center(*sys.represented_algebra(), tol)->dim()));
  // Covariance was verified at build; re-sample it so the report carries a
  // number.
  double worst = 0.0;
  for (int s = 0; s < sys.group()->order(); ++s) {
    Matrix us = sys.represent_group(s);
    for (int i = 0; i < sys.algebra()->dim(); ++i) {
      Matrix lhs = us * sys.represent_algebra(sys.algebra()->basis_element(i)) *
                   us.adjoint();
      Matrix rhs = sys.represent_algebra(
          sys.action().apply_matrix(s, sys.algebra()->basis_element(i)));
      worst = std::max(worst, frobenius_norm(Matrix(lhs - rhs)));
    }
  }
  out.checks.push_back(CheckResult::residual("covariance", worst, tol.identity_tol));
  if (built.state)
    out.checks.push_back(check_invariant_state(*built.state, sys.action(), tol));
  return out;
}

TaskOutput task_compatibility(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  Window closed = built.window.translation_closure(*built.sys->group());
  out.checks.push_back(check_compatibility(*built.sys, closed, config.trials,
                                           task_seed(config, "compatibility"),
                                           config.tolerances));
  out.checks.push_back(check_comodule(*built.sys, closed, config.trials,
                                      task_seed(config, "comodule"),
                                      config.tolerances));
  return out;
}

TaskOutput task_expectation(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const SystemPtr& sys = built.sys;
  const Tolerances& tol = config.tolerances;
  LinearMap e_map = expectation_map(sys);
  out.checks.push_back(verify_cp(e_map, CpMode::ucp, tol));
  out.checks.push_back(check_equivariance(e_map, EquivarianceMode::module, tol));

  Rng rng(task_seed(config, "expectation"));
  double idem = 0.0, bimodule = 0.0, contract = 0.0, faithful = 0.0;
  const auto& a = *sys->algebra();
  for (int trial = 0; trial < std::min(config.trials, 200); ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    AlgebraElement ex = expectation(x);
    idem = std::max(idem, frobenius_norm(Matrix(
                              expectation(sys->embed_algebra(ex)).matrix() -
                              ex.matrix())));
    AlgebraElement left = a.element_from_coefficients(random_vector(a.dim(), rng));
    AlgebraElement right = a.element_from_coefficients(random_vector(a.dim(), rng));
    CrossedElement axb = sys->embed_algebra(left) * x * sys->embed_algebra(right);
    bimodule = std::max(bimodule,
                        frobenius_norm(Matrix(expectation(axb).matrix() -
                                              (left * ex * right).matrix())));
    contract = std::max(contract, ex.norm() - x.norm());
  }
  const auto& crossed = *sys->represented_algebra();
  for (int i = 0; i < crossed.dim(); ++i) {
    CrossedElement x = sys->from_represented_coefficients(
        Vector::Unit(crossed.dim(), i));
    if (expectation(x.adjoint() * x).norm() <= 1e-12)
      faithful = std::max(faithful, x.norm() - 1e-6);
  }
  out.checks.push_back(CheckResult::residual("idempotent", idem, tol.identity_tol));
  out.checks.push_back(CheckResult::residual("bimodule", bimodule, tol.identity_tol));
  out.checks.push_back(CheckResult::residual("contractive", std::max(0.0, contract),
                                             tol.identity_tol));
  out.checks.push_back(CheckResult::residual("faithful-on-basis",
                                             std::max(0.0, faithful), tol.identity_tol));
  return out;
}

TaskOutput task_nuclearity(const RunConfig& config, const BuiltSystem& built,
                           NuclearityMode mode) {
  TaskOutput out;
  const Tolerances& tol = config.tolerances;
  AmenabilityField field = field_or_constant(built, tol);
  std::vector<CrossedElement> test_set =
      make_test_set(config, built, task_seed(config, "test-set"));
  Window f = Window::singletons(*built.sys->group(), field.support());
  NuclearityReport report = run_nuclearity_check(
      built.sys, field, test_set, config.epsilon, mode,
      task_seed(config, mode == NuclearityMode::module ? "nuclearity-module"
                                                       : "nuclearity-comodule"),
      auto_level(built, f), tol);
  out.checks = std::move(report.checks);
  return out;
}

TaskOutput task_normalization(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const Tolerances& tol = config.tolerances;
  AmenabilityField field = built.field && static_cast<int>(built.field->support().size()) ==
                                              built.sys->group()->order()
                               ? *built.field
                               : AmenabilityField::constant(built.sys, tol);
  NormalizationRecord rec = normalization_experiment(built.sys, field, tol);
  out.checks.push_back(
      CheckResult::residual("error-without-pre-factor", rec.err_without, 1e-10));
  out.checks.push_back(CheckResult::residual(
      "error-with-pre-factor-matches-1-minus-1-over-n",
      std::abs(rec.err_with_unit - rec.expected_with_unit), 1e-10));
  out.checks.push_back(
      CheckResult::info("error-with-pre-factor-at-unit", rec.err_with_unit));
  std::ostringstream note;
  note << "normalization experiment: err_without=" << rec.err_without
       << ", err_with(unit)=" << rec.err_with_unit << " (expected "
       << rec.expected_with_unit << "); " << rec.note;
  out.notes.push_back(note.str());
  return out;
}

TaskOutput task_defect_sweep(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  out.sweep = defect_sweep(config);
  const auto& g = *built.sys->group();
  const Tolerances& tol = config.tolerances;
  // Per-element monotonicity of the factorization error in the support size.
  double worst_increase = 0.0;
  std::vector<std::vector<double>> per_s(g.order());
  for (int k = 1; k <= g.order(); ++k) {
    std::vector<int> support(k);
    for (int i = 0; i < k; ++i) support[i] = i;
    AmenabilityField field = AmenabilityField::truncated(built.sys, support, tol);
    FactorizationWitness w = build_witness(field, {}, false, WitnessChecks::fast, tol);
    for (int s = 0; s < g.order(); ++s)
      per_s[s].push_back(factorization_error(w, built.sys->embed_group(s)));
  }
  for (int s = 0; s < g.order(); ++s)
    for (std::size_t k = 1; k < per_s[s].size(); ++k)
      worst_increase = std::max(worst_increase, per_s[s][k] - per_s[s][k - 1]);
  out.checks.push_back(CheckResult::residual(
      "error-monotone-in-support", std::max(0.0, worst_increase), 1e-10));
  out.checks.push_back(CheckResult::residual(
      "full-support-error", out.sweep.back().max_error, 1e-10));
  return out;
}

TaskOutput task_pd_function(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const SystemPtr& sys = built.sys;
  const Tolerances& tol = config.tolerances;
  const State& rho = *built.state;

  LinearMap identity = LinearMap::identity(sys->represented_algebra(), "identity");
  PdFunction id_pd = extract_pd_function(sys, identity, rho, tol);
  double id_dev = 0.0;
  for (const Cplx& v : id_pd.values) id_dev = std::max(id_dev, std::abs(v - Cplx(1.0)));
  out.checks.push_back(CheckResult::residual("identity-all-ones", id_dev, 1e-12));
  out.checks.push_back(CheckResult::min_eigenvalue(
      "identity-gram-psd", id_pd.gram_min_eigenvalue, tol.psd_tol));

  PdFunction e_pd = extract_pd_function(sys, expectation_into_crossed(sys), rho, tol);
  double e_dev = 0.0;
  for (int s = 0; s < sys->group()->order(); ++s) {
    Cplx expected = s == sys->group()->identity() ? 1.0 : 0.0;
    e_dev = std::max(e_dev, std::abs(e_pd.values[s] - expected));
  }
  out.checks.push_back(CheckResult::residual("expectation-indicator", e_dev, 1e-12));
  out.checks.push_back(CheckResult::min_eigenvalue(
      "expectation-gram-psd", e_pd.gram_min_eigenvalue, 1e-12));

  Rng rng(task_seed(config, "pd-function"));
  std::uniform_real_distribution<double> mix(0.0, 1.0);
  double worst_slack = 0.0, unit_dev = 0.0;
  const int maps = std::min(config.trials, 100);
  for (int trial = 0; trial < maps; ++trial) {
    LinearMap kraus = random_ucp_map(sys, 3, rng, tol);
    double t = 0.5 * mix(rng);
    LinearMap phi = identity.scaled(1.0 - t) + kraus.scaled(t);
    phi.with_spaces(kraus.domain_space(), kraus.codomain_space());
    PdFunction pd = extract_pd_function(sys, phi, rho, tol);
    worst_slack = std::max(worst_slack, pd.unit_deviation_slack);
    unit_dev = std::max(unit_dev,
                        std::abs(pd.values[sys->group()->identity()] - Cplx(1.0)));
  }
  out.checks.push_back(CheckResult::residual("perturbation-bound",
                                             std::max(0.0, worst_slack), tol.psd_tol));
  out.checks.push_back(CheckResult::residual("unit-value", unit_dev, 1e-12));
  return out;
}

TaskOutput task_trace_property(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const Tolerances& tol = config.tolerances;
  out.checks.push_back(
      check_invariant_state(*built.state, built.sys->action(), tol));
  State rho_prime = pullback_state(built.sys, *built.state, tol);
  out.checks.push_back(check_trace_property(built.sys, rho_prime, config.trials,
                                            task_seed(config, "trace"), tol));
  return out;
}

TaskOutput task_lambda(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const Tolerances& tol = config.tolerances;
  AmenabilityField field = field_or_constant(built, tol);
  Window f = Window::singletons(*built.sys->group(), field.support());
  FactorizationWitness w =
      build_witness(field, {}, false, auto_level(built, f), tol);
  LinearMap psi_theta = LinearMap::compose(w.averaging, w.field_compression,
                                           "averaging-compressed");
  LinearMap inner = LinearMap::identity(w.field_compression.domain(),
                                        "inner-identity");
  CbapBoundReport report = cbap_bound_check(
      built.sys, {w.compressed_rep}, {psi_theta}, inner,
      std::min(config.trials, 100), task_seed(config, "lambda"), tol);
  out.checks.push_back(CheckResult::info("m1", report.m1));
  out.checks.push_back(CheckResult::info("m2", report.m2));
  out.checks.push_back(CheckResult::info("inner-cb-norm", report.inner));
  for (auto& c : report.checks) out.checks.push_back(std::move(c));
  out.notes.push_back(
      "at finite dimension the Haagerup constant is identically 1 (the identity "
      "map witnesses the CBAP); these checks verify the inequalities of the "
      "cb-norm calculus, not nontrivial constants");
  return out;
}

TaskOutput task_certificates(const RunConfig& config, const BuiltSystem& built) {
  TaskOutput out;
  const Tolerances& tol = config.tolerances;
  AmenabilityField field = field_or_constant(built, tol);
  FactorizationWitness w = build_witness(
      field, {}, false,
      auto_level(built, Window::singletons(*built.sys->group(), field.support())),
      tol);
  CertificateBindings bindings =
      certificate_bindings(w, built.state ? &*built.state : nullptr, tol);

  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config.certificates_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ConfigError("/certificates_dir", "no fixture files found");

  for (const auto& path : files) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buffer.str());
    std::string name = j.at("name").get<std::string>();
    bool expect_pass = j.at("expect_pass").get<bool>();
    CertificateNode tree = certificate_from_json_text(j.at("tree").dump());
    CertificateOutcome outcome = validate_certificate(tree, bindings, tol);
    CheckResult check = CheckResult::residual(
        name, outcome.valid == expect_pass ? 0.0 : 1.0, 0.5);
    check.detail = std::string(outcome.valid ? "valid" : "invalid") +
                   ", expected " + (expect_pass ? "valid" : "invalid");
    out.checks.push_back(std::move(check));
  }
  return out;
}

TaskOutput run_task(const std::string& task, const RunConfig& config,
                    const BuiltSystem& built) {
  if (task == "structure") return task_structure(config, built);
  if (task == "compatibility") return task_compatibility(config, built);
  if (task == "expectation") return task_expectation(config, built);
  if (task == "nuclearity-module")
    return task_nuclearity(config, built, NuclearityMode::module);
  if (task == "nuclearity-comodule")
    return task_nuclearity(config, built, NuclearityMode::comodule);
  if (task == "normalization") return task_normalization(config, built);
  if (task == "defect-sweep") return task_defect_sweep(config, built);
  if (task == "pd-function") return task_pd_function(config, built);
  if (task == "trace-property") return task_trace_property(config, built);
  if (task == "lambda-calculus") return task_lambda(config, built);
  if (task == "certificates") return task_certificates(config, built);
  throw ConfigError("/tasks", "unknown task '" + task + "'");
}

}  // namespace

int RunReport::pass_count() const {
  int n = 0;
  for (const auto& r : records) n += r.check.pass ? 1 : 0;
  return n;
}

int RunReport::fail_count() const {
  return static_cast<int>(records.size()) - pass_count();
}

double RunReport::max_residual() const {
  double worst = 0.0;
  for (const auto& r : records)
    if (r.check.kind == CheckResult::Kind::Residual)
      worst = std::max(worst, r.check.witness);
  return worst;
}

std::string RunReport::to_json_text() const {
  Json j;
  j["version"] = "0.1.0";
  j["seed"] = seed;
  j["tolerances"] = {{"identity_tol", tolerances.identity_tol},
                     {"psd_tol", tolerances.psd_tol}};
  Json checks = Json::array();
  for (const auto& r : records) {
    Json c;
    c["name"] = r.task + "/" + r.check.name;
    c["pass"] = r.check.pass;
    c["witness"] = r.check.witness;
    c["tolerance"] = r.check.tolerance;
    c["kind"] = r.check.kind == CheckResult::Kind::Residual ? "residual"
                : r.check.kind == CheckResult::Kind::MinEigenvalue
                    ? "min-eigenvalue"
                    : "info";
    if (!r.check.detail.empty()) c["detail"] = r.check.detail;
    c["elapsed_ms"] = r.elapsed_ms;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  if (!sweep.empty()) {
    Json rows = Json::array();
    for (const auto& row : sweep)
      rows.push_back({{"k", row.k},
                      {"max_defect", row.max_defect},
                      {"max_error", row.max_error}});
    j["defect_sweep"] = std::move(rows);
  }
  j["notes"] = notes;
  j["summary"] = {{"pass_count", pass_count()},
                  {"fail_count", fail_count()},
                  {"max_residual", max_residual()}};
  return j.dump(2) + "\n";
}

std::string RunReport::sweep_to_csv() const {
  std::ostringstream os;
  os << "k,max_defect,max_error\n";
  os << std::setprecision(12);
  for (const auto& row : sweep)
    os << row.k << ',' << row.max_defect << ',' << row.max_error << '\n';
  return os.str();
}

std::vector<SweepRow> defect_sweep(const RunConfig& config) {
  if (config.group.kind != "cyclic")
    throw ConfigError("/group", "defect-sweep requires a cyclic group");
  BuiltSystem built = build_system(config);
  const auto& g = *built.sys->group();
  const Tolerances& tol = config.tolerances;
  std::vector<SweepRow> rows;
  for (int k = 1; k <= g.order(); ++k) {
    std::vector<int> support(k);
    for (int i = 0; i < k; ++i) support[i] = i;
    AmenabilityField field = AmenabilityField::truncated(built.sys, support, tol);
    SweepRow row;
    row.k = k;
    for (int t = 0; t < g.order(); ++t)
      row.max_defect = std::max(row.max_defect, translation_defect(field, t));
    FactorizationWitness w = build_witness(field, {}, false, WitnessChecks::fast, tol);
    const auto& crossed = *built.sys->represented_algebra();
    for (int i = 0; i < crossed.dim(); ++i)
      row.max_error = std::max(
          row.max_error,
          factorization_error(w, built.sys->from_represented_coefficients(
                                     Vector::Unit(crossed.dim(), i))));
    rows.push_back(row);
  }
  return rows;
}

RunReport run(const RunConfig& config) {
  RunReport report;
  report.seed = config.seed;
  report.tolerances = config.tolerances;
  BuiltSystem built = build_system(config);

  auto execute = [&](const std::string& task) {
    auto start = std::chrono::steady_clock::now();
    TaskOutput out;
    try {
      out = run_task(task, config, built);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      out.checks.push_back(CheckResult::failed("task-error", 1.0, 0.5,
                                               CheckResult::Kind::Residual,
                                               e.what()));
    }
    auto stop = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return std::pair<TaskOutput, double>(std::move(out), ms);
  };

  std::vector<std::pair<TaskOutput, double>> results(config.tasks.size());
  if (config.parallel) {
    std::vector<std::future<std::pair<TaskOutput, double>>> futures;
    futures.reserve(config.tasks.size());
    for (const auto& task : config.tasks)
      futures.push_back(std::async(std::launch::async, execute, task));
    for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < config.tasks.size(); ++i)
      results[i] = execute(config.tasks[i]);
  }

  for (std::size_t i = 0; i < config.tasks.size(); ++i) {
    auto& [out, ms] = results[i];
    const double per_check = out.checks.empty() ? 0.0 : ms / out.checks.size();
    for (auto& check : out.checks)
      report.records.push_back({std::move(check), config.tasks[i], per_check});
    for (auto& note : out.notes) report.notes.push_back(std::move(note));
    for (auto& row : out.sweep) report.sweep.push_back(row);
  }
  return report;
}

int run_cli(const RunConfig& config, const std::string& report_path,
            const std::string& csv_path) {
  RunReport report = run(config);

  std::ofstream out(report_path);
  if (!out) {
    std::cerr << "cannot write report to " << report_path << "\n";
    return 2;
  }
  out << report.to_json_text();
  out.close();

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    csv << report.sweep_to_csv();
  }

  std::cout << std::left << std::setw(56) << "check" << std::setw(8) << "result"
            << std::setw(14) << "witness" << "tolerance\n";
  std::cout << std::string(92, '-') << "\n";
  for (const auto& r : report.records) {
    std::ostringstream witness, tolerance;
    witness << std::setprecision(6) << r.check.witness;
    if (r.check.kind == CheckResult::Kind::Info)
      tolerance << "-";
    else
      tolerance << std::setprecision(6) << r.check.tolerance;
    std::cout << std::left << std::setw(56) << (r.task + "/" + r.check.name)
              << std::setw(8) << (r.check.pass ? "pass" : "FAIL")
              << std::setw(14) << witness.str() << tolerance.str() << "\n";
  }
  std::cout << std::string(92, '-') << "\n"
            << report.pass_count() << " passed, " << report.fail_count()
            << " failed\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace xprod
