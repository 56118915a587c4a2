#include "xprod/nuclearity.hpp"

#include <algorithm>
#include <cmath>

namespace xprod {

namespace {

Vector represented_coefficients(const CrossedElement& x) {
  const auto& sys = *x.system();
  const int n = sys.group()->order();
  const int m = sys.algebra()->dim();
  Vector out(m * n);
  for (int i = 0; i < m; ++i)
    for (int s = 0; s < n; ++s) out(i * n + s) = x.coefficient(s).coefficients()(i);
  return out;
}

}  // namespace

AmenabilityField AmenabilityField::constant(SystemPtr sys, const Tolerances& tol) {
  const int n = sys->group()->order();
  std::vector<int> support(n);
  for (int s = 0; s < n; ++s) support[s] = s;
  return truncated(std::move(sys), std::move(support), tol);
}

AmenabilityField AmenabilityField::truncated(SystemPtr sys, std::vector<int> support,
                                             const Tolerances& tol) {
  if (support.empty()) throw InvalidInput("field support must be nonempty");
  const double scale = 1.0 / std::sqrt(static_cast<double>(support.size()));
  std::vector<AlgebraElement> values(sys->group()->order(), sys->algebra()->zero());
  for (int s : support) {
    if (s < 0 || s >= sys->group()->order())
      throw InvalidElement("field support element out of range");
    values[s] = sys->algebra()->unit().scaled(scale);
  }
  return from_values(std::move(sys), std::move(values), tol);
}

AmenabilityField AmenabilityField::from_values(SystemPtr sys,
                                               std::vector<AlgebraElement> values,
                                               const Tolerances& tol) {
  const int n = sys->group()->order();
  if (static_cast<int>(values.size()) != n)
    throw InvalidInput("field needs one value per group element");
  const auto& a = *sys->algebra();
  std::vector<int> support;
  AlgebraElement square_sum = a.zero();
  for (int s = 0; s < n; ++s) {
    const AlgebraElement& v = values[s];
    if (v.is_zero(1e-14)) continue;
    support.push_back(s);
    for (int i = 0; i < a.dim(); ++i) {
      Matrix comm = v.matrix() * a.basis_element(i) - a.basis_element(i) * v.matrix();
      if (frobenius_norm(comm) > tol.identity_tol * (1.0 + frobenius_norm(v.matrix())))
        throw NotCentralPositive("field value at '" + sys->group()->label(s) +
                                 "' is not central");
    }
    CheckResult pos = is_positive(v, tol);
    if (!pos.pass)
      throw NotCentralPositive("field value at '" + sys->group()->label(s) +
                               "' is not positive");
    square_sum = square_sum + v * v;
  }
  if (support.empty()) throw InvalidInput("field support must be nonempty");
  double normalization = spectral_norm(
      Matrix(square_sum.matrix() -
             Matrix::Identity(a.ambient_dim(), a.ambient_dim())));
  if (normalization > tol.identity_tol)
    throw NotNormalized("sum of squared field values deviates from 1 by " +
                        std::to_string(normalization));
  return AmenabilityField(std::move(sys), std::move(values), std::move(support));
}

double translation_defect(const AmenabilityField& field, int t) {
  const auto& sys = *field.system();
  const auto& g = *sys.group();
  const auto& alpha = sys.action();
  AlgebraElement acc = sys.algebra()->zero();
  for (int s = 0; s < g.order(); ++s) {
    AlgebraElement moved = alpha.apply(t, field.value(g.mul(g.inv(t), s)));
    AlgebraElement diff = field.value(s) - moved;
    acc = acc + diff.adjoint() * diff;
  }
  return spectral_norm(acc.matrix());
}

WindowedMatrix windowed_regular_rep(const CrossedElement& x, const Window& w) {
  const auto& sys = *x.system();
  const auto& g = *sys.group();
  WindowedMatrix m = WindowedMatrix::zero(x.system(), w);
  for (int u = 0; u < w.size(); ++u) {
    int bar_inv = g.inv(tuple_product(g, w.tuple(u)));
    for (int s = 0; s < g.order(); ++s) {
      if (x.coefficient(s).is_zero(0.0)) continue;
      int v = w.find(left_translate(g, g.inv(s), w.tuple(u)));
      if (v < 0) continue;
      m.entry(u, v) += sys.action().apply(bar_inv, x.coefficient(s)).matrix();
    }
  }
  return m;
}

CrossedElement averaging_apply(const SystemPtr& sys, const WindowedMatrix& m) {
  const auto& g = *sys->group();
  const auto& a = *sys->algebra();
  const Window& w = m.window();
  std::vector<Vector> coeffs(g.order(), Vector::Zero(a.dim()));
  for (int s = 0; s < w.size(); ++s) {
    int bs = tuple_product(g, w.tuple(s));
    for (int t = 0; t < w.size(); ++t) {
      if (frobenius_norm(m.entry(s, t)) == 0.0) continue;
      int u = g.mul(bs, g.inv(tuple_product(g, w.tuple(t))));
      coeffs[u] += sys->action().apply_coefficients(
          bs, a.coefficients_of(m.entry(s, t)));
    }
  }
  std::vector<AlgebraElement> out;
  out.reserve(coeffs.size());
  for (auto& c : coeffs) out.push_back(a.element_from_coefficients(c));
  return sys->element(std::move(out));
}

WindowedMatrix field_diagonal_window(const AmenabilityField& field, const Window& f) {
  const auto& sys = *field.system();
  const auto& g = *sys.group();
  WindowedMatrix x = WindowedMatrix::zero(field.system(), f);
  for (int t = 0; t < f.size(); ++t) {
    int bar = tuple_product(g, f.tuple(t));
    x.entry(t, t) = sys.action().apply(g.inv(bar), field.value(bar)).matrix();
  }
  return x;
}

CrossedElement FactorizationWitness::apply(const CrossedElement& x) const {
  WindowedMatrix compressed = windowed_regular_rep(x, compression_window);
  WindowedMatrix xw = field_diagonal_window(field, compression_window);
  CrossedElement out = averaging_apply(sys, xw * compressed * xw);
  if (pre_factor) out = out.scaled(1.0 / double(compression_window.size()));
  return out;
}

namespace {

struct WitnessBuild {
  std::optional<FactorizationWitness> witness;
  std::vector<CheckResult> checks;
  bool ok = true;
};

void push(WitnessBuild& b, CheckResult r) {
  b.ok = b.ok && r.pass;
  b.checks.push_back(std::move(r));
}

WitnessBuild build_witness_internal(const AmenabilityField& field,
                                    std::optional<Window> window, bool pre_factor,
                                    WitnessChecks level, const Tolerances& tol) {
  const SystemPtr sys = field.system();
  const auto& g = *sys->group();
  Window f = window ? *window : Window::singletons(g, field.support());

  // bar must identify F with supp(T).
  std::vector<int> bars;
  for (const auto& t : f.tuples()) bars.push_back(tuple_product(g, t));
  std::vector<int> sorted_bars = bars, sorted_supp = field.support();
  std::sort(sorted_bars.begin(), sorted_bars.end());
  std::sort(sorted_supp.begin(), sorted_supp.end());
  if (std::adjacent_find(sorted_bars.begin(), sorted_bars.end()) != sorted_bars.end())
    throw AmbiguousWindow("two window tuples have the same product");
  if (sorted_bars != sorted_supp)
    throw AmbiguousWindow("window products do not enumerate the field support");

  Window working = f.translation_closure(g);
  auto crossed_space = OperatorSpace::crossed(sys);
  auto window_space_w = OperatorSpace::window(sys, working);
  auto window_space_f = OperatorSpace::window(sys, f);

  const AlgebraPtr crossed_alg = sys->represented_algebra();
  const int n = g.order();
  const int m = sys->algebra()->dim();

  auto rep_images = [&](const Window& target) {
    std::vector<Matrix> images;
    images.reserve(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i)
      for (int s = 0; s < n; ++s) {
        std::vector<AlgebraElement> c(n, sys->algebra()->zero());
        c[s] = sys->algebra()->element(sys->algebra()->basis_element(i), tol);
        images.push_back(
            windowed_regular_rep(sys->element(std::move(c)), target).concrete());
      }
    return images;
  };

  LinearMap window_rep(crossed_alg,
                       sys->algebra()->ambient_dim() * working.size(),
                       rep_images(working), "window-rep");
  window_rep.with_spaces(crossed_space, window_space_w);

  LinearMap compressed_rep(crossed_alg, sys->algebra()->ambient_dim() * f.size(),
                           rep_images(f), "compressed-rep");
  compressed_rep.with_spaces(crossed_space, window_space_f);

  AlgebraPtr window_alg = window_space_f->algebra();
  Matrix field_diagonal = field_diagonal_window(field, f).concrete();
  LinearMap field_compression =
      compression_map(field_diagonal, window_alg, "field-compression");
  field_compression.with_spaces(window_space_f, window_space_f);

  // psi_F on the matrix-unit basis of M_F(A).
  std::vector<Matrix> psi_images;
  psi_images.reserve(static_cast<std::size_t>(m) * f.size() * f.size());
  for (int i = 0; i < m; ++i)
    for (int s = 0; s < f.size(); ++s)
      for (int t = 0; t < f.size(); ++t) {
        WindowedMatrix unit = WindowedMatrix::matrix_unit(
            sys, f, s, t, sys->algebra()->basis_element(i));
        psi_images.push_back(sys->represent(averaging_apply(sys, unit)));
      }
  LinearMap averaging(window_alg, sys->rep_dim(), std::move(psi_images),
                      "averaging");
  averaging.with_spaces(window_space_f, crossed_space);

  WitnessBuild b;
  b.witness.emplace(FactorizationWitness{
      sys, field, f, working, std::move(window_rep), std::move(compressed_rep),
      std::move(field_compression), std::move(averaging),
      std::move(field_diagonal), pre_factor});
  FactorizationWitness& w = *b.witness;

  // Verification battery.
  Rng rng(fnv1a("witness-build") ^ 0x9e3779b97f4a7c15ull);
  {
    double worst = 0.0;
    for (int trial = 0; trial < 32; ++trial) {
      CrossedElement x = random_crossed_element(sys, rng);
      CrossedElement y = random_crossed_element(sys, rng);
      Matrix fx = w.window_rep.apply(sys->represent(x));
      Matrix fy = w.window_rep.apply(sys->represent(y));
      Matrix fxy = w.window_rep.apply(sys->represent(x * y));
      Matrix fxs = w.window_rep.apply(sys->represent(x.adjoint()));
      double scale = 1.0 + frobenius_norm(fx) * frobenius_norm(fy);
      worst = std::max(worst, frobenius_norm(Matrix(fx * fy - fxy)) / scale);
      worst = std::max(worst,
                       frobenius_norm(Matrix(fx.adjoint() - fxs)) /
                           (1.0 + frobenius_norm(fx)));
    }
    push(b, CheckResult::residual("witness/rep-homomorphism", worst,
                                  tol.identity_tol));
  }
  if (level == WitnessChecks::full) {
    push(b, verify_cp(w.compressed_rep, CpMode::ccp, tol));
    push(b, verify_cp(w.field_compression, CpMode::ccp, tol));
    push(b, verify_cp(w.averaging, CpMode::cp, tol));
  } else {
    // Sampled positivity in place of the full Choi eigenproblem.
    double worst = -1e300;
    for (int trial = 0; trial < 16; ++trial) {
      Matrix y = random_matrix(window_alg->ambient_dim(),
                               window_alg->ambient_dim(), rng);
      Matrix p = window_alg->from_coefficients(
          window_alg->coefficients_of(y * y.adjoint()));
      Matrix img = w.averaging.apply(
          w.field_compression.apply(0.5 * (p + p.adjoint())));
      worst = std::max(worst, -min_hermitian_eigenvalue(img, tol) /
                                  (1.0 + spectral_norm(p)));
    }
    push(b, CheckResult::residual("witness/sampled-positivity",
                                  std::max(0.0, worst), tol.psd_tol * 10));
    double unit_norm = spectral_norm(w.compressed_rep.apply_unit());
    push(b, CheckResult::residual("witness/compression-contractive",
                                  std::max(0.0, unit_norm - 1.0),
                                  tol.identity_tol));
  }
  {
    Matrix psi_theta_unit = w.averaging.apply(w.field_compression.apply_unit());
    double norm_at_unit = spectral_norm(psi_theta_unit);
    push(b, CheckResult::residual("witness/averaging-contractive-at-unit",
                                  std::max(0.0, norm_at_unit - 1.0),
                                  tol.identity_tol));
  }
  return b;
}

}  // namespace

FactorizationWitness build_witness(const AmenabilityField& field,
                                   std::optional<Window> window, bool pre_factor,
                                   WitnessChecks checks, const Tolerances& tol) {
  WitnessBuild b = build_witness_internal(field, std::move(window), pre_factor,
                                          checks, tol);
  if (!b.ok) {
    std::string which;
    for (const auto& c : b.checks)
      if (!c.pass) which += (which.empty() ? "" : ", ") + c.name;
    throw InternalError("witness verification failed: " + which);
  }
  return std::move(*b.witness);
}

double factorization_error(const FactorizationWitness& w, const CrossedElement& x) {
  CrossedElement diff = w.apply(x) - x;
  return spectral_norm(w.sys->represent(diff));
}

double witness_equivariance_residual(const FactorizationWitness& w,
                                     NuclearityMode mode, int trials,
                                     std::uint64_t seed) {
  Rng rng(seed);
  const SystemPtr sys = w.sys;
  const auto& g = *sys->group();
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  double worst = 0.0;

  if (mode == NuclearityMode::module) {
    for (int trial = 0; trial < trials; ++trial) {
      int r = pick(rng);
      // phi(r.x) = r.phi(x) on the working window.
      CrossedElement x = random_crossed_element(sys, rng);
      WindowedMatrix lhs = windowed_regular_rep(group_act(r, x), w.working_window);
      WindowedMatrix rhs = group_act_window(
          r, windowed_regular_rep(x, w.working_window));
      worst = std::max(worst, (lhs - rhs).frobenius());

      // psi_{rF}(r.m) = r.psi_F(m) as a family identity.
      WindowedMatrix m = random_window_matrix(sys, w.compression_window, rng);
      CrossedElement left = averaging_apply(sys, translate_window_matrix(r, m));
      CrossedElement right = group_act(r, averaging_apply(sys, m));
      worst = std::max(
          worst, frobenius_norm(Matrix(sys->represent(left - right))));
    }
  } else {
    const Window& f = w.compression_window;
    for (int trial = 0; trial < trials; ++trial) {
      // (phi_F (x) id) delta(x) = delta_F(phi_F(x)).
      CrossedElement x = random_crossed_element(sys, rng);
      const int fdim = sys->algebra()->ambient_dim() * f.size();
      Matrix lhs = Matrix::Zero(fdim * g.order(), fdim * g.order());
      for (int s = 0; s < g.order(); ++s) {
        std::vector<AlgebraElement> c(g.order(), sys->algebra()->zero());
        c[s] = x.coefficient(s);
        lhs += kron(windowed_regular_rep(sys->element(std::move(c)), f).concrete(),
                    regular_unitary(g, s));
      }
      Matrix rhs = window_tensor_shuffle(
          coaction_window(windowed_regular_rep(x, f)));
      worst = std::max(worst, frobenius_norm(Matrix(lhs - rhs)));

      // (psi_F (x) id) delta_F(m) = delta(psi_F(m)).
      WindowedMatrix m = random_window_matrix(sys, f, rng);
      Matrix lhs2 = Matrix::Zero(sys->rep_dim() * g.order(),
                                 sys->rep_dim() * g.order());
      for (int lam = 0; lam < g.order(); ++lam) {
        WindowedMatrix part = WindowedMatrix::zero(sys, f);
        bool any = false;
        for (int s = 0; s < f.size(); ++s) {
          int bs = tuple_product(g, f.tuple(s));
          for (int t = 0; t < f.size(); ++t) {
            int sig = g.mul(bs, g.inv(tuple_product(g, f.tuple(t))));
            if (sig == lam) {
              part.entry(s, t) = m.entry(s, t);
              any = true;
            }
          }
        }
        if (!any) continue;
        lhs2 += kron(sys->represent(averaging_apply(sys, part)),
                     regular_unitary(g, lam));
      }
      Matrix rhs2 = coaction(averaging_apply(sys, m));
      worst = std::max(worst, frobenius_norm(Matrix(lhs2 - rhs2)));
    }
  }
  return worst;
}

NuclearityReport run_nuclearity_check(const SystemPtr& sys,
                                      const AmenabilityField& field,
                                      const std::vector<CrossedElement>& test_set,
                                      double eps, NuclearityMode mode,
                                      std::uint64_t seed, WitnessChecks checks,
                                      const Tolerances& tol) {
  if (field.system() != sys)
    throw InvalidInput("field does not belong to the given system");
  NuclearityReport report;
  WitnessBuild b = build_witness_internal(field, {}, false, checks, tol);
  for (auto& c : b.checks) report.checks.push_back(std::move(c));
  const FactorizationWitness& w = *b.witness;

  // Admissibility certificates: the representation is a c.p. module map, the
  // compression is a codomain conjugation of it, and the averaging maps form
  // a translation (co)family composed with the field compressions.
  CertificateBindings bindings = certificate_bindings(w, nullptr, tol);
  auto run_cert = [&](const char* name, const CertificateNode& node) {
    CertificateOutcome outcome = validate_certificate(node, bindings, tol);
    double worst = 0.0;
    for (const auto& d : outcome.details)
      if (!d.pass) worst = 1.0;
    report.checks.push_back(CheckResult::residual(name, worst, 0.5));
  };
  CertificateNode phi_leaf{.kind = "module_map", .map = "window-rep"};
  run_cert("certificate/window-rep", phi_leaf);
  CertificateNode phi_f_node;
  phi_f_node.kind = "conjugate_codomain";
  phi_f_node.element = "window-projection";
  phi_f_node.children = {phi_leaf};
  run_cert("certificate/compressed-rep", phi_f_node);
  CertificateNode family_leaf;
  family_leaf.kind = mode == NuclearityMode::module ? "g_family" : "g_cofamily";
  family_leaf.family = "averaging-family";
  CertificateNode composed;
  composed.kind = "family_compose";
  CertificateNode theta_leaf;
  theta_leaf.kind = mode == NuclearityMode::module ? "g_family" : "g_cofamily";
  theta_leaf.family = "compression-family";
  composed.children = {family_leaf, theta_leaf};
  run_cert("certificate/averaging-family", composed);

  // Equivariance identities for the selected mode.
  if (mode == NuclearityMode::module) {
    report.checks.push_back(check_equivariance(w.window_rep,
                                               EquivarianceMode::module, tol));
    report.checks.push_back(check_equivariance(w.window_rep,
                                               EquivarianceMode::gmap, tol));
    report.checks.push_back(check_equivariance(w.averaging,
                                               EquivarianceMode::module, tol));
    WindowFamily family = averaging_family(w, false);
    report.checks.push_back(check_window_family(family, tol));
  } else {
    report.checks.push_back(check_comap_pair(w.compressed_rep, w.averaging, tol));
    double unit_res = spectral_norm(
        Matrix(coaction(sys->unit_element()) -
               Matrix::Identity(sys->rep_dim() * sys->group()->order(),
                                sys->rep_dim() * sys->group()->order())));
    report.checks.push_back(CheckResult::residual("coaction-unital", unit_res,
                                                  tol.identity_tol));
  }
  {
    double rnd = witness_equivariance_residual(w, mode, 32, seed ^ fnv1a("equiv"));
    report.checks.push_back(CheckResult::residual("equivariance-random", rnd,
                                                  tol.identity_tol * 100));
  }

  report.max_error = 0.0;
  for (const auto& x : test_set)
    report.max_error = std::max(report.max_error, factorization_error(w, x));
  report.checks.push_back(CheckResult::residual("max-error", report.max_error, eps));

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

NormalizationRecord normalization_experiment(const SystemPtr& sys,
                                             const AmenabilityField& field,
                                             const Tolerances& tol) {
  if (field.system() != sys)
    throw InvalidInput("field does not belong to the given system");
  const int n = sys->group()->order();
  if (static_cast<int>(field.support().size()) != n)
    throw InvalidInput("normalization experiment needs a constant full-support field");
  const Matrix expected = field.value(0).matrix();
  for (int s = 1; s < n; ++s)
    if (frobenius_norm(Matrix(field.value(s).matrix() - expected)) > tol.identity_tol)
      throw InvalidInput("normalization experiment needs a constant field");

  NormalizationRecord rec;
  FactorizationWitness plain = build_witness(field, {}, false,
                                             WitnessChecks::fast, tol);
  FactorizationWitness scaled = build_witness(field, {}, true,
                                              WitnessChecks::fast, tol);
  const auto& a = *sys->algebra();
  for (int i = 0; i < a.dim(); ++i)
    for (int s = 0; s < n; ++s) {
      std::vector<AlgebraElement> c(n, a.zero());
      c[s] = a.element(a.basis_element(i), tol);
      CrossedElement x = sys->element(std::move(c));
      rec.err_without = std::max(rec.err_without, factorization_error(plain, x));
    }
  rec.err_with_unit = factorization_error(scaled, sys->unit_element());
  rec.expected_with_unit = 1.0 - 1.0 / double(n);
  rec.note =
      "the literal 1/|F| pre-factor breaks unitality: psi(theta(phi(1))) = "
      "(1/|F|) 1, so the approximation misses the unit by exactly 1 - 1/|F|; "
      "the unnormalized averaging step is unital and achieves vanishing error";
  return rec;
}

State pullback_state(const SystemPtr& sys, const State& rho, const Tolerances& tol) {
  if (rho.algebra() != sys->algebra())
    throw InvalidInput("state is not on the system's base algebra");
  CheckResult invariant = check_invariant_state(rho, sys->action(), tol);
  if (!invariant.pass)
    throw NotInvariant("state is not alpha-invariant (residual " +
                       std::to_string(invariant.witness) + ")");
  const int n = sys->group()->order();
  const int m = sys->algebra()->dim();
  RowVector values = RowVector::Zero(m * n);
  const int e = sys->group()->identity();
  for (int i = 0; i < m; ++i) values(i * n + e) = rho.values()(i);
  return State::from_values(sys->represented_algebra(), std::move(values), tol);
}

CheckResult check_trace_property(const SystemPtr& sys, const State& rho_prime,
                                 int trials, std::uint64_t seed,
                                 const Tolerances& tol) {
  if (rho_prime.algebra() != sys->represented_algebra())
    throw InvalidInput("state is not on the represented crossed product");
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    for (int t = 0; t < sys->group()->order(); ++t) {
      CrossedElement xt = x * sys->embed_group(t);
      CrossedElement tx = sys->embed_group(t) * x;
      Cplx left = (rho_prime.values() * represented_coefficients(xt))(0);
      Cplx right = (rho_prime.values() * represented_coefficients(tx))(0);
      worst = std::max(worst, std::abs(left - right));
    }
  }
  return CheckResult::residual("trace-property", worst, tol.identity_tol);
}

PdFunction extract_pd_function(const SystemPtr& sys, const LinearMap& phi,
                               const State& rho, const Tolerances& tol) {
  CheckResult ucp = verify_cp(phi, CpMode::ucp, tol);
  if (!ucp.pass) throw NotUCP("approximant is not u.c.p.: " + ucp.name);
  CheckResult invariant = check_invariant_state(rho, sys->action(), tol);
  if (!invariant.pass) throw NotInvariant("state is not alpha-invariant");

  const auto& g = *sys->group();
  PdFunction out;
  out.group = sys->group();
  out.values.resize(g.order());
  double slack = -1e300;
  for (int s = 0; s < g.order(); ++s) {
    Matrix img = phi.apply(sys->represent(sys->embed_group(s)));
    CrossedElement y = sys->from_matrix(img);
    CrossedElement z = y * sys->embed_group(g.inv(s));
    out.values[s] = rho.value(expectation(z));
    double dist = spectral_norm(
        Matrix(img - sys->represent(sys->embed_group(s))));
    slack = std::max(slack, std::abs(out.values[s] - Cplx(1.0)) - dist);
  }
  out.unit_deviation_slack = slack;
  Matrix gram(g.order(), g.order());
  for (int i = 0; i < g.order(); ++i)
    for (int j = 0; j < g.order(); ++j)
      gram(i, j) = out.values[g.mul(g.inv(j), i)];
  out.gram_min_eigenvalue = min_hermitian_eigenvalue(gram, tol);
  return out;
}

WitnessTransformResult witness_restrict(const FactorizationWitness& w,
                                        const std::vector<int>& sub_basis,
                                        NuclearityMode mode, const Tolerances& tol) {
  const SystemPtr sys = w.sys;
  const auto& crossed = *sys->represented_algebra();
  const auto& g = *sys->group();
  if (sub_basis.empty()) throw InvalidInput("empty sub-basis");

  // Span membership solver for C.
  Matrix stacked(crossed.ambient_dim() * crossed.ambient_dim(),
                 static_cast<Eigen::Index>(sub_basis.size()));
  for (std::size_t i = 0; i < sub_basis.size(); ++i)
    stacked.col(static_cast<Eigen::Index>(i)) =
        vec(crossed.basis_element(sub_basis[i]));
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(stacked);
  auto in_span = [&](const Matrix& x) {
    Vector t = vec(x);
    return (stacked * cod.solve(t) - t).norm() <=
           tol.identity_tol * (1.0 + t.norm());
  };

  auto crossed_space = OperatorSpace::crossed(sys);
  for (int idx : sub_basis) {
    const Matrix& c = crossed.basis_element(idx);
    for (int j = 0; j < sys->algebra()->dim(); ++j) {
      AlgebraElement b = sys->algebra()->element_from_coefficients(
          Vector::Unit(sys->algebra()->dim(), j));
      if (!in_span(c * crossed_space->module_embed(b)))
        throw NotSubmodule("sub-basis is not invariant under the module action");
    }
    if (mode == NuclearityMode::module) {
      for (int r = 0; r < g.order(); ++r)
        if (!in_span(crossed_space->act(r, c)))
          throw NotSubmodule("sub-basis is not invariant under the G-action");
    } else {
      double res = 0.0;
      std::vector<Matrix> legs = split_group_leg(crossed_space->coact(c), g, &res);
      for (const auto& leg : legs)
        if (!in_span(leg))
          throw NotSubmodule("sub-basis is not invariant under the coaction");
    }
  }

  WitnessTransformResult out;
  for (int i = 0; i < crossed.dim(); ++i)
    out.original_error = std::max(
        out.original_error,
        factorization_error(w, sys->from_represented_coefficients(
                                   Vector::Unit(crossed.dim(), i))));
  for (int idx : sub_basis)
    out.transformed_error = std::max(
        out.transformed_error,
        factorization_error(w, sys->from_represented_coefficients(
                                   Vector::Unit(crossed.dim(), idx))));
  out.comparison = CheckResult::residual(
      "witness-restrict", std::max(0.0, out.transformed_error - out.original_error),
      tol.identity_tol);
  return out;
}

WitnessTransformResult witness_compose(const FactorizationWitness& w,
                                       const LinearMap& sigma, const LinearMap& tau,
                                       const Tolerances& tol) {
  for (const LinearMap* map : {&sigma, &tau}) {
    CheckResult cp = verify_cp(*map, CpMode::ccp, tol);
    if (!cp.pass)
      throw InvalidInput("composition requires c.c.p. maps: " + map->name());
    CheckResult module = check_equivariance(*map, EquivarianceMode::module, tol);
    CheckResult gmap = check_equivariance(*map, EquivarianceMode::gmap, tol);
    if (!module.pass || !gmap.pass)
      throw InvalidInput("composition requires module G-maps: " + map->name());
  }
  const SystemPtr sys = w.sys;
  const auto& crossed = *sys->represented_algebra();
  WitnessTransformResult out;
  for (int i = 0; i < crossed.dim(); ++i) {
    CrossedElement x = sys->from_represented_coefficients(
        Vector::Unit(crossed.dim(), i));
    CrossedElement taux = sys->from_matrix(tau.apply(sys->represent(x)));
    CrossedElement through = w.apply(taux);
    double orig = spectral_norm(sys->represent(through - taux));
    double transformed = spectral_norm(
        Matrix(sigma.apply(sys->represent(through)) -
               sigma.apply(sys->represent(taux))));
    out.original_error = std::max(out.original_error, orig);
    out.transformed_error = std::max(out.transformed_error, transformed);
  }
  out.comparison = CheckResult::residual(
      "witness-compose", std::max(0.0, out.transformed_error - out.original_error),
      tol.identity_tol);
  return out;
}

CbapBoundReport cbap_bound_check(const SystemPtr& sys,
                                 const std::vector<LinearMap>& phis,
                                 const std::vector<LinearMap>& psis,
                                 const LinearMap& inner, int ucp_trials,
                                 std::uint64_t seed, const Tolerances& tol) {
  if (phis.size() != psis.size() || phis.empty())
    throw InvalidInput("need matching nonempty map families");
  CbapBoundReport report;
  auto exact_cb = [&](const LinearMap& map) {
    CbNormResult r = cb_norm(map, seed ^ fnv1a(map.name()), {}, tol);
    if (!r.exact)
      throw NotCP("cb-norm calculus requires verified c.p. maps: " + map.name());
    return *r.exact;
  };
  for (const auto& map : phis) report.m1 = std::max(report.m1, exact_cb(map));
  for (const auto& map : psis) report.m2 = std::max(report.m2, exact_cb(map));
  report.inner = exact_cb(inner);

  double bound = report.m1 * report.m2 * report.inner;
  double worst_excess = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    LinearMap comp = LinearMap::compose(psis[i],
                                        LinearMap::compose(inner, phis[i]));
    worst_excess = std::max(worst_excess, exact_cb(comp) - bound);
  }
  report.checks.push_back(CheckResult::residual(
      "composition-bound", std::max(0.0, worst_excess), tol.psd_tol));

  LinearMap e_map = expectation_map(sys);
  Rng rng(seed ^ fnv1a("ucp"));
  double worst_contraction = 0.0;
  for (int trial = 0; trial < ucp_trials; ++trial) {
    LinearMap phi = random_ucp_map(sys, 3, rng, tol);
    double lhs = exact_cb(LinearMap::compose(e_map, phi));
    double rhs = exact_cb(phi);
    worst_contraction = std::max(worst_contraction, lhs - rhs);
  }
  report.checks.push_back(CheckResult::residual(
      "expectation-contraction", std::max(0.0, worst_contraction), tol.psd_tol));

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

LinearMap random_ucp_map(const SystemPtr& sys, int kraus_terms, Rng& rng,
                         const Tolerances& tol) {
  const auto& crossed = *sys->represented_algebra();
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Matrix> kraus;
    Matrix s = Matrix::Zero(crossed.ambient_dim(), crossed.ambient_dim());
    for (int i = 0; i < kraus_terms; ++i) {
      Matrix a = crossed.from_coefficients(random_vector(crossed.dim(), rng));
      kraus.push_back(a);
      s += a.adjoint() * a;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.eigenvalues()(0) < 1e-8) continue;
    Matrix s_inv_half = es.eigenvectors() *
                        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().adjoint();
    for (auto& a : kraus) a = a * s_inv_half;
    std::vector<Matrix> images;
    images.reserve(crossed.dim());
    for (int i = 0; i < crossed.dim(); ++i) {
      Matrix acc = Matrix::Zero(crossed.ambient_dim(), crossed.ambient_dim());
      for (const auto& a : kraus)
        acc += a.adjoint() * crossed.basis_element(i) * a;
      images.push_back(std::move(acc));
    }
    LinearMap map(sys->represented_algebra(), crossed.ambient_dim(),
                  std::move(images), "random-ucp");
    auto crossed_space = OperatorSpace::crossed(sys);
    map.with_spaces(crossed_space, crossed_space);
    // S^{-1/2} lies in the algebra, so images stay inside it; double-check.
    double res = 0.0;
    crossed.coefficients_of(map.apply_unit(), &res);
    if (res <= tol.identity_tol * 10) return map;
  }
  throw InternalError("failed to draw an invertible Kraus normalization");
}

LinearMap expectation_map(const SystemPtr& sys) {
  const auto& crossed = *sys->represented_algebra();
  const int n = sys->group()->order();
  const int d = sys->algebra()->ambient_dim();
  const int e = sys->group()->identity();
  std::vector<Matrix> images;
  images.reserve(crossed.dim());
  for (int i = 0; i < sys->algebra()->dim(); ++i)
    for (int s = 0; s < n; ++s)
      images.push_back(s == e ? sys->algebra()->basis_element(i)
                              : Matrix::Zero(d, d));
  LinearMap map(sys->represented_algebra(), d, std::move(images), "expectation");
  map.with_spaces(OperatorSpace::crossed(sys), OperatorSpace::base_algebra(sys));
  return map;
}

LinearMap expectation_into_crossed(const SystemPtr& sys) {
  const auto& crossed = *sys->represented_algebra();
  const int n = sys->group()->order();
  const int e = sys->group()->identity();
  std::vector<Matrix> images;
  images.reserve(crossed.dim());
  for (int i = 0; i < sys->algebra()->dim(); ++i)
    for (int s = 0; s < n; ++s)
      images.push_back(
          s == e ? sys->represent_algebra(sys->algebra()->basis_element(i))
                 : Matrix::Zero(sys->rep_dim(), sys->rep_dim()));
  LinearMap map(sys->represented_algebra(), sys->rep_dim(), std::move(images),
                "expectation-into-crossed");
  auto crossed_space = OperatorSpace::crossed(sys);
  map.with_spaces(crossed_space, crossed_space);
  return map;
}

WindowFamily averaging_family(const FactorizationWitness& w, bool with_compression,
                              bool cofamily) {
  const SystemPtr sys = w.sys;
  const auto& g = *sys->group();
  WindowFamily family;
  family.sys = sys;
  family.base = w.compression_window;
  family.cofamily = cofamily;
  auto crossed_space = OperatorSpace::crossed(sys);
  for (int r = 0; r < g.order(); ++r) {
    Window wr = w.compression_window.translated(g, r);
    auto wr_space = OperatorSpace::window(sys, wr);
    AlgebraPtr wr_alg = wr_space->algebra();
    const int m = sys->algebra()->dim();
    std::vector<Matrix> images;
    images.reserve(static_cast<std::size_t>(m) * wr.size() * wr.size());
    for (int i = 0; i < m; ++i)
      for (int s = 0; s < wr.size(); ++s)
        for (int t = 0; t < wr.size(); ++t) {
          WindowedMatrix unit = WindowedMatrix::matrix_unit(
              sys, wr, s, t, sys->algebra()->basis_element(i));
          images.push_back(sys->represent(averaging_apply(sys, unit)));
        }
    LinearMap psi(wr_alg, sys->rep_dim(), std::move(images),
                  "averaging@" + g.label(r));
    psi.with_spaces(wr_space, crossed_space);
    if (with_compression) {
      Matrix xr = translate_window_matrix(
                      r, field_diagonal_window(w.field, w.compression_window))
                      .concrete();
      LinearMap theta = compression_map(xr, wr_alg, "compression@" + g.label(r));
      theta.with_spaces(wr_space, wr_space);
      psi = LinearMap::compose(psi, theta, "averaging-compressed@" + g.label(r));
    }
    family.maps.push_back(std::move(psi));
  }
  return family;
}

CertificateBindings certificate_bindings(const FactorizationWitness& w,
                                         const State* rho, const Tolerances& tol) {
  const SystemPtr sys = w.sys;
  const auto& g = *sys->group();
  CertificateBindings b;
  b.sys = sys;

  auto crossed_space = OperatorSpace::crossed(sys);
  LinearMap identity = LinearMap::identity(sys->represented_algebra(), "identity");
  identity.with_spaces(crossed_space, crossed_space);
  b.maps.emplace("identity", std::move(identity));
  b.maps.emplace("expectation", expectation_map(sys));
  b.maps.emplace("expectation-into-crossed", expectation_into_crossed(sys));
  {
    const auto& crossed = *sys->represented_algebra();
    std::vector<Matrix> images;
    images.reserve(crossed.dim());
    for (int i = 0; i < crossed.dim(); ++i)
      images.push_back(crossed.basis_element(i).transpose());
    LinearMap transpose(sys->represented_algebra(), crossed.ambient_dim(),
                        std::move(images), "transpose");
    transpose.with_spaces(crossed_space, crossed_space);
    b.maps.emplace("transpose", std::move(transpose));
  }
  b.maps.emplace("window-rep", w.window_rep);
  b.maps.emplace("compressed-rep", w.compressed_rep);
  b.maps.emplace("field-compression", w.field_compression);
  b.maps.emplace("averaging", w.averaging);

  b.families.emplace("averaging-family", averaging_family(w, false, false));
  b.families.emplace("averaging-cofamily", averaging_family(w, false, true));
  b.families.emplace("compression-family", [&] {
    WindowFamily fam;
    fam.sys = sys;
    fam.base = w.compression_window;
    for (int r = 0; r < g.order(); ++r) {
      Window wr = w.compression_window.translated(g, r);
      auto wr_space = OperatorSpace::window(sys, wr);
      Matrix xr = translate_window_matrix(
                      r, field_diagonal_window(w.field, w.compression_window))
                      .concrete();
      LinearMap theta = compression_map(xr, wr_space->algebra(),
                                        "compression@" + g.label(r));
      theta.with_spaces(wr_space, wr_space);
      fam.maps.push_back(std::move(theta));
    }
    return fam;
  }());
  b.families.emplace("averaging-compressed-family", averaging_family(w, true, false));

  const auto& crossed = *sys->represented_algebra();
  b.elements.emplace("unit", Matrix(Matrix::Identity(crossed.ambient_dim(),
                                                     crossed.ambient_dim())));
  b.elements.emplace("unit-base",
                     Matrix(Matrix::Identity(sys->algebra()->ambient_dim(),
                                             sys->algebra()->ambient_dim())));
  {
    Matrix npb = Matrix::Identity(sys->algebra()->ambient_dim(),
                                  sys->algebra()->ambient_dim());
    npb(0, 0) = -1.0;
    b.elements.emplace("nonpositive-base", std::move(npb));
  }
  for (int i = 0; i < crossed.dim(); ++i)
    b.elements.emplace("crossed-basis:" + std::to_string(i),
                       crossed.basis_element(i));
  {
    // 1 (x) P_F inside the working window's ambient space.
    const Window& ww = w.working_window;
    const int d = sys->algebra()->ambient_dim();
    Matrix proj = Matrix::Zero(d * ww.size(), d * ww.size());
    for (int i = 0; i < w.compression_window.size(); ++i) {
      int pos = ww.find(w.compression_window.tuple(i));
      for (int p = 0; p < d; ++p)
        proj(p * ww.size() + pos, p * ww.size() + pos) = 1.0;
    }
    b.elements.emplace("window-projection", std::move(proj));
  }
  {
    Rng rng(fnv1a("certificate-positive"));
    Matrix y = random_matrix(crossed.ambient_dim(), crossed.ambient_dim(), rng);
    Matrix p = y * y.adjoint();
    b.elements.emplace("random-positive", p / (1.0 + spectral_norm(p)));
  }

  if (rho) {
    State rho_prime = pullback_state(sys, *rho, tol);
    b.functionals.emplace("state-crossed",
                          NamedFunctional{sys->represented_algebra(),
                                          rho_prime.values()});
    b.functionals.emplace("state-base",
                          NamedFunctional{sys->algebra(), rho->values()});
  }
  for (int seed_id = 0; seed_id < 8; ++seed_id) {
    Rng rng(fnv1a("group-functional") + static_cast<std::uint64_t>(seed_id));
    RowVector values(g.order());
    for (int s = 0; s < g.order(); ++s)
      values(s) = Cplx(std::normal_distribution<double>()(rng),
                       std::normal_distribution<double>()(rng));
    b.functionals.emplace("group-functional:" + std::to_string(seed_id),
                          NamedFunctional{sys->group_algebra(), values});
  }
  // The trace on C*_r(G) — a positive functional for the positive fixtures.
  {
    RowVector values = RowVector::Zero(g.order());
    values(g.identity()) = 1.0;
    b.functionals.emplace("group-trace",
                          NamedFunctional{sys->group_algebra(), values});
  }
  return b;
}

}  // namespace xprod
