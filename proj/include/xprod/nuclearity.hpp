#pragma once

#include "xprod/certificates.hpp"
#include "xprod/coactions.hpp"

namespace xprod {

/// A finitely supported field T: G -> Z(A)+ with sum_s T(s)^2 = 1. The
/// quantitative input of every factorization witness: its translation defect
/// controls how well the witness reproduces group unitaries.
class AmenabilityField {
 public:
  /// T(s) = |G|^{-1/2} 1 on all of G; defect zero.
  static AmenabilityField constant(SystemPtr sys, const Tolerances& tol = {});
  /// Uniform scalar field on the given support.
  static AmenabilityField truncated(SystemPtr sys, std::vector<int> support,
                                    const Tolerances& tol = {});
  /// Arbitrary center-valued data; validated (NotCentralPositive /
  /// NotNormalized).
  static AmenabilityField from_values(SystemPtr sys,
                                      std::vector<AlgebraElement> values,
                                      const Tolerances& tol = {});

  const SystemPtr& system() const { return sys_; }
  const AlgebraElement& value(int s) const { return values_.at(s); }
  const std::vector<int>& support() const { return support_; }

 private:
  AmenabilityField(SystemPtr sys, std::vector<AlgebraElement> values,
                   std::vector<int> support)
      : sys_(std::move(sys)), values_(std::move(values)),
        support_(std::move(support)) {}
  SystemPtr sys_;
  std::vector<AlgebraElement> values_;  // one per group element, zero off-support
  std::vector<int> support_;
};

/// || sum_s (T(s) - alpha_t(T(t^-1 s)))* (T(s) - alpha_t(T(t^-1 s))) ||.
double translation_defect(const AmenabilityField& field, int t);

/// The factorization witness through M_F(A): the windowed regular
/// representation, its compression to F, the compression by the field
/// diagonal X = sum_t alpha_{bar(t)^-1}(T(bar t)) (x) e_{t,t}, and the
/// averaging map back into the crossed product. `pre_factor` switches the
/// literal 1/|F| normalization of the averaging step on.
struct FactorizationWitness {
  SystemPtr sys;
  AmenabilityField field;
  Window compression_window;  // F: bar bijective onto supp(T)
  Window working_window;      // W = union of rF, closed under every translation
  LinearMap window_rep;       // crossed -> M_W(A), a *-homomorphism
  LinearMap compressed_rep;   // crossed -> M_F(A)
  LinearMap field_compression;  // M_F(A) -> M_F(A), m -> X m X
  LinearMap averaging;        // M_F(A) -> crossed
  Matrix field_diagonal;      // X, concrete in M_F(A)
  bool pre_factor = false;

  /// psi_F(theta(phi_F(x))), with the optional 1/|F| factor.
  CrossedElement apply(const CrossedElement& x) const;
};

enum class WitnessChecks { fast, full };

/// Builds and verifies the witness. `full` verification runs the Choi checks
/// of phi_F, theta and psi_F (matching the construction's contract); `fast`
/// replaces them by sampled spot checks for large systems.
/// The window defaults to singletons over supp(T); bar must map F bijectively
/// onto supp(T) (AmbiguousWindow otherwise).
FactorizationWitness build_witness(const AmenabilityField& field,
                                   std::optional<Window> window = {},
                                   bool pre_factor = false,
                                   WitnessChecks checks = WitnessChecks::full,
                                   const Tolerances& tol = {});

/// || psi_F theta phi_F(x) - x || in the reduced norm.
double factorization_error(const FactorizationWitness& w, const CrossedElement& x);

/// The windowed regular representation of x on l^2(W): entry (u, s^-1 u) gets
/// alpha_{bar(u)^-1}(a_s) whenever both tuples lie in W.
WindowedMatrix windowed_regular_rep(const CrossedElement& x, const Window& w);

/// The averaging map sum a_{s,t} (x) e_{s,t} -> sum alpha_{bar s}(a_{s,t})
/// bar(s) bar(t)^-1, on coefficients.
CrossedElement averaging_apply(const SystemPtr& sys, const WindowedMatrix& m);

/// The field diagonal X = sum_{t in F} alpha_{bar(t)^-1}(T(bar t)) (x) e_{t,t}.
WindowedMatrix field_diagonal_window(const AmenabilityField& field, const Window& f);

enum class NuclearityMode { module, comodule };

struct NuclearityReport {
  std::vector<CheckResult> checks;
  bool pass = false;
  double max_error = 0.0;
};

/// The full Def-2.9-style driver: builds the witness, validates the
/// admissibility certificates of the compressed representation and the
/// averaging family, runs the equivariance identities for the selected mode
/// (G-map/family identities, or the comap intertwinings), and checks
/// max_{b in S} ||psi_F phi_F(b) - b|| <= eps.
NuclearityReport run_nuclearity_check(const SystemPtr& sys,
                                      const AmenabilityField& field,
                                      const std::vector<CrossedElement>& test_set,
                                      double eps, NuclearityMode mode,
                                      std::uint64_t seed,
                                      WitnessChecks checks = WitnessChecks::full,
                                      const Tolerances& tol = {});

/// Largest residual of the witness (co)equivariance identities over random
/// inputs: module mode checks phi(r.x) = r.phi(x) and psi_{rF}(r.m) =
/// r.psi_F(m); comodule mode checks (phi_F (x) id) delta = delta_F phi_F and
/// (psi_F (x) id) delta_F = delta psi_F.
double witness_equivariance_residual(const FactorizationWitness& w,
                                     NuclearityMode mode, int trials,
                                     std::uint64_t seed);

struct NormalizationRecord {
  double err_without = 0.0;   // max basis factorization error, pre-factor off
  double err_with_unit = 0.0; // error at x = 1 with the literal 1/|F| factor
  double expected_with_unit = 0.0;  // 1 - 1/|G|
  std::string note;
};

/// Compares the unnormalized averaging step against the literal 1/|F|
/// variant on a constant full-support field.
NormalizationRecord normalization_experiment(const SystemPtr& sys,
                                             const AmenabilityField& field,
                                             const Tolerances& tol = {});

/// rho' = rho . E on the represented crossed product; requires rho to be
/// alpha-invariant (NotInvariant otherwise).
State pullback_state(const SystemPtr& sys, const State& rho,
                     const Tolerances& tol = {});

/// max over random x and all t of |rho'(x t) - rho'(t x)|.
CheckResult check_trace_property(const SystemPtr& sys, const State& rho_prime,
                                 int trials, std::uint64_t seed,
                                 const Tolerances& tol = {});

/// A positive-definite function on G extracted from a u.c.p. approximant:
/// omega(s) = rho'(Phi(s) s^-1).
struct PdFunction {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<Cplx> values;
  double gram_min_eigenvalue = 0.0;
  /// max_s of |omega(s) - 1| - ||Phi(s) - s||; <= 0 when the proof's bound holds.
  double unit_deviation_slack = 0.0;
};

/// Phi must verify as u.c.p. (NotUCP otherwise) and map into the represented
/// crossed product; rho must be alpha-invariant.
PdFunction extract_pd_function(const SystemPtr& sys, const LinearMap& phi,
                               const State& rho, const Tolerances& tol = {});

/// Witness transformations along the independence lemma: restriction to an
/// invariant sub-(co)module spanned by part of the coefficient basis, or
/// composition with c.c.p. module G-maps sigma, tau.
struct WitnessTransformResult {
  CheckResult comparison;  // transformed max error vs original + tol
  double original_error = 0.0;
  double transformed_error = 0.0;
};

WitnessTransformResult witness_restrict(const FactorizationWitness& w,
                                        const std::vector<int>& sub_basis,
                                        NuclearityMode mode,
                                        const Tolerances& tol = {});

WitnessTransformResult witness_compose(const FactorizationWitness& w,
                                       const LinearMap& sigma,
                                       const LinearMap& tau,
                                       const Tolerances& tol = {});

struct CbapBoundReport {
  double m1 = 0.0;  // max cb norm over the compression side
  double m2 = 0.0;  // max cb norm over the averaging side
  double inner = 0.0;
  std::vector<CheckResult> checks;
  bool pass = false;
};

/// The Lambda-calculus checks at finite dimension: cb norms of the witness
/// families (exact, all maps c.p.; NotCP when a map fails verification), the
/// composition bound cb(psi . Phi . phi) <= m1 m2 M, and the expectation
/// contraction cb(E . Phi) <= cb(Phi) over random u.c.p. maps.
CbapBoundReport cbap_bound_check(const SystemPtr& sys,
                                 const std::vector<LinearMap>& phis,
                                 const std::vector<LinearMap>& psis,
                                 const LinearMap& inner, int ucp_trials,
                                 std::uint64_t seed, const Tolerances& tol = {});

/// Random u.c.p. self-map of the represented crossed product: a Kraus family
/// drawn from the algebra, normalized through S^{-1/2} (functional calculus
/// stays inside the algebra).
LinearMap random_ucp_map(const SystemPtr& sys, int kraus_terms, Rng& rng,
                         const Tolerances& tol = {});

/// The conditional expectation as a checkable map (crossed -> A) with its
/// module structures attached.
LinearMap expectation_map(const SystemPtr& sys);
/// E followed by the inclusion A -> crossed (a u.c.p. self-map).
LinearMap expectation_into_crossed(const SystemPtr& sys);

/// The averaging family {psi_{rF}} of the witness, optionally composed with
/// the translated field compressions {theta_{rF}}.
WindowFamily averaging_family(const FactorizationWitness& w, bool with_compression,
                              bool cofamily = false);

/// Standard name -> object bindings for certificate fixtures built on a
/// witness: expectation, identity, transpose, the witness maps, the averaging
/// (co)families, basis elements, and functionals (the state and seeded random
/// functionals on C*_r(G)).
CertificateBindings certificate_bindings(const FactorizationWitness& w,
                                         const State* rho,
                                         const Tolerances& tol = {});

}  // namespace xprod
