#pragma once

#include "xprod/algebras.hpp"

namespace xprod {

class CrossedSystem;
using SystemPtr = std::shared_ptr<const CrossedSystem>;

/// An element of the reduced crossed product, stored as its coefficient
/// function s -> a_s. Products, adjoints and module/group actions are exact
/// on coefficients; the concrete matrix is derived on demand.
class CrossedElement {
 public:
  CrossedElement(SystemPtr sys, std::vector<AlgebraElement> coeffs);

  const SystemPtr& system() const { return sys_; }
  const AlgebraElement& coefficient(int s) const { return coeffs_.at(s); }
  const std::vector<AlgebraElement>& coefficients() const { return coeffs_; }

  CrossedElement operator+(const CrossedElement& o) const;
  CrossedElement operator-(const CrossedElement& o) const;
  /// Twisted convolution (sum a_s s)(sum b_t t) = sum_u [sum_s a_s alpha_s(b_{s^-1 u})] u.
  CrossedElement operator*(const CrossedElement& o) const;
  CrossedElement scaled(Cplx factor) const;
  /// (a s)* = alpha_{s^-1}(a*) s^-1.
  CrossedElement adjoint() const;
  /// Reduced norm: spectral norm of the regular representation.
  double norm() const;

 private:
  SystemPtr sys_;
  std::vector<AlgebraElement> coeffs_;
};

/// An element of A (x) B(l^2(W)) for a finite tuple window W, stored as the
/// |W| x |W| array of its A-valued entries. The concrete matrix convention is
/// sum kron(m_{s,t}, e_{s,t}) (algebra leg major, window leg minor). Entries
/// live in the attached entry algebra, which carries its own G-action; for
/// plain windows this is (A, alpha), for coaction targets (A (x) C*_r(G),
/// alpha (x) id).
class WindowedMatrix {
 public:
  WindowedMatrix(SystemPtr sys, AlgebraPtr entry_algebra, GroupAction entry_action,
                 Window window, std::vector<Matrix> entries);

  static WindowedMatrix zero(SystemPtr sys, Window window);
  /// a (x) e_{s,t} for an entry a of A.
  static WindowedMatrix matrix_unit(SystemPtr sys, Window window, int s, int t,
                                    const Matrix& a);

  const SystemPtr& system() const { return sys_; }
  const Window& window() const { return window_; }
  const AlgebraPtr& entry_algebra() const { return entry_algebra_; }
  const GroupAction& entry_action() const { return entry_action_; }
  const Matrix& entry(int s, int t) const { return entries_[idx(s, t)]; }
  Matrix& entry(int s, int t) { return entries_[idx(s, t)]; }
  int entry_dim() const { return static_cast<int>(entry_algebra_->ambient_dim()); }

  Matrix concrete() const;
  WindowedMatrix operator+(const WindowedMatrix& o) const;
  WindowedMatrix operator-(const WindowedMatrix& o) const;
  WindowedMatrix operator*(const WindowedMatrix& o) const;
  WindowedMatrix scaled(Cplx factor) const;
  WindowedMatrix adjoint() const;
  double frobenius() const;

  /// Compression to a sub-window (rows/cols restricted to F, which must be
  /// contained in this window).
  WindowedMatrix compressed_to(const Window& f) const;

 private:
  int idx(int s, int t) const { return s * window_.size() + t; }
  SystemPtr sys_;
  AlgebraPtr entry_algebra_;
  GroupAction entry_action_;
  Window window_;
  std::vector<Matrix> entries_;
};

/// The C*-dynamical system (A, G, alpha) with its regular representation on
/// H (x) l^2(G). Built once, immutable, shared.
class CrossedSystem : public std::enable_shared_from_this<CrossedSystem> {
 public:
  /// Validates covariance of the cached representation data; throws
  /// InternalError if an invalid action slipped through.
  static SystemPtr build(AlgebraPtr a, std::shared_ptr<const FiniteGroup> g,
                         GroupAction action, const Tolerances& tol = {});

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::shared_ptr<const FiniteGroup>& group() const { return group_; }
  const GroupAction& action() const { return action_; }
  const Tolerances& tolerances() const { return tol_; }
  int rep_dim() const { return algebra_->ambient_dim() * group_->order(); }

  /// The faithful regular representation sum a_s s ->
  /// sum_{s,t} alpha_{t^-1}(a_s) (x) e_{t, s^-1 t}.
  Matrix represent(const CrossedElement& x) const;
  /// Image of the embedded algebra element a * e (equals pi(a)).
  Matrix represent_algebra(const Matrix& a) const;
  /// Image of the canonical unitary for s (equals 1 (x) lambda_s).
  Matrix represent_group(int s) const;

  /// The represented crossed product as a concrete StarAlgebra; basis order
  /// is (algebra index major, group index minor).
  const AlgebraPtr& represented_algebra() const { return represented_; }
  /// Coefficient function of a concrete matrix in the represented algebra.
  CrossedElement from_matrix(const Matrix& x) const;
  CrossedElement from_represented_coefficients(const Vector& coeffs) const;

  CrossedElement zero_element() const;
  CrossedElement unit_element() const;
  /// The embedded a * e.
  CrossedElement embed_algebra(const AlgebraElement& a) const;
  /// The canonical unitary 1 * s.
  CrossedElement embed_group(int s) const;
  CrossedElement element(std::vector<AlgebraElement> coeffs) const;

  /// A (x) C*_r(G) with basis kron(b_i, lambda_s), plus the lifted action
  /// alpha (x) id; entry system for coaction targets.
  const AlgebraPtr& tensor_group_algebra() const { return tensor_algebra_; }
  const GroupAction& tensor_action() const { return *tensor_action_; }
  /// C*_r(G) itself (basis {lambda_s} inside M_{|G|}).
  const AlgebraPtr& group_algebra() const { return group_algebra_; }

  /// M_W(A) as a concrete StarAlgebra with basis kron(b_i, e_{s,t}),
  /// index (i, s, t) with i major.
  AlgebraPtr window_algebra(const Window& w) const;

  WindowedMatrix zero_window(const Window& w) const;

 private:
  CrossedSystem(AlgebraPtr a, std::shared_ptr<const FiniteGroup> g,
                GroupAction action, const Tolerances& tol);

  AlgebraPtr algebra_;
  std::shared_ptr<const FiniteGroup> group_;
  GroupAction action_;
  Tolerances tol_;
  std::vector<Matrix> lambda_;  // regular unitaries
  AlgebraPtr represented_;
  AlgebraPtr group_algebra_;
  AlgebraPtr tensor_algebra_;
  std::shared_ptr<GroupAction> tensor_action_;
};

/// Conditional expectation onto A: reads off the coefficient at the identity.
AlgebraElement expectation(const CrossedElement& x);

/// Right module action (x . b)_s = x_s alpha_s(b).
CrossedElement module_act(const CrossedElement& x, const AlgebraElement& b);

/// Right module action on a window: m_{s,t} -> m_{s,t} beta_{bar(t)^-1}(b)
/// where beta is the entry action. Agrees with right multiplication by the
/// windowed pi(b).
WindowedMatrix module_act_window(const WindowedMatrix& m, const Matrix& b);

/// The windowed pi(b) = sum_t beta_{bar(t)^-1}(b) (x) e_{t,t}.
Matrix window_module_embed(const CrossedSystem& sys, const Window& w,
                           const Matrix& b_entry, const GroupAction& entry_action);

/// G-action r.(a s) = alpha_r(a) r s r^-1.
CrossedElement group_act(int r, const CrossedElement& x);

/// G-action within one window: e_{s,t} -> e_{rs,rt}; requires the window to
/// be closed under translation by r (WindowNotClosed otherwise).
WindowedMatrix group_act_window(int r, const WindowedMatrix& m);

/// Family translation M_F -> M_{rF}: same entry array over the translated
/// window. No closure required.
WindowedMatrix translate_window_matrix(int r, const WindowedMatrix& m);

/// Both compatibility identities r.(x.b) = (r.x).alpha_r(b) over `trials`
/// random draws; the witness is the largest residual.
CheckResult check_compatibility(const CrossedSystem& sys, const Window& w,
                                int trials, std::uint64_t seed,
                                const Tolerances& tol = {});

WindowedMatrix random_window_matrix(const SystemPtr& sys, const Window& w, Rng& rng);
CrossedElement random_crossed_element(const SystemPtr& sys, Rng& rng);

/// Reads the A-valued entries back out of a concrete element of
/// A (x) B(l^2(W)) (algebra leg major).
WindowedMatrix window_matrix_from_concrete(const SystemPtr& sys, const Window& w,
                                           const Matrix& x);

}  // namespace xprod
