#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "xprod/groups.hpp"

namespace xprod {

class AlgebraElement;

/// A unital *-closed subspace of M_d given by a linearly independent basis.
/// Acts as the coefficient solver for everything built on top of it.
class StarAlgebra : public std::enable_shared_from_this<StarAlgebra> {
 public:
  /// Validates linear independence and (when `validate_closure`) closure of
  /// the basis under adjoints and products; always requires the ambient unit
  /// to lie in the span (NotUnital otherwise).
  static std::shared_ptr<const StarAlgebra> create(
      std::vector<Matrix> basis, const Tolerances& tol = {},
      bool validate_closure = true);

  static std::shared_ptr<const StarAlgebra> full_matrix(int d,
                                                        const Tolerances& tol = {});
  static std::shared_ptr<const StarAlgebra> diagonal(int d,
                                                     const Tolerances& tol = {});
  /// Completes the generators to a *-algebra by iterating products/adjoints
  /// until the dimension stabilizes (at most 12 rounds).
  static std::shared_ptr<const StarAlgebra> span_closure(
      std::vector<Matrix> generators, const Tolerances& tol = {});

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& basis_element(int i) const { return basis_.at(i); }
  const Vector& unit_coefficients() const { return unit_coeffs_; }

  /// Least-squares coefficients of x over the basis; optionally reports the
  /// out-of-span residual (Frobenius).
  Vector coefficients_of(const Matrix& x, double* residual = nullptr) const;
  bool contains(const Matrix& x, double tol) const;
  Matrix from_coefficients(const Vector& coeffs) const;

  AlgebraElement element(const Matrix& x, const Tolerances& tol = {}) const;
  AlgebraElement element_from_coefficients(const Vector& coeffs) const;
  AlgebraElement unit() const;
  AlgebraElement zero() const;

 private:
  StarAlgebra(std::vector<Matrix> basis, const Tolerances& tol,
              bool validate_closure);

  int ambient_dim_ = 0;
  std::vector<Matrix> basis_;
  Matrix stacked_;  // d^2 x m, columns vec(b_i)
  Eigen::CompleteOrthogonalDecomposition<Matrix> solver_;
  Vector unit_coeffs_;
};

using AlgebraPtr = std::shared_ptr<const StarAlgebra>;

/// An element of a StarAlgebra: coefficients over the basis plus the cached
/// concrete matrix.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, Vector coeffs, Matrix matrix)
      : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)),
        matrix_(std::move(matrix)) {}

  const AlgebraPtr& algebra() const { return algebra_; }
  const Vector& coefficients() const { return coeffs_; }
  const Matrix& matrix() const { return matrix_; }

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement scaled(Cplx factor) const;
  AlgebraElement adjoint() const;
  double norm() const { return spectral_norm(matrix_); }
  bool is_zero(double tol) const { return frobenius_norm(matrix_) <= tol; }

 private:
  AlgebraPtr algebra_;
  Vector coeffs_;
  Matrix matrix_;
};

/// The center Z(A) = {x in A : xb = bx for all b in A}, returned as a
/// StarAlgebra. Deterministic basis (SVD kernel of the joint commutation
/// system).
AlgebraPtr center(const StarAlgebra& a, const Tolerances& tol = {});

/// Positivity through the Hermitian spectrum; the witness is the smallest
/// eigenvalue.
CheckResult is_positive(const AlgebraElement& a, const Tolerances& tol = {});

/// An action of a finite group on a StarAlgebra by unital *-automorphisms,
/// stored as coefficient maps over the basis.
class GroupAction {
 public:
  static GroupAction trivial(std::shared_ptr<const FiniteGroup> g, AlgebraPtr a);
  /// Permutation of diagonal coordinates; `assignments` gives the permutation
  /// image for a generating set of elements (index -> permutation array).
  static GroupAction coordinate_permutation(
      std::shared_ptr<const FiniteGroup> g, AlgebraPtr a,
      const std::map<int, std::vector<int>>& assignments,
      const Tolerances& tol = {});
  /// Left-translation action on diagonal(|G|): alpha_s(e_uu) = e_{su,su}.
  static GroupAction translation(std::shared_ptr<const FiniteGroup> g,
                                 AlgebraPtr a, const Tolerances& tol = {});
  /// Conjugation by the given unitaries on a generating set.
  static GroupAction unitary_conjugation(std::shared_ptr<const FiniteGroup> g,
                                         AlgebraPtr a,
                                         const std::map<int, Matrix>& assignments,
                                         const Tolerances& tol = {});
  /// Raw coefficient maps, validated (used by tests and the tensor lift).
  static GroupAction from_coefficient_maps(std::shared_ptr<const FiniteGroup> g,
                                           AlgebraPtr a,
                                           std::vector<Matrix> maps,
                                           const Tolerances& tol = {},
                                           bool validate = true);

  const std::shared_ptr<const FiniteGroup>& group() const { return group_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  const Matrix& coefficient_map(int s) const { return maps_.at(s); }

  Vector apply_coefficients(int s, const Vector& coeffs) const;
  Matrix apply_matrix(int s, const Matrix& x) const;
  AlgebraElement apply(int s, const AlgebraElement& x) const;

  /// Tensor with the identity on a factor algebra: the action alpha (x) id on
  /// basis kron(b_i, c_j) of a tensor-product algebra.
  GroupAction tensor_identity(AlgebraPtr tensor_algebra, int factor_dim) const;

 private:
  GroupAction(std::shared_ptr<const FiniteGroup> g, AlgebraPtr a,
              std::vector<Matrix> maps)
      : group_(std::move(g)), algebra_(std::move(a)), maps_(std::move(maps)) {}
  void validate(const Tolerances& tol) const;
  static std::vector<Matrix> complete_from_generators(
      const FiniteGroup& g, int dim, const std::map<int, Matrix>& generators,
      const Tolerances& tol);

  std::shared_ptr<const FiniteGroup> group_;
  AlgebraPtr algebra_;
  std::vector<Matrix> maps_;  // per element, dim x dim coefficient matrices
};

/// A state: positive linear functional with rho(1) = 1, stored as values on
/// the basis. Positivity is certified by the PSD Gram matrix [rho(b_i* b_j)].
class State {
 public:
  static State from_values(AlgebraPtr a, RowVector values, const Tolerances& tol = {});
  static State normalized_trace(AlgebraPtr a, const Tolerances& tol = {});

  const AlgebraPtr& algebra() const { return algebra_; }
  Cplx value(const AlgebraElement& x) const { return (values_ * x.coefficients())(0); }
  Cplx value_of_matrix(const Matrix& x) const;
  const RowVector& values() const { return values_; }

 private:
  State(AlgebraPtr a, RowVector values) : algebra_(std::move(a)), values_(std::move(values)) {}
  AlgebraPtr algebra_;
  RowVector values_;
};

/// Max over group elements and basis of |rho(alpha_s(b)) - rho(b)|.
CheckResult check_invariant_state(const State& rho, const GroupAction& action,
                                  const Tolerances& tol = {});

}  // namespace xprod
