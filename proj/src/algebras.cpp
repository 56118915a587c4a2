#include "xprod/algebras.hpp"

#include <cmath>

namespace xprod {

namespace {

Matrix stack_basis(const std::vector<Matrix>& basis) {
  const Eigen::Index sz = basis.front().size();
  Matrix stacked(sz, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != sz || basis[i].rows() != basis[i].cols())
      throw InvalidInput("basis matrices must be square of equal dimension");
    stacked.col(static_cast<Eigen::Index>(i)) = vec(basis[i]);
  }
  return stacked;
}

}  // namespace

StarAlgebra::StarAlgebra(std::vector<Matrix> basis, const Tolerances& tol,
                         bool validate_closure)
    : basis_(std::move(basis)) {
  if (basis_.empty()) throw InvalidInput("algebra needs a nonempty basis");
  ambient_dim_ = static_cast<int>(basis_.front().rows());
  stacked_ = stack_basis(basis_);
  solver_.compute(stacked_);
  if (solver_.rank() != static_cast<Eigen::Index>(basis_.size()))
    throw InvalidInput("algebra basis is linearly dependent");

  double unit_residual = 0.0;
  unit_coeffs_ = coefficients_of(Matrix::Identity(ambient_dim_, ambient_dim_),
                                 &unit_residual);
  if (unit_residual > tol.identity_tol * std::sqrt(double(ambient_dim_)))
    throw NotUnital("ambient identity is not in the span of the basis");

  if (validate_closure) {
    const double scale = tol.identity_tol;
    for (const auto& b : basis_) {
      double r = 0.0;
      coefficients_of(b.adjoint(), &r);
      if (r > scale * (1.0 + frobenius_norm(b)))
        throw InvalidInput("basis is not closed under adjoints");
    }
    for (const auto& x : basis_)
      for (const auto& y : basis_) {
        double r = 0.0;
        Matrix p = x * y;
        coefficients_of(p, &r);
        if (r > scale * (1.0 + frobenius_norm(p)))
          throw InvalidInput("basis is not closed under products");
      }
  }
}

std::shared_ptr<const StarAlgebra> StarAlgebra::create(std::vector<Matrix> basis,
                                                       const Tolerances& tol,
                                                       bool validate_closure) {
  return std::shared_ptr<const StarAlgebra>(
      new StarAlgebra(std::move(basis), tol, validate_closure));
}

std::shared_ptr<const StarAlgebra> StarAlgebra::full_matrix(int d,
                                                            const Tolerances& tol) {
  if (d <= 0) throw InvalidInput("full_matrix: dimension must be positive");
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return create(std::move(basis), tol, false);
}

std::shared_ptr<const StarAlgebra> StarAlgebra::diagonal(int d,
                                                         const Tolerances& tol) {
  if (d <= 0) throw InvalidInput("diagonal: dimension must be positive");
  std::vector<Matrix> basis;
  basis.reserve(d);
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  return create(std::move(basis), tol, false);
}

std::shared_ptr<const StarAlgebra> StarAlgebra::span_closure(
    std::vector<Matrix> generators, const Tolerances& tol) {
  if (generators.empty()) throw InvalidInput("span_closure: no generators");
  const int d = static_cast<int>(generators.front().rows());
  const double keep = 1e-10;

  // Orthonormal spanning set (Gram-Schmidt on vectorizations), grown by
  // adjoints and pairwise products until stable.
  std::vector<Matrix> ortho;
  auto try_add = [&](const Matrix& cand) {
    Vector v = vec(cand);
    for (const auto& b : ortho) v -= vec(b).dot(v) * vec(b);
    double n = v.norm();
    if (n > keep * (1.0 + frobenius_norm(cand))) {
      ortho.push_back(Eigen::Map<const Matrix>(v.data(), d, d) / n);
      return true;
    }
    return false;
  };

  for (const auto& gen : generators) {
    if (gen.rows() != d || gen.cols() != d)
      throw InvalidInput("span generators must be square of equal dimension");
    try_add(gen);
    try_add(gen.adjoint());
  }
  for (int round = 0; round < 12; ++round) {
    bool grew = false;
    const std::size_t snapshot = ortho.size();
    for (std::size_t i = 0; i < snapshot; ++i) {
      grew |= try_add(ortho[i].adjoint());
      for (std::size_t j = 0; j < snapshot; ++j)
        grew |= try_add(ortho[i] * ortho[j]);
    }
    if (static_cast<int>(ortho.size()) > d * d)
      throw InternalError("span closure exceeded the ambient dimension");
    if (!grew) break;
  }
  return create(std::move(ortho), tol, true);
}

Vector StarAlgebra::coefficients_of(const Matrix& x, double* residual) const {
  if (x.rows() != ambient_dim_ || x.cols() != ambient_dim_)
    throw InvalidInput("element has wrong ambient dimension");
  Vector target = vec(x);
  Vector coeffs = solver_.solve(target);
  if (residual) *residual = (stacked_ * coeffs - target).norm();
  return coeffs;
}

bool StarAlgebra::contains(const Matrix& x, double tol) const {
  double r = 0.0;
  coefficients_of(x, &r);
  return r <= tol * (1.0 + frobenius_norm(x));
}

Matrix StarAlgebra::from_coefficients(const Vector& coeffs) const {
  if (coeffs.size() != dim())
    throw InvalidInput("coefficient vector has wrong length");
  Vector v = stacked_ * coeffs;
  return Eigen::Map<const Matrix>(v.data(), ambient_dim_, ambient_dim_);
}

AlgebraElement StarAlgebra::element(const Matrix& x, const Tolerances& tol) const {
  double r = 0.0;
  Vector coeffs = coefficients_of(x, &r);
  if (r > tol.identity_tol * (1.0 + frobenius_norm(x)))
    throw InvalidInput("matrix does not lie in the algebra span");
  return AlgebraElement(shared_from_this(), std::move(coeffs), x);
}

AlgebraElement StarAlgebra::element_from_coefficients(const Vector& coeffs) const {
  return AlgebraElement(shared_from_this(), coeffs, from_coefficients(coeffs));
}

AlgebraElement StarAlgebra::unit() const {
  return element_from_coefficients(unit_coeffs_);
}

AlgebraElement StarAlgebra::zero() const {
  return element_from_coefficients(Vector::Zero(dim()));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  return AlgebraElement(algebra_, coeffs_ + o.coeffs_, matrix_ + o.matrix_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  return AlgebraElement(algebra_, coeffs_ - o.coeffs_, matrix_ - o.matrix_);
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  Matrix prod = matrix_ * o.matrix_;
  return AlgebraElement(algebra_, algebra_->coefficients_of(prod), std::move(prod));
}

AlgebraElement AlgebraElement::scaled(Cplx factor) const {
  return AlgebraElement(algebra_, factor * coeffs_, factor * matrix_);
}

AlgebraElement AlgebraElement::adjoint() const {
  Matrix adj = matrix_.adjoint();
  return AlgebraElement(algebra_, algebra_->coefficients_of(adj), std::move(adj));
}

AlgebraPtr center(const StarAlgebra& a, const Tolerances& tol) {
  const int m = a.dim();
  const int d = a.ambient_dim();
  // x = sum c_j b_j is central iff sum_j c_j (b_j b_i - b_i b_j) = 0 for all i.
  Matrix normal = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    Matrix k(d * d, m);
    for (int j = 0; j < m; ++j)
      k.col(j) = vec(Matrix(a.basis_element(j) * a.basis_element(i) -
                            a.basis_element(i) * a.basis_element(j)));
    normal += k.adjoint() * k;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(normal);
  std::vector<Matrix> basis;
  for (int j = 0; j < m; ++j)
    if (es.eigenvalues()(j) <= tol.identity_tol) {
      Vector coeffs = es.eigenvectors().col(j);
      basis.push_back(a.from_coefficients(coeffs));
    }
  if (basis.empty()) throw InternalError("center computation found no unit");
  return StarAlgebra::create(std::move(basis), tol, false);
}

CheckResult is_positive(const AlgebraElement& a, const Tolerances& tol) {
  const Matrix& m = a.matrix();
  double dev = spectral_norm(Matrix(m - m.adjoint()));
  if (dev > tol.identity_tol * (1.0 + spectral_norm(m)))
    return CheckResult::failed("is-positive", -dev, tol.psd_tol,
                               CheckResult::Kind::MinEigenvalue,
                               "element is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (m + m.adjoint())),
                                           Eigen::EigenvaluesOnly);
  return CheckResult::min_eigenvalue("is-positive", es.eigenvalues()(0),
                                     tol.psd_tol);
}

GroupAction GroupAction::trivial(std::shared_ptr<const FiniteGroup> g, AlgebraPtr a) {
  std::vector<Matrix> maps(g->order(), Matrix::Identity(a->dim(), a->dim()));
  return GroupAction(std::move(g), std::move(a), std::move(maps));
}

std::vector<Matrix> GroupAction::complete_from_generators(
    const FiniteGroup& g, int dim, const std::map<int, Matrix>& generators,
    const Tolerances& tol) {
  const int n = g.order();
  std::vector<Matrix> maps(n);
  std::vector<bool> have(n, false);
  maps[g.identity()] = Matrix::Identity(dim, dim);
  have[g.identity()] = true;
  for (const auto& [s, m] : generators) {
    if (s < 0 || s >= n) throw InvalidAction("generator index out of range");
    if (have[s] && frobenius_norm(Matrix(maps[s] - m)) > tol.identity_tol)
      throw InvalidAction("conflicting assignment for a generator");
    maps[s] = m;
    have[s] = true;
  }
  // Grow products until every element is reached.
  bool progress = true;
  while (progress) {
    progress = false;
    for (int x = 0; x < n; ++x) {
      if (!have[x]) continue;
      for (const auto& [s, m] : generators) {
        int y = g.mul(x, s);
        Matrix cand = maps[x] * m;
        if (!have[y]) {
          maps[y] = cand;
          have[y] = true;
          progress = true;
        } else if (frobenius_norm(Matrix(maps[y] - cand)) >
                   tol.identity_tol * (1.0 + frobenius_norm(cand))) {
          throw InvalidAction("generator assignments are inconsistent");
        }
      }
    }
  }
  for (bool h : have)
    if (!h) throw InvalidAction("given elements do not generate the group");
  return maps;
}

GroupAction GroupAction::coordinate_permutation(
    std::shared_ptr<const FiniteGroup> g, AlgebraPtr a,
    const std::map<int, std::vector<int>>& assignments, const Tolerances& tol) {
  const int d = a->dim();
  if (a->ambient_dim() != d)
    throw InvalidAction("coordinate permutations need a diagonal algebra");
  std::map<int, Matrix> gens;
  for (const auto& [s, perm] : assignments) {
    if (static_cast<int>(perm.size()) != d)
      throw InvalidAction("permutation has wrong length");
    Matrix m = Matrix::Zero(d, d);
    std::vector<bool> seen(d, false);
    for (int i = 0; i < d; ++i) {
      if (perm[i] < 0 || perm[i] >= d || seen[perm[i]])
        throw InvalidAction("not a permutation of the coordinates");
      seen[perm[i]] = true;
      m(perm[i], i) = 1.0;
    }
    gens[s] = m;
  }
  auto maps = complete_from_generators(*g, d, gens, tol);
  GroupAction action(std::move(g), std::move(a), std::move(maps));
  action.validate(tol);
  return action;
}

GroupAction GroupAction::translation(std::shared_ptr<const FiniteGroup> g,
                                     AlgebraPtr a, const Tolerances& tol) {
  const int n = g->order();
  if (a->dim() != n || a->ambient_dim() != n)
    throw InvalidAction("translation action needs diagonal(|G|)");
  std::vector<Matrix> maps(n);
  for (int s = 0; s < n; ++s) maps[s] = regular_unitary(*g, s);
  GroupAction action(std::move(g), std::move(a), std::move(maps));
  action.validate(tol);
  return action;
}

GroupAction GroupAction::unitary_conjugation(
    std::shared_ptr<const FiniteGroup> g, AlgebraPtr a,
    const std::map<int, Matrix>& assignments, const Tolerances& tol) {
  const int d = a->ambient_dim();
  std::map<int, Matrix> gens;
  for (const auto& [s, u] : assignments) {
    if (u.rows() != d || u.cols() != d)
      throw InvalidAction("conjugating unitary has wrong dimension");
    if (spectral_norm(Matrix(u.adjoint() * u - Matrix::Identity(d, d))) >
        tol.identity_tol)
      throw InvalidAction("conjugator is not unitary");
    // Coefficient map of x -> u x u* over the basis.
    Matrix coeff(a->dim(), a->dim());
    for (int j = 0; j < a->dim(); ++j) {
      Matrix img = u * a->basis_element(j) * u.adjoint();
      double r = 0.0;
      coeff.col(j) = a->coefficients_of(img, &r);
      if (r > tol.identity_tol * (1.0 + frobenius_norm(img)))
        throw InvalidAction("conjugation does not preserve the algebra");
    }
    gens[s] = coeff;
  }
  auto maps = complete_from_generators(*g, a->dim(), gens, tol);
  GroupAction action(std::move(g), std::move(a), std::move(maps));
  action.validate(tol);
  return action;
}

GroupAction GroupAction::from_coefficient_maps(std::shared_ptr<const FiniteGroup> g,
                                               AlgebraPtr a,
                                               std::vector<Matrix> maps,
                                               const Tolerances& tol,
                                               bool validate) {
  GroupAction action(std::move(g), std::move(a), std::move(maps));
  if (validate) action.validate(tol);
  return action;
}

void GroupAction::validate(const Tolerances& tol) const {
  const auto& g = *group_;
  const auto& a = *algebra_;
  if (static_cast<int>(maps_.size()) != g.order())
    throw InvalidAction("one coefficient map per group element required");
  const double eps = tol.identity_tol;
  auto close = [&](const Matrix& x, const Matrix& y) {
    return frobenius_norm(Matrix(x - y)) <= eps * (1.0 + frobenius_norm(y));
  };
  if (!close(maps_[g.identity()], Matrix::Identity(a.dim(), a.dim())))
    throw InvalidAction("identity element must act as the identity");
  for (int s = 0; s < g.order(); ++s)
    for (int t = 0; t < g.order(); ++t)
      if (!close(maps_[s] * maps_[t], maps_[g.mul(s, t)]))
        throw InvalidAction("coefficient maps are not a group homomorphism");
  for (int s = 0; s < g.order(); ++s) {
    // Unit preservation, multiplicativity and *-compatibility on the basis.
    if (!close(a.from_coefficients(maps_[s] * a.unit_coefficients()),
               Matrix::Identity(a.ambient_dim(), a.ambient_dim())))
      throw InvalidAction("action does not fix the unit");
    for (int i = 0; i < a.dim(); ++i) {
      Matrix ai = apply_matrix(s, a.basis_element(i));
      if (!close(apply_matrix(s, a.basis_element(i).adjoint()), ai.adjoint()))
        throw InvalidAction("action is not *-preserving");
      for (int j = 0; j < a.dim(); ++j) {
        Matrix prod = a.basis_element(i) * a.basis_element(j);
        if (!close(apply_matrix(s, prod), ai * apply_matrix(s, a.basis_element(j))))
          throw InvalidAction("action is not multiplicative");
      }
    }
  }
}

Vector GroupAction::apply_coefficients(int s, const Vector& coeffs) const {
  return maps_.at(s) * coeffs;
}

Matrix GroupAction::apply_matrix(int s, const Matrix& x) const {
  return algebra_->from_coefficients(maps_.at(s) * algebra_->coefficients_of(x));
}

AlgebraElement GroupAction::apply(int s, const AlgebraElement& x) const {
  return algebra_->element_from_coefficients(maps_.at(s) * x.coefficients());
}

GroupAction GroupAction::tensor_identity(AlgebraPtr tensor_algebra,
                                         int factor_dim) const {
  std::vector<Matrix> maps;
  maps.reserve(maps_.size());
  for (const auto& m : maps_)
    maps.push_back(kron(m, Matrix::Identity(factor_dim, factor_dim)));
  return GroupAction(group_, std::move(tensor_algebra), std::move(maps));
}

State State::from_values(AlgebraPtr a, RowVector values, const Tolerances& tol) {
  if (values.size() != a->dim())
    throw InvalidInput("state needs one value per basis element");
  State rho(std::move(a), std::move(values));
  const auto& alg = *rho.algebra();
  Cplx at_unit = (rho.values_ * alg.unit_coefficients())(0);
  if (std::abs(at_unit - Cplx(1.0)) > tol.identity_tol)
    throw InvalidInput("state must take value 1 at the unit");
  Matrix gram(alg.dim(), alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = 0; j < alg.dim(); ++j)
      gram(i, j) = rho.value_of_matrix(alg.basis_element(i).adjoint() *
                                       alg.basis_element(j));
  if (min_hermitian_eigenvalue(gram, tol) < -tol.psd_tol)
    throw InvalidInput("state Gram matrix is not positive semidefinite");
  return rho;
}

State State::normalized_trace(AlgebraPtr a, const Tolerances& tol) {
  RowVector values(a->dim());
  for (int i = 0; i < a->dim(); ++i)
    values(i) = a->basis_element(i).trace() / double(a->ambient_dim());
  return from_values(std::move(a), std::move(values), tol);
}

Cplx State::value_of_matrix(const Matrix& x) const {
  return (values_ * algebra_->coefficients_of(x))(0);
}

CheckResult check_invariant_state(const State& rho, const GroupAction& action,
                                  const Tolerances& tol) {
  double worst = 0.0;
  const auto& a = *rho.algebra();
  for (int s = 0; s < action.group()->order(); ++s)
    for (int i = 0; i < a.dim(); ++i) {
      Cplx moved = (rho.values() * action.coefficient_map(s).col(i))(0);
      worst = std::max(worst, std::abs(moved - rho.values()(i)));
    }
  return CheckResult::residual("state-invariance", worst, tol.identity_tol);
}

}  // namespace xprod
