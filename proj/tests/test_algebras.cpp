#include <doctest.h>

#include "xprod/algebras.hpp"

using namespace xprod;

namespace {

Matrix swap2() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

}  // namespace

TEST_SUITE("algebras") {

TEST_CASE("diagonal and full matrix algebras have the expected dimensions") {
  CHECK(StarAlgebra::diagonal(2)->dim() == 2);
  CHECK(StarAlgebra::full_matrix(2)->dim() == 4);
}

TEST_CASE("span closure of the swap matrix is {I, swap}") {
  auto a = StarAlgebra::span_closure({swap2()});
  CHECK(a->dim() == 2);
  CHECK(a->contains(Matrix::Identity(2, 2), 1e-10));
  CHECK(a->contains(swap2(), 1e-10));
}

TEST_CASE("a span without the unit is rejected") {
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  CHECK_THROWS_AS(StarAlgebra::span_closure({e11}), NotUnital);
}

TEST_CASE("center of a full matrix algebra is the scalars") {
  CHECK(center(*StarAlgebra::full_matrix(2))->dim() == 1);
}

TEST_CASE("a diagonal algebra is its own center") {
  CHECK(center(*StarAlgebra::diagonal(3))->dim() == 3);
}

TEST_CASE("center of M2 + M1 inside M3 has dimension 2") {
  std::vector<Matrix> gens;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(3, 3);
      e(i, j) = 1.0;
      gens.push_back(e);
    }
  Matrix e22 = Matrix::Zero(3, 3);
  e22(2, 2) = 1.0;
  gens.push_back(e22);
  auto a = StarAlgebra::span_closure(gens);
  CHECK(a->dim() == 5);
  CHECK(center(*a)->dim() == 2);
}

TEST_CASE("center elements commute with random algebra elements") {
  auto a = StarAlgebra::full_matrix(3);
  auto z = center(*a);
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    Matrix x = a->from_coefficients(random_vector(a->dim(), rng));
    for (int i = 0; i < z->dim(); ++i) {
      const Matrix& c = z->basis_element(i);
      CHECK(frobenius_norm(Matrix(c * x - x * c)) <=
            1e-9 * (1.0 + frobenius_norm(x)));
    }
  }
}

TEST_CASE("positivity checks report the witness eigenvalue") {
  auto a = StarAlgebra::diagonal(2);
  Matrix pos = Matrix::Zero(2, 2);
  pos(0, 0) = 1.0;
  pos(1, 1) = 2.0;
  CHECK(is_positive(a->element(pos)).pass);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -0.5;
  CheckResult r = is_positive(a->element(neg));
  CHECK_FALSE(r.pass);
  CHECK(r.witness == doctest::Approx(-0.5));
}

TEST_CASE("b*b is positive for random b") {
  auto a = StarAlgebra::full_matrix(2);
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    AlgebraElement b = a->element_from_coefficients(random_vector(a->dim(), rng));
    CHECK(is_positive(b.adjoint() * b).pass);
  }
}

TEST_CASE("coordinate swap action on diagonal(2)") {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::diagonal(2);
  auto action = GroupAction::coordinate_permutation(g, a, {{1, {1, 0}}});
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  Matrix moved = action.apply_matrix(1, d);
  CHECK(std::abs(moved(0, 0) - Cplx(2.0)) <= 1e-14);
  CHECK(std::abs(moved(1, 1) - Cplx(1.0)) <= 1e-14);
}

TEST_CASE("trivial actions validate on any algebra") {
  auto g = FiniteGroup::symmetric(3);
  auto a = StarAlgebra::full_matrix(2);
  auto action = GroupAction::trivial(g, a);
  CHECK(frobenius_norm(Matrix(action.coefficient_map(3) -
                              Matrix::Identity(4, 4))) == 0.0);
}

TEST_CASE("a non-unitary conjugator is rejected") {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::full_matrix(2);
  Matrix bad = Matrix::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(GroupAction::unitary_conjugation(g, a, {{1, bad}}),
                  InvalidAction);
}

TEST_CASE("an inconsistent permutation assignment is rejected") {
  auto g = FiniteGroup::cyclic(3);
  auto a = StarAlgebra::diagonal(3);
  // A transposition has order 2, not 3.
  CHECK_THROWS_AS(
      GroupAction::coordinate_permutation(g, a, {{1, {1, 0, 2}}}),
      InvalidAction);
}

TEST_CASE("automorphisms preserve positivity") {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::full_matrix(2);
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = -1.0;
  auto action = GroupAction::unitary_conjugation(g, a, {{1, u}});
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    AlgebraElement b = a->element_from_coefficients(random_vector(a->dim(), rng));
    AlgebraElement p = b.adjoint() * b;
    CHECK(is_positive(action.apply(1, p)).pass);
  }
}

TEST_CASE("the uniform state is swap-invariant, a coordinate state is not") {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::diagonal(2);
  auto action = GroupAction::coordinate_permutation(g, a, {{1, {1, 0}}});
  State uniform = State::normalized_trace(a);
  CHECK(check_invariant_state(uniform, action).pass);
  RowVector first(2);
  first << 1.0, 0.0;
  State coordinate = State::from_values(a, first);
  CHECK_FALSE(check_invariant_state(coordinate, action).pass);
}

TEST_CASE("the trace is invariant under unitary conjugation actions") {
  auto g = FiniteGroup::cyclic(4);
  auto a = StarAlgebra::full_matrix(2);
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = Cplx(0.0, 1.0);
  u(1, 1) = 1.0;
  auto action = GroupAction::unitary_conjugation(g, a, {{1, u}});
  CHECK(check_invariant_state(State::normalized_trace(a), action).pass);
}

TEST_CASE("states satisfy Cauchy-Schwarz") {
  auto a = StarAlgebra::full_matrix(2);
  State tr = State::normalized_trace(a);
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    AlgebraElement x = a->element_from_coefficients(random_vector(a->dim(), rng));
    AlgebraElement y = a->element_from_coefficients(random_vector(a->dim(), rng));
    double lhs = std::norm(tr.value(y.adjoint() * x));
    double rhs = std::real(tr.value(x.adjoint() * x)) *
                 std::real(tr.value(y.adjoint() * y));
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("a positive functional failing normalization is rejected") {
  auto a = StarAlgebra::diagonal(2);
  RowVector values(2);
  values << 2.0, 1.0;
  CHECK_THROWS_AS(State::from_values(a, values), InvalidInput);
}

}  // TEST_SUITE
