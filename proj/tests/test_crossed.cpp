#include <doctest.h>

#include "xprod/crossed.hpp"

using namespace xprod;

namespace {

SystemPtr z2_diagonal_swap() {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::diagonal(2);
  auto action = GroupAction::coordinate_permutation(g, a, {{1, {1, 0}}});
  return CrossedSystem::build(a, g, std::move(action));
}

}  // namespace

TEST_SUITE("crossed") {

TEST_CASE("represent(diag(1,2) e) is diag(1,2,2,1) in algebra-major order") {
  SystemPtr sys = z2_diagonal_swap();
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  Matrix rep = sys->represent(sys->embed_algebra(sys->algebra()->element(d)));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 2.0;
  expected(2, 2) = 2.0;
  expected(3, 3) = 1.0;
  CHECK(frobenius_norm(Matrix(rep - expected)) <= 1e-14);
}

TEST_CASE("the trivial group gives the inclusion") {
  auto g = FiniteGroup::cyclic(1);
  auto a = StarAlgebra::full_matrix(2);
  auto sys = CrossedSystem::build(a, g, GroupAction::trivial(g, a));
  Rng rng(2);
  Matrix x = a->from_coefficients(random_vector(a->dim(), rng));
  CHECK(frobenius_norm(Matrix(sys->represent(sys->embed_algebra(a->element(x))) -
                              x)) <= 1e-12);
}

TEST_CASE("represent(1 g) is I (x) swap") {
  SystemPtr sys = z2_diagonal_swap();
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(frobenius_norm(Matrix(sys->represent(sys->embed_group(1)) -
                              kron(Matrix::Identity(2, 2), swap))) <= 1e-14);
}

TEST_CASE("represent is a *-homomorphism on random pairs") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CrossedElement y = random_crossed_element(sys, rng);
    Matrix lhs = sys->represent(x * y);
    Matrix rhs = sys->represent(x) * sys->represent(y);
    CHECK(frobenius_norm(Matrix(lhs - rhs)) <= 1e-10 * (1.0 + frobenius_norm(rhs)));
    CHECK(frobenius_norm(Matrix(sys->represent(x.adjoint()) -
                                sys->represent(x).adjoint())) <= 1e-10);
  }
}

TEST_CASE("round trip through the represented algebra") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(77);
  CrossedElement x = random_crossed_element(sys, rng);
  CrossedElement back = sys->from_matrix(sys->represent(x));
  for (int s = 0; s < 2; ++s)
    CHECK(frobenius_norm(Matrix(back.coefficient(s).matrix() -
                                x.coefficient(s).matrix())) <= 1e-10);
}

TEST_CASE("expectation reads the identity coefficient") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Matrix ma = Matrix::Zero(2, 2);
  ma(0, 0) = 3.0;
  ma(1, 1) = 1.0;
  Matrix mb = Matrix::Zero(2, 2);
  mb(0, 0) = -1.0;
  mb(1, 1) = 4.0;
  CrossedElement x = sys->embed_algebra(a.element(ma)) +
                     module_act(sys->embed_group(1), a.element(mb));
  CHECK(frobenius_norm(Matrix(expectation(x).matrix() - ma)) <= 1e-13);
  CHECK(expectation(sys->embed_group(1)).is_zero(1e-14));
}

TEST_CASE("expectation is an A-bimodule map") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    AlgebraElement left = a.element_from_coefficients(random_vector(a.dim(), rng));
    AlgebraElement right = a.element_from_coefficients(random_vector(a.dim(), rng));
    CrossedElement axb = sys->embed_algebra(left) * x * sys->embed_algebra(right);
    CHECK(frobenius_norm(Matrix(expectation(axb).matrix() -
                                (left * expectation(x) * right).matrix())) <=
          1e-10);
  }
}

TEST_CASE("expectation is contractive and faithful on the basis") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CHECK(expectation(x).norm() <= x.norm() + 1e-10);
    double e_norm = expectation(x.adjoint() * x).norm();
    if (e_norm <= 1e-12) CHECK(x.norm() <= 1e-6);
  }
}

TEST_CASE("module action twists by the action: (diag(1,2) g) . diag(3,4)") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Matrix d12 = Matrix::Zero(2, 2);
  d12(0, 0) = 1.0;
  d12(1, 1) = 2.0;
  Matrix d34 = Matrix::Zero(2, 2);
  d34(0, 0) = 3.0;
  d34(1, 1) = 4.0;
  CrossedElement x = module_act(sys->embed_group(1), a.element(d12));
  // (a g) . b = a alpha_g(b) g = diag(1,2) diag(4,3) g = diag(4,6) g.
  CrossedElement moved = module_act(x, a.element(d34));
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 4.0;
  expected(1, 1) = 6.0;
  CHECK(frobenius_norm(Matrix(moved.coefficient(1).matrix() - expected)) <= 1e-13);
  CHECK(moved.coefficient(0).is_zero(1e-14));
}

TEST_CASE("module action by the unit is the identity and is associative") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CrossedElement same = module_act(x, a.unit());
    for (int s = 0; s < 2; ++s)
      CHECK(frobenius_norm(Matrix(same.coefficient(s).matrix() -
                                  x.coefficient(s).matrix())) == 0.0);
    AlgebraElement b = a.element_from_coefficients(random_vector(a.dim(), rng));
    AlgebraElement c = a.element_from_coefficients(random_vector(a.dim(), rng));
    CrossedElement lhs = module_act(module_act(x, b), c);
    CrossedElement rhs = module_act(x, b * c);
    for (int s = 0; s < 2; ++s)
      CHECK(frobenius_norm(Matrix(lhs.coefficient(s).matrix() -
                                  rhs.coefficient(s).matrix())) <= 1e-10);
  }
}

TEST_CASE("module action agrees with right multiplication in the representation") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    AlgebraElement b = a.element_from_coefficients(random_vector(a.dim(), rng));
    Matrix lhs = sys->represent(module_act(x, b));
    Matrix rhs = sys->represent(x) * sys->represent(sys->embed_algebra(b));
    CHECK(frobenius_norm(Matrix(lhs - rhs)) <= 1e-10);
  }
}

TEST_CASE("windowed module action follows the twisted formula") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Window w = Window::group_singletons(*sys->group());
  Rng rng(12);
  AlgebraElement av = a.element_from_coefficients(random_vector(a.dim(), rng));
  AlgebraElement b = a.element_from_coefficients(random_vector(a.dim(), rng));
  // (a (x) e_{g,g}) . b = a alpha_g(b) (x) e_{g,g}.
  WindowedMatrix unit = WindowedMatrix::matrix_unit(sys, w, 1, 1, av.matrix());
  WindowedMatrix moved = module_act_window(unit, b.matrix());
  Matrix expected = av.matrix() * sys->action().apply_matrix(1, b.matrix());
  CHECK(frobenius_norm(Matrix(moved.entry(1, 1) - expected)) <= 1e-12);
  // b = 1 acts as the identity.
  WindowedMatrix same = module_act_window(unit, Matrix::Identity(2, 2));
  CHECK((same - unit).frobenius() <= 1e-14);
}

TEST_CASE("windowed module action equals right multiplication by pi(b)") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Window w = Window::group_singletons(*sys->group());
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    WindowedMatrix m = random_window_matrix(sys, w, rng);
    AlgebraElement b = a.element_from_coefficients(random_vector(a.dim(), rng));
    Matrix lhs = module_act_window(m, b.matrix()).concrete();
    Matrix rhs = m.concrete() *
                 window_module_embed(*sys, w, b.matrix(), sys->action());
    CHECK(frobenius_norm(Matrix(lhs - rhs)) <= 1e-11);
  }
}

TEST_CASE("the group action conjugates coefficients: g.(a g) = alpha_g(a) g") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& a = *sys->algebra();
  Rng rng(14);
  AlgebraElement av = a.element_from_coefficients(random_vector(a.dim(), rng));
  CrossedElement x = module_act(sys->embed_group(1), av);
  CrossedElement moved = group_act(1, x);
  CHECK(frobenius_norm(Matrix(moved.coefficient(1).matrix() -
                              sys->action().apply(1, av).matrix())) <= 1e-13);
  CrossedElement same = group_act(0, x);
  for (int s = 0; s < 2; ++s)
    CHECK(frobenius_norm(Matrix(same.coefficient(s).matrix() -
                                x.coefficient(s).matrix())) == 0.0);
}

TEST_CASE("the group action is isometric in the reduced norm") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CHECK(group_act(1, x).norm() == doctest::Approx(x.norm()).epsilon(1e-9));
  }
}

TEST_CASE("windowed group action matches conjugation by the translation unitary") {
  SystemPtr sys = z2_diagonal_swap();
  Window w = Window::group_singletons(*sys->group());
  Rng rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    WindowedMatrix m = random_window_matrix(sys, w, rng);
    Matrix u = kron(Matrix::Identity(2, 2), translation_unitary(*sys->group(), 1, w));
    Matrix lhs = group_act_window(1, m).concrete();
    Matrix rhs = u * m.concrete() * u.adjoint();
    CHECK(frobenius_norm(Matrix(lhs - rhs)) <= 1e-11);
  }
}

TEST_CASE("windowed group action needs a closed window") {
  auto g = FiniteGroup::cyclic(3);
  auto a = StarAlgebra::diagonal(1);
  auto sys = CrossedSystem::build(a, g, GroupAction::trivial(g, a));
  Window w = Window::singletons(*g, {0, 1});
  WindowedMatrix m = WindowedMatrix::zero(sys, w);
  CHECK_THROWS_AS(group_act_window(1, m), WindowNotClosed);
  // The family translation is always available.
  WindowedMatrix translated = translate_window_matrix(1, m);
  CHECK(translated.window().contains(GroupTuple({1})));
  CHECK(translated.window().contains(GroupTuple({2})));
}

TEST_CASE("compatibility of the two actions holds on random draws") {
  SystemPtr sys = z2_diagonal_swap();
  Window w = Window::group_singletons(*sys->group());
  CheckResult r = check_compatibility(*sys, w, 500, 1234);
  CHECK(r.pass);
  CHECK(r.witness <= 1e-12);
}

TEST_CASE("compatibility on a trivial system has residual zero") {
  auto g = FiniteGroup::cyclic(1);
  auto a = StarAlgebra::diagonal(1);
  auto sys = CrossedSystem::build(a, g, GroupAction::trivial(g, a));
  CheckResult r = check_compatibility(*sys, Window::group_singletons(*g), 50, 1);
  CHECK(r.pass);
  CHECK(r.witness == 0.0);
}

TEST_CASE("a corrupted action table fails compatibility") {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::diagonal(2);
  // A coefficient map with M^2 != I cannot be a Z/2 action; validation is
  // bypassed on purpose so the compatibility identity itself must break.
  std::vector<Matrix> maps(2, Matrix::Identity(2, 2));
  maps[1] << 1, 0, 1, 1;
  auto action = GroupAction::from_coefficient_maps(g, a, maps, {}, false);
  auto sys = CrossedSystem::build(a, g, GroupAction::trivial(g, a));
  Window w = Window::group_singletons(*g);
  WindowedMatrix m(sys, a, action, w,
                   {Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                    Matrix::Zero(2, 2), Matrix::Zero(2, 2)});
  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;  // e_00, moved by the corrupted map
  WindowedMatrix lhs = group_act_window(1, module_act_window(m, b));
  WindowedMatrix rhs = module_act_window(group_act_window(1, m),
                                         action.apply_matrix(1, b));
  CHECK((lhs - rhs).frobenius() > 0.5);
}

TEST_CASE("C(G) x| G is a full matrix algebra: dimension n^2, trivial center") {
  for (int n : {2, 3, 4}) {
    auto g = FiniteGroup::cyclic(n);
    auto a = StarAlgebra::diagonal(n);
    auto sys = CrossedSystem::build(a, g, GroupAction::translation(g, a));
    CHECK(sys->represented_algebra()->dim() == n * n);
    CHECK(center(*sys->represented_algebra())->dim() == 1);
  }
}

}  // TEST_SUITE
