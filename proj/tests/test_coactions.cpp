#include <doctest.h>

#include "xprod/nuclearity.hpp"

using namespace xprod;

namespace {

SystemPtr z2_diagonal_swap() {
  auto g = FiniteGroup::cyclic(2);
  auto a = StarAlgebra::diagonal(2);
  auto action = GroupAction::coordinate_permutation(g, a, {{1, {1, 0}}});
  return CrossedSystem::build(a, g, std::move(action));
}

}  // namespace

TEST_SUITE("coactions") {

TEST_CASE("the coaction fixes the unit") {
  SystemPtr sys = z2_diagonal_swap();
  Matrix c = coaction(sys->unit_element());
  CHECK(frobenius_norm(Matrix(c - Matrix::Identity(8, 8))) <= 1e-14);
}

TEST_CASE("coaction of 1 g on Z/2 is (I (x) swap) (x) swap") {
  SystemPtr sys = z2_diagonal_swap();
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  Matrix expected = kron(kron(Matrix::Identity(2, 2), swap), swap);
  CHECK(expected.rows() == 8);
  CHECK(frobenius_norm(Matrix(coaction(sys->embed_group(1)) - expected)) <= 1e-14);
}

TEST_CASE("the coaction is a homomorphism on random pairs") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CrossedElement y = random_crossed_element(sys, rng);
    Matrix lhs = coaction(x * y);
    Matrix rhs = coaction(x) * coaction(y);
    worst = std::max(worst, frobenius_norm(Matrix(lhs - rhs)) /
                                (1.0 + frobenius_norm(rhs)));
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("the coaction is isometric") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    CrossedElement x = random_crossed_element(sys, rng);
    CHECK(spectral_norm(coaction(x)) == doctest::Approx(x.norm()).epsilon(1e-9));
  }
}

TEST_CASE("restricted to A the coaction is the trivial one") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(37);
  AlgebraElement a = sys->algebra()->element_from_coefficients(random_vector(2, rng));
  Matrix lhs = coaction(sys->embed_algebra(a));
  Matrix rhs = kron(sys->represent_algebra(a.matrix()), Matrix::Identity(2, 2));
  CHECK(frobenius_norm(Matrix(lhs - rhs)) == 0.0);
}

TEST_CASE("window coaction entries carry lambda of the product quotient") {
  SystemPtr sys = z2_diagonal_swap();
  const auto& g = *sys->group();
  Window w = Window::group_singletons(g);
  Rng rng(41);
  AlgebraElement a = sys->algebra()->element_from_coefficients(random_vector(2, rng));

  // Diagonal entries pick up lambda_e.
  WindowedMatrix diag_unit = WindowedMatrix::matrix_unit(sys, w, 1, 1, a.matrix());
  WindowedMatrix cd = coaction_window(diag_unit);
  CHECK(frobenius_norm(Matrix(cd.entry(1, 1) -
                              kron(a.matrix(), Matrix::Identity(2, 2)))) <= 1e-14);

  // a (x) e_{e,g} picks up lambda_g.
  WindowedMatrix off_unit = WindowedMatrix::matrix_unit(sys, w, 0, 1, a.matrix());
  WindowedMatrix co = coaction_window(off_unit);
  CHECK(frobenius_norm(Matrix(co.entry(0, 1) -
                              kron(a.matrix(), regular_unitary(g, 1)))) <= 1e-14);
}

TEST_CASE("the window coaction is a homomorphism") {
  SystemPtr sys = z2_diagonal_swap();
  Window w = Window::group_singletons(*sys->group());
  Rng rng(43);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    WindowedMatrix m = random_window_matrix(sys, w, rng);
    WindowedMatrix n = random_window_matrix(sys, w, rng);
    WindowedMatrix lhs = coaction_window(m * n);
    WindowedMatrix rhs = coaction_window(m) * coaction_window(n);
    worst = std::max(worst, (lhs - rhs).frobenius() / (1.0 + rhs.frobenius()));
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("the window coaction respects adjoints") {
  SystemPtr sys = z2_diagonal_swap();
  Window w = Window::group_singletons(*sys->group());
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    WindowedMatrix m = random_window_matrix(sys, w, rng);
    CHECK((coaction_window(m.adjoint()) - coaction_window(m).adjoint()).frobenius() <=
          1e-12);
  }
}

TEST_CASE("comodule identities hold; a corrupted base coaction fails them") {
  SystemPtr sys = z2_diagonal_swap();
  Window w = Window::group_singletons(*sys->group());
  CheckResult ok = check_comodule(*sys, w, 300, 53);
  CHECK(ok.pass);
  CHECK(ok.witness <= 1e-12);

  // Replacing delta_A by a -> a (x) lambda_g breaks the identity.
  Rng rng(59);
  CrossedElement x = random_crossed_element(sys, rng);
  AlgebraElement b = sys->algebra()->element_from_coefficients(random_vector(2, rng));
  Matrix lhs = coaction(module_act(x, b));
  Matrix corrupted = coaction(x) * kron(sys->represent_algebra(b.matrix()),
                                        regular_unitary(*sys->group(), 1));
  CHECK(frobenius_norm(Matrix(lhs - corrupted)) > 1e-3);
}

TEST_CASE("b = 1 reduces both comodule sides to the coaction itself") {
  SystemPtr sys = z2_diagonal_swap();
  Rng rng(61);
  CrossedElement x = random_crossed_element(sys, rng);
  Matrix lhs = coaction(module_act(x, sys->algebra()->unit()));
  CHECK(frobenius_norm(Matrix(lhs - coaction(x))) <= 1e-12);
}

TEST_CASE("comap identities hold for the witness pair, scaling included") {
  SystemPtr sys = z2_diagonal_swap();
  AmenabilityField field = AmenabilityField::constant(sys);
  FactorizationWitness w = build_witness(field);
  CheckResult pair = check_comap_pair(w.compressed_rep, w.averaging);
  CHECK(pair.pass);
  CHECK(pair.witness <= 1e-12);

  // The spurious 1/|F| factor commutes with the coactions, so the comap
  // identities are insensitive to it.
  LinearMap scaled = w.averaging.scaled(1.0 / w.compression_window.size());
  CHECK(check_equivariance(scaled, EquivarianceMode::gcomap).pass);
}

TEST_CASE("comap identities on the trivial group reduce to linearity") {
  auto g = FiniteGroup::cyclic(1);
  auto a = StarAlgebra::diagonal(1);
  SystemPtr sys = CrossedSystem::build(a, g, GroupAction::trivial(g, a));
  AmenabilityField field = AmenabilityField::constant(sys);
  FactorizationWitness w = build_witness(field);
  CheckResult pair = check_comap_pair(w.compressed_rep, w.averaging);
  CHECK(pair.pass);
  CHECK(pair.witness == 0.0);
}

}  // TEST_SUITE
