#include <doctest.h>

#include "xprod/groups.hpp"

using namespace xprod;

TEST_SUITE("groups") {

TEST_CASE("cyclic(3) is Z/3 addition") {
  auto g = FiniteGroup::cyclic(3);
  CHECK(g->order() == 3);
  CHECK(g->identity() == 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(g->mul(i, j) == (i + j) % 3);
  CHECK(g->inv(1) == 2);
}

TEST_CASE("explicit 2x2 table builds Z/2") {
  auto g = FiniteGroup::from_table({"e", "g"}, {{0, 1}, {1, 0}});
  CHECK(g->order() == 2);
  CHECK(g->identity() == 0);
  CHECK(g->mul(1, 1) == 0);
}

TEST_CASE("a repeated row is rejected as non-Latin") {
  CHECK_THROWS_AS(FiniteGroup::from_table({"e", "g"}, {{0, 0}, {1, 0}}),
                  InvalidGroup);
}

TEST_CASE("a Latin square without associativity is rejected") {
  // The cyclic table with one transposition applied breaks associativity
  // while staying Latin in the touched rows.
  CHECK_THROWS_AS(FiniteGroup::from_table({"a", "b", "c", "d", "e"},
                                          {{0, 1, 2, 3, 4},
                                           {1, 0, 3, 4, 2},
                                           {2, 3, 4, 0, 1},
                                           {3, 4, 1, 2, 0},
                                           {4, 2, 0, 1, 3}}),
                  InvalidGroup);
}

TEST_CASE("dihedral and symmetric groups validate") {
  CHECK(FiniteGroup::dihedral(3)->order() == 6);
  CHECK(FiniteGroup::symmetric(3)->order() == 6);
  CHECK(FiniteGroup::symmetric(4)->order() == 24);
  CHECK_THROWS_AS(FiniteGroup::symmetric(5), InvalidGroup);
}

TEST_CASE("tuple product follows the multiplication table") {
  auto g = FiniteGroup::cyclic(3);
  CHECK(tuple_product(*g, GroupTuple({1, 2})) == 0);
  CHECK(tuple_product(*g, GroupTuple({0, 0, 0})) == 0);
  CHECK_THROWS_AS(tuple_product(*g, GroupTuple({5})), InvalidElement);
}

TEST_CASE("tuple inverse reverses and inverts") {
  auto g = FiniteGroup::cyclic(3);
  GroupTuple t({1, 2});
  GroupTuple inv = tuple_inverse(*g, t);
  CHECK(inv.parts == std::vector<int>{1, 2});  // 2^-1 = 1, 1^-1 = 2
}

TEST_CASE("product identities over random tuples") {
  auto g = FiniteGroup::symmetric(3);
  Rng rng(5);
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  std::uniform_int_distribution<int> len(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> parts(len(rng));
    for (int& p : parts) p = pick(rng);
    GroupTuple t(parts);
    int r = pick(rng);
    // product(t^-1) = product(t)^-1 and product(rt) = r product(t).
    CHECK(tuple_product(*g, tuple_inverse(*g, t)) == g->inv(tuple_product(*g, t)));
    CHECK(tuple_product(*g, left_translate(*g, r, t)) ==
          g->mul(r, tuple_product(*g, t)));
  }
}

TEST_CASE("tuple inverse is an involution; translating by e is the identity") {
  auto g = FiniteGroup::dihedral(4);
  Rng rng(17);
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> parts{pick(rng), pick(rng), pick(rng)};
    GroupTuple t(parts);
    CHECK(tuple_inverse(*g, tuple_inverse(*g, t)) == t);
    CHECK(left_translate(*g, g->identity(), t) == t);
  }
}

TEST_CASE("left translation touches only the first slot") {
  auto g = FiniteGroup::cyclic(5);
  CHECK(left_translate(*g, 2, GroupTuple({1})).parts == std::vector<int>{3});
  CHECK(left_translate(*g, 2, GroupTuple({1, 4})).parts == std::vector<int>{3, 4});
}

TEST_CASE("the regular representation of Z/2 is the swap") {
  auto g = FiniteGroup::cyclic(2);
  Matrix lam = regular_unitary(*g, 1);
  CHECK(std::abs(lam(0, 1) - Cplx(1.0)) == 0.0);
  CHECK(std::abs(lam(1, 0) - Cplx(1.0)) == 0.0);
  CHECK(std::abs(lam(0, 0)) == 0.0);
  CHECK(frobenius_norm(Matrix(regular_unitary(*g, 0) - Matrix::Identity(2, 2))) ==
        0.0);
}

TEST_CASE("regular unitaries multiply along the table") {
  auto g = FiniteGroup::symmetric(3);
  for (int s = 0; s < g->order(); ++s) {
    CHECK(frobenius_norm(Matrix(regular_unitary(*g, s) *
                                    regular_unitary(*g, g->inv(s)) -
                                Matrix::Identity(6, 6))) == 0.0);
    for (int t = 0; t < g->order(); ++t)
      CHECK(frobenius_norm(Matrix(regular_unitary(*g, s) * regular_unitary(*g, t) -
                                  regular_unitary(*g, g->mul(s, t)))) == 0.0);
  }
}

TEST_CASE("translation unitaries on closed windows") {
  auto g = FiniteGroup::cyclic(2);
  Window w = Window::group_singletons(*g);
  Matrix u = translation_unitary(*g, 1, w);
  CHECK(std::abs(u(1, 0) - Cplx(1.0)) == 0.0);  // (e) -> (g)
  CHECK(std::abs(u(0, 1) - Cplx(1.0)) == 0.0);
  CHECK(frobenius_norm(Matrix(translation_unitary(*g, 0, w) -
                              Matrix::Identity(2, 2))) == 0.0);
}

TEST_CASE("translation requires a closed window") {
  auto g = FiniteGroup::cyclic(3);
  Window w = Window::singletons(*g, {0, 1});
  CHECK_THROWS_AS(translation_unitary(*g, 1, w), WindowNotClosed);
}

TEST_CASE("translation unitaries compose on closed windows") {
  auto g = FiniteGroup::dihedral(3);
  Window w = Window::group_singletons(*g);
  Rng rng(3);
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    int r = pick(rng), s = pick(rng);
    Matrix lhs = translation_unitary(*g, r, w) * translation_unitary(*g, s, w);
    CHECK(frobenius_norm(Matrix(lhs - translation_unitary(*g, g->mul(r, s), w))) ==
          0.0);
  }
}

TEST_CASE("conjugation by a translation unitary permutes matrix units") {
  auto g = FiniteGroup::symmetric(3);
  Window w = Window::group_singletons(*g);
  Rng rng(11);
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    int r = pick(rng), s = pick(rng), t = pick(rng);
    Matrix e_st = Matrix::Zero(w.size(), w.size());
    e_st(s, t) = 1.0;
    Matrix u = translation_unitary(*g, r, w);
    Matrix moved = u * e_st * u.adjoint();
    Matrix expected = Matrix::Zero(w.size(), w.size());
    expected(g->mul(r, s), g->mul(r, t)) = 1.0;
    CHECK(frobenius_norm(Matrix(moved - expected)) == 0.0);
  }
}

TEST_CASE("windows reject duplicates and support translation closure") {
  auto g = FiniteGroup::cyclic(2);
  CHECK_THROWS_AS(Window(*g, {GroupTuple({1}), GroupTuple({1})}), InvalidInput);
  Window w(*g, {GroupTuple({1, 1})});
  Window closed = w.translation_closure(*g);
  CHECK(closed.size() == 2);
  CHECK(closed.closed_under(*g, 1));
}

}  // TEST_SUITE
