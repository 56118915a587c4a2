#include <doctest.h>

#include "xprod/linalg.hpp"

using namespace xprod;

namespace {

Matrix swap2() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

/// The swap (flip) operator on C^2 (x) C^2: e_i (x) e_j -> e_j (x) e_i.
Matrix flip4() {
  Matrix m = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(j * 2 + i, i * 2 + j) = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("spectral norm of a permutation unitary is 1") {
  CHECK(spectral_norm(swap2()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral norm of a diagonal matrix is the largest modulus") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  CHECK(spectral_norm(m) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("spectral norm sits between the sampling oracle and Frobenius") {
  Rng rng(99);
  Matrix m = random_matrix(8, 8, rng);
  double value = spectral_norm(m);
  double sampled = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Vector v = random_vector(8, rng);
    v /= v.norm();
    sampled = std::max(sampled, (m * v).norm());
  }
  CHECK(sampled <= value + 1e-10);
  CHECK(value <= frobenius_norm(m) + 1e-10);
}

TEST_CASE("spectral norm rejects empty matrices") {
  CHECK_THROWS_AS(spectral_norm(Matrix(0, 0)), InvalidInput);
}

TEST_CASE("minimum Hermitian eigenvalue on diagonal inputs") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -0.5;
  CHECK(min_hermitian_eigenvalue(m) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(min_hermitian_eigenvalue(Matrix::Identity(5, 5)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the flip operator has minimum eigenvalue -1") {
  CHECK(min_hermitian_eigenvalue(flip4()) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(min_hermitian_eigenvalue(m), NotHermitian);
}

TEST_CASE("kron of identities is the identity") {
  CHECK(frobenius_norm(Matrix(kron(Matrix::Identity(2, 2), Matrix::Identity(3, 3)) -
                              Matrix::Identity(6, 6))) == 0.0);
}

TEST_CASE("kron against the definition, left factor major") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  Matrix k = kron(d, e11);
  CHECK(k.rows() == 4);
  CHECK(std::abs(k(0, 0) - Cplx(1.0)) == 0.0);
  CHECK(std::abs(k(2, 2) - Cplx(2.0)) == 0.0);
  CHECK(frobenius_norm(k) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("kron is multiplicative: (X(x)Y)(X'(x)Y') = XX'(x)YY'") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x = random_matrix(2, 2, rng), y = random_matrix(2, 2, rng);
    Matrix xp = random_matrix(2, 2, rng), yp = random_matrix(2, 2, rng);
    Matrix lhs = kron(x, y) * kron(xp, yp);
    Matrix rhs = kron(Matrix(x * xp), Matrix(y * yp));
    CHECK(frobenius_norm(Matrix(lhs - rhs)) <= 1e-12);
  }
}

TEST_CASE("kron associativity holds entrywise exactly") {
  Rng rng(13);
  Matrix a = random_matrix(2, 3, rng), b = random_matrix(3, 2, rng),
         c = random_matrix(2, 2, rng);
  Matrix lhs = kron(kron(a, b), c);
  Matrix rhs = kron(a, kron(b, c));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral norm is submultiplicative and unitarily invariant") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix a = random_matrix(5, 5, rng), b = random_matrix(5, 5, rng);
    CHECK(spectral_norm(Matrix(a * b)) <=
          spectral_norm(a) * spectral_norm(b) + 1e-10);
    Matrix u = random_unitary(5, rng);
    CHECK(spectral_norm(Matrix(u * a)) ==
          doctest::Approx(spectral_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("minimum eigenvalue is invariant under unitary conjugation") {
  Rng rng(34);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix h = random_hermitian(6, rng);
    Matrix u = random_unitary(6, rng);
    CHECK(min_hermitian_eigenvalue(Matrix(u * h * u.adjoint())) ==
          doctest::Approx(min_hermitian_eigenvalue(h)).epsilon(1e-9));
  }
}

}  // TEST_SUITE
