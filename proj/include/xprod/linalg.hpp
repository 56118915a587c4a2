#pragma once

#include <random>

#include "xprod/types.hpp"

namespace xprod {

/// Largest singular value, computed from the Hermitian eigendecomposition of
/// M*M. Accurate to ~1e-12 relative on well-conditioned inputs.
double spectral_norm(const Matrix& m);

/// Smallest eigenvalue of the Hermitization (H + H*)/2. Throws NotHermitian
/// when ||H - H*|| exceeds identity_tol * (1 + ||H||).
double min_hermitian_eigenvalue(const Matrix& h, const Tolerances& tol = {});

/// All eigenvalues of the Hermitization, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& h, const Tolerances& tol = {});

/// Kronecker product with the left factor as the major index:
/// (X (x) Y)[(i,s),(j,t)] = X(i,j) * Y(s,t).
template <typename DerivedA, typename DerivedB>
Matrix kron(const Eigen::MatrixBase<DerivedA>& x,
            const Eigen::MatrixBase<DerivedB>& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) =
          Cplx(x(i, j)) * y;
  return out;
}

double frobenius_norm(const Matrix& m);

/// Column-major vectorization view used for span computations.
Vector vec(const Matrix& m);

inline Matrix identity_matrix(Eigen::Index n) { return Matrix::Identity(n, n); }

/// Deterministic generator for all randomized checks; every caller owns its
/// seed so concurrent checks stay reproducible.
using Rng = std::mt19937_64;

/// Entries iid standard complex Gaussian.
Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix random_hermitian(Eigen::Index n, Rng& rng);
/// Haar-ish random unitary: QR of a Gaussian matrix with phase-fixed diagonal.
Matrix random_unitary(Eigen::Index n, Rng& rng);
Vector random_vector(Eigen::Index n, Rng& rng);

/// Stable 64-bit hash of a string, used to derive per-check seeds from the
/// run seed.
std::uint64_t fnv1a(const std::string& text);

}  // namespace xprod
