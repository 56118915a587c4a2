#include "xprod/linalg.hpp"

namespace xprod {

double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw InvalidInput("spectral_norm: dimension-zero matrix");
  Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top <= 0.0 ? 0.0 : std::sqrt(top);
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& h, const Tolerances& tol) {
  if (h.rows() == 0 || h.rows() != h.cols())
    throw InvalidInput("hermitian_eigenvalues: matrix must be square and nonempty");
  double scale = 1.0 + spectral_norm(h);
  double dev = spectral_norm(Matrix(h - h.adjoint()));
  if (dev > tol.identity_tol * scale)
    throw NotHermitian("matrix is not Hermitian within tolerance (deviation " +
                       std::to_string(dev) + ")");
  Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_hermitian_eigenvalue(const Matrix& h, const Tolerances& tol) {
  return hermitian_eigenvalues(h, tol)(0);
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      out(i, j) = Cplx(gauss(rng), gauss(rng));
  return out;
}

Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution does not depend on the QR convention.
  for (Eigen::Index i = 0; i < n; ++i) {
    Cplx d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Cplx(1.0);
  }
  return q;
}

Vector random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
  return v;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace xprod
