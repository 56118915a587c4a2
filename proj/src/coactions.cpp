#include "xprod/coactions.hpp"

#include "xprod/cpmaps.hpp"

namespace xprod {

Matrix coaction(const CrossedElement& x) {
  const auto& sys = *x.system();
  const auto& g = *sys.group();
  const int rep = sys.rep_dim();
  const int n = g.order();
  Matrix out = Matrix::Zero(rep * n, rep * n);
  for (int s = 0; s < n; ++s) {
    if (x.coefficient(s).is_zero(0.0)) continue;
    std::vector<AlgebraElement> coeffs(n, sys.algebra()->zero());
    coeffs[s] = x.coefficient(s);
    out += kron(sys.represent(CrossedElement(x.system(), std::move(coeffs))),
                regular_unitary(g, s));
  }
  return out;
}

WindowedMatrix coaction_window(const WindowedMatrix& m) {
  const auto& sys = *m.system();
  const auto& g = *sys.group();
  if (m.entry_algebra() != sys.algebra())
    throw InvalidInput("window coaction expects A-valued entries");
  const Window& w = m.window();
  std::vector<Matrix> entries;
  entries.reserve(static_cast<std::size_t>(w.size()) * w.size());
  for (int s = 0; s < w.size(); ++s) {
    int bs = tuple_product(g, w.tuple(s));
    for (int t = 0; t < w.size(); ++t) {
      int lam = g.mul(bs, g.inv(tuple_product(g, w.tuple(t))));
      entries.push_back(kron(m.entry(s, t), regular_unitary(g, lam)));
    }
  }
  return WindowedMatrix(m.system(), sys.tensor_group_algebra(), sys.tensor_action(),
                        w, std::move(entries));
}

Matrix coaction_base(const CrossedSystem& sys, const Matrix& a) {
  return kron(a, Matrix::Identity(sys.group()->order(), sys.group()->order()));
}

Matrix window_tensor_shuffle(const WindowedMatrix& tensored) {
  const auto& sys = *tensored.system();
  const int n = sys.group()->order();
  const int d = sys.algebra()->ambient_dim();
  const int k = tensored.window().size();
  if (tensored.entry_dim() != d * n)
    throw InvalidInput("expected entries in A (x) C*_r(G)");
  Matrix out = Matrix::Zero(d * k * n, d * k * n);
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < k; ++t) {
      const Matrix& e = tensored.entry(s, t);
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              out((p * k + s) * n + a, (q * k + t) * n + b) =
                  e(p * n + a, q * n + b);
    }
  return out;
}

CheckResult check_comodule(const CrossedSystem& sys, const Window& w, int trials,
                           std::uint64_t seed, const Tolerances& tol) {
  Rng rng(seed);
  auto self = sys.shared_from_this();
  const int n = sys.group()->order();
  const int m = sys.algebra()->dim();
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    AlgebraElement b =
        sys.algebra()->element_from_coefficients(random_vector(m, rng));

    // delta(x . b) = delta(x) . delta_A(b) on the crossed product.
    CrossedElement x = random_crossed_element(self, rng);
    Matrix lhs = coaction(module_act(x, b));
    Matrix rhs = coaction(x) *
                 kron(sys.represent_algebra(b.matrix()), Matrix::Identity(n, n));
    worst = std::max(worst, frobenius_norm(Matrix(lhs - rhs)));

    // delta_F(m . b) = delta_F(m) . delta_A(b) on the window.
    WindowedMatrix wm = random_window_matrix(self, w, rng);
    WindowedMatrix lhw = coaction_window(module_act_window(wm, b.matrix()));
    WindowedMatrix rhw = module_act_window(coaction_window(wm),
                                           coaction_base(sys, b.matrix()));
    worst = std::max(worst, (lhw - rhw).frobenius());
  }
  return CheckResult::residual("comodule", worst, tol.identity_tol);
}

CheckResult check_comap_pair(const LinearMap& phi_f, const LinearMap& psi_f,
                             const Tolerances& tol) {
  CheckResult a = check_equivariance(phi_f, EquivarianceMode::gcomap, tol);
  CheckResult b = check_equivariance(psi_f, EquivarianceMode::gcomap, tol);
  double worst = std::max(a.witness, b.witness);
  CheckResult out = CheckResult::residual("comap-pair", worst, tol.identity_tol);
  if (!out.pass)
    out.detail = a.pass ? "averaging side fails" : "compression side fails";
  return out;
}

}  // namespace xprod
