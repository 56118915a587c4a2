#include "xprod/crossed.hpp"

namespace xprod {

CrossedElement::CrossedElement(SystemPtr sys, std::vector<AlgebraElement> coeffs)
    : sys_(std::move(sys)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != sys_->group()->order())
    throw InvalidInput("crossed element needs one coefficient per group element");
}

CrossedElement CrossedElement::operator+(const CrossedElement& o) const {
  std::vector<AlgebraElement> c;
  c.reserve(coeffs_.size());
  for (std::size_t s = 0; s < coeffs_.size(); ++s)
    c.push_back(coeffs_[s] + o.coeffs_[s]);
  return CrossedElement(sys_, std::move(c));
}

CrossedElement CrossedElement::operator-(const CrossedElement& o) const {
  std::vector<AlgebraElement> c;
  c.reserve(coeffs_.size());
  for (std::size_t s = 0; s < coeffs_.size(); ++s)
    c.push_back(coeffs_[s] - o.coeffs_[s]);
  return CrossedElement(sys_, std::move(c));
}

CrossedElement CrossedElement::operator*(const CrossedElement& o) const {
  const auto& g = *sys_->group();
  const auto& alpha = sys_->action();
  std::vector<AlgebraElement> c;
  c.reserve(coeffs_.size());
  for (int u = 0; u < g.order(); ++u) {
    AlgebraElement acc = sys_->algebra()->zero();
    for (int s = 0; s < g.order(); ++s)
      acc = acc + coeffs_[s] * alpha.apply(s, o.coeffs_[g.mul(g.inv(s), u)]);
    c.push_back(std::move(acc));
  }
  return CrossedElement(sys_, std::move(c));
}

CrossedElement CrossedElement::scaled(Cplx factor) const {
  std::vector<AlgebraElement> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.push_back(a.scaled(factor));
  return CrossedElement(sys_, std::move(c));
}

CrossedElement CrossedElement::adjoint() const {
  const auto& g = *sys_->group();
  const auto& alpha = sys_->action();
  std::vector<AlgebraElement> c;
  c.reserve(coeffs_.size());
  for (int u = 0; u < g.order(); ++u)
    c.push_back(alpha.apply(u, coeffs_[g.inv(u)].adjoint()));
  return CrossedElement(sys_, std::move(c));
}

double CrossedElement::norm() const { return spectral_norm(sys_->represent(*this)); }

WindowedMatrix::WindowedMatrix(SystemPtr sys, AlgebraPtr entry_algebra,
                               GroupAction entry_action, Window window,
                               std::vector<Matrix> entries)
    : sys_(std::move(sys)), entry_algebra_(std::move(entry_algebra)),
      entry_action_(std::move(entry_action)), window_(std::move(window)),
      entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != window_.size() * window_.size())
    throw InvalidInput("windowed matrix needs |W|^2 entries");
}

WindowedMatrix WindowedMatrix::zero(SystemPtr sys, Window window) {
  const int d = sys->algebra()->ambient_dim();
  std::vector<Matrix> entries(
      static_cast<std::size_t>(window.size()) * window.size(),
      Matrix::Zero(d, d));
  AlgebraPtr a = sys->algebra();
  GroupAction act = sys->action();
  return WindowedMatrix(std::move(sys), std::move(a), std::move(act),
                        std::move(window), std::move(entries));
}

WindowedMatrix WindowedMatrix::matrix_unit(SystemPtr sys, Window window, int s,
                                           int t, const Matrix& a) {
  WindowedMatrix m = zero(std::move(sys), std::move(window));
  m.entry(s, t) = a;
  return m;
}

Matrix WindowedMatrix::concrete() const {
  const int d = entry_dim();
  const int w = window_.size();
  Matrix out = Matrix::Zero(d * w, d * w);
  for (int s = 0; s < w; ++s)
    for (int t = 0; t < w; ++t) {
      const Matrix& e = entry(s, t);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i * w + s, j * w + t) = e(i, j);
    }
  return out;
}

WindowedMatrix WindowedMatrix::operator+(const WindowedMatrix& o) const {
  WindowedMatrix out = *this;
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] += o.entries_[k];
  return out;
}

WindowedMatrix WindowedMatrix::operator-(const WindowedMatrix& o) const {
  WindowedMatrix out = *this;
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] -= o.entries_[k];
  return out;
}

WindowedMatrix WindowedMatrix::operator*(const WindowedMatrix& o) const {
  const int w = window_.size();
  WindowedMatrix out = *this;
  for (int s = 0; s < w; ++s)
    for (int t = 0; t < w; ++t) {
      Matrix acc = Matrix::Zero(entry_dim(), entry_dim());
      for (int u = 0; u < w; ++u) acc += entry(s, u) * o.entry(u, t);
      out.entry(s, t) = std::move(acc);
    }
  return out;
}

WindowedMatrix WindowedMatrix::scaled(Cplx factor) const {
  WindowedMatrix out = *this;
  for (auto& e : out.entries_) e *= factor;
  return out;
}

WindowedMatrix WindowedMatrix::adjoint() const {
  WindowedMatrix out = *this;
  const int w = window_.size();
  for (int s = 0; s < w; ++s)
    for (int t = 0; t < w; ++t) out.entry(s, t) = entry(t, s).adjoint();
  return out;
}

double WindowedMatrix::frobenius() const {
  double acc = 0.0;
  for (const auto& e : entries_) acc += e.squaredNorm();
  return std::sqrt(acc);
}

WindowedMatrix WindowedMatrix::compressed_to(const Window& f) const {
  std::vector<Matrix> entries;
  entries.reserve(static_cast<std::size_t>(f.size()) * f.size());
  std::vector<int> pos(f.size());
  for (int i = 0; i < f.size(); ++i) {
    pos[i] = window_.find(f.tuple(i));
    if (pos[i] < 0) throw InvalidInput("compression window is not a sub-window");
  }
  for (int s = 0; s < f.size(); ++s)
    for (int t = 0; t < f.size(); ++t) entries.push_back(entry(pos[s], pos[t]));
  return WindowedMatrix(sys_, entry_algebra_, entry_action_, f, std::move(entries));
}

CrossedSystem::CrossedSystem(AlgebraPtr a, std::shared_ptr<const FiniteGroup> g,
                             GroupAction action, const Tolerances& tol)
    : algebra_(std::move(a)), group_(std::move(g)), action_(std::move(action)),
      tol_(tol) {
  const int n = group_->order();
  lambda_.reserve(n);
  for (int s = 0; s < n; ++s) lambda_.push_back(regular_unitary(*group_, s));

  std::vector<Matrix> glam = lambda_;
  group_algebra_ = StarAlgebra::create(std::move(glam), tol_, false);

  std::vector<Matrix> tensor_basis;
  tensor_basis.reserve(static_cast<std::size_t>(algebra_->dim()) * n);
  for (int i = 0; i < algebra_->dim(); ++i)
    for (int s = 0; s < n; ++s)
      tensor_basis.push_back(kron(algebra_->basis_element(i), lambda_[s]));
  tensor_algebra_ = StarAlgebra::create(std::move(tensor_basis), tol_, false);
  tensor_action_ = std::make_shared<GroupAction>(
      action_.tensor_identity(tensor_algebra_, n));
}

SystemPtr CrossedSystem::build(AlgebraPtr a, std::shared_ptr<const FiniteGroup> g,
                               GroupAction action, const Tolerances& tol) {
  if (action.algebra() != a || action.group() != g)
    throw InvalidInput("action does not match the given algebra/group");
  auto sys = std::shared_ptr<CrossedSystem>(
      new CrossedSystem(std::move(a), std::move(g), std::move(action), tol));

  // Covariance: rep(s) rep(a) rep(s)^-1 = rep(alpha_s(a)) on the basis.
  const auto& alg = *sys->algebra_;
  for (int s = 0; s < sys->group_->order(); ++s) {
    Matrix us = sys->represent_group(s);
    for (int i = 0; i < alg.dim(); ++i) {
      Matrix lhs = us * sys->represent_algebra(alg.basis_element(i)) * us.adjoint();
      Matrix rhs = sys->represent_algebra(
          sys->action_.apply_matrix(s, alg.basis_element(i)));
      if (frobenius_norm(Matrix(lhs - rhs)) >
          tol.identity_tol * (1.0 + frobenius_norm(rhs)))
        throw InternalError("covariance failure in the regular representation");
    }
  }

  // Cache the represented crossed product as a concrete star algebra.
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(alg.dim()) * sys->group_->order());
  for (int i = 0; i < alg.dim(); ++i)
    for (int s = 0; s < sys->group_->order(); ++s)
      basis.push_back(sys->represent_algebra(alg.basis_element(i)) *
                      sys->represent_group(s));
  sys->represented_ = StarAlgebra::create(std::move(basis), tol, false);
  return sys;
}

Matrix CrossedSystem::represent(const CrossedElement& x) const {
  const int n = group_->order();
  const int d = algebra_->ambient_dim();
  Matrix out = Matrix::Zero(d * n, d * n);
  for (int s = 0; s < n; ++s) {
    if (x.coefficient(s).is_zero(0.0)) continue;
    for (int t = 0; t < n; ++t) {
      Matrix blk = action_.apply_matrix(group_->inv(t), x.coefficient(s).matrix());
      int col = group_->mul(group_->inv(s), t);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i * n + t, j * n + col) += blk(i, j);
    }
  }
  return out;
}

Matrix CrossedSystem::represent_algebra(const Matrix& a) const {
  const int n = group_->order();
  const int d = algebra_->ambient_dim();
  Matrix out = Matrix::Zero(d * n, d * n);
  for (int t = 0; t < n; ++t) {
    Matrix blk = action_.apply_matrix(group_->inv(t), a);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out(i * n + t, j * n + t) = blk(i, j);
  }
  return out;
}

Matrix CrossedSystem::represent_group(int s) const {
  return kron(Matrix::Identity(algebra_->ambient_dim(), algebra_->ambient_dim()),
              lambda_.at(s));
}

CrossedElement CrossedSystem::from_matrix(const Matrix& x) const {
  double residual = 0.0;
  Vector coeffs = represented_->coefficients_of(x, &residual);
  if (residual > tol_.identity_tol * (1.0 + frobenius_norm(x)))
    throw InvalidInput("matrix is not in the represented crossed product");
  return from_represented_coefficients(coeffs);
}

CrossedElement CrossedSystem::from_represented_coefficients(const Vector& coeffs) const {
  const int n = group_->order();
  const int m = algebra_->dim();
  std::vector<AlgebraElement> c;
  c.reserve(n);
  for (int s = 0; s < n; ++s) {
    Vector a = Vector::Zero(m);
    for (int i = 0; i < m; ++i) a(i) = coeffs(i * n + s);
    c.push_back(algebra_->element_from_coefficients(a));
  }
  return CrossedElement(shared_from_this(), std::move(c));
}

CrossedElement CrossedSystem::zero_element() const {
  std::vector<AlgebraElement> c(group_->order(), algebra_->zero());
  return CrossedElement(shared_from_this(), std::move(c));
}

CrossedElement CrossedSystem::unit_element() const {
  return embed_algebra(algebra_->unit());
}

CrossedElement CrossedSystem::embed_algebra(const AlgebraElement& a) const {
  std::vector<AlgebraElement> c(group_->order(), algebra_->zero());
  c[group_->identity()] = a;
  return CrossedElement(shared_from_this(), std::move(c));
}

CrossedElement CrossedSystem::embed_group(int s) const {
  std::vector<AlgebraElement> c(group_->order(), algebra_->zero());
  c.at(s) = algebra_->unit();
  return CrossedElement(shared_from_this(), std::move(c));
}

CrossedElement CrossedSystem::element(std::vector<AlgebraElement> coeffs) const {
  return CrossedElement(shared_from_this(), std::move(coeffs));
}

AlgebraPtr CrossedSystem::window_algebra(const Window& w) const {
  const int d = algebra_->ambient_dim();
  const int k = w.size();
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(algebra_->dim()) * k * k);
  for (int i = 0; i < algebra_->dim(); ++i)
    for (int s = 0; s < k; ++s)
      for (int t = 0; t < k; ++t) {
        Matrix out = Matrix::Zero(d * k, d * k);
        const Matrix& b = algebra_->basis_element(i);
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) out(p * k + s, q * k + t) = b(p, q);
        basis.push_back(std::move(out));
      }
  return StarAlgebra::create(std::move(basis), tol_, false);
}

WindowedMatrix CrossedSystem::zero_window(const Window& w) const {
  return WindowedMatrix::zero(shared_from_this(), w);
}

AlgebraElement expectation(const CrossedElement& x) {
  return x.coefficient(x.system()->group()->identity());
}

CrossedElement module_act(const CrossedElement& x, const AlgebraElement& b) {
  const auto& sys = *x.system();
  if (b.algebra() != sys.algebra())
    throw InvalidInput("module action requires an element of the base algebra");
  std::vector<AlgebraElement> c;
  c.reserve(x.coefficients().size());
  for (int s = 0; s < sys.group()->order(); ++s)
    c.push_back(x.coefficient(s) * sys.action().apply(s, b));
  return CrossedElement(x.system(), std::move(c));
}

WindowedMatrix module_act_window(const WindowedMatrix& m, const Matrix& b) {
  const auto& g = *m.system()->group();
  const auto& beta = m.entry_action();
  if (b.rows() != m.entry_dim() || b.cols() != m.entry_dim())
    throw InvalidInput("module element has wrong entry dimension");
  // Cache alpha_{bar(t)^-1}(b) per column product value.
  std::vector<Matrix> twisted(g.order());
  std::vector<bool> have(g.order(), false);
  WindowedMatrix out = m;
  for (int t = 0; t < m.window().size(); ++t) {
    int bar = tuple_product(g, m.window().tuple(t));
    int key = g.inv(bar);
    if (!have[key]) {
      twisted[key] = beta.apply_matrix(key, b);
      have[key] = true;
    }
    for (int s = 0; s < m.window().size(); ++s)
      out.entry(s, t) = m.entry(s, t) * twisted[key];
  }
  return out;
}

Matrix window_module_embed(const CrossedSystem& sys, const Window& w,
                           const Matrix& b_entry, const GroupAction& entry_action) {
  const int d = static_cast<int>(b_entry.rows());
  const int k = w.size();
  Matrix out = Matrix::Zero(d * k, d * k);
  for (int t = 0; t < k; ++t) {
    int bar = tuple_product(*sys.group(), w.tuple(t));
    Matrix blk = entry_action.apply_matrix(sys.group()->inv(bar), b_entry);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) out(p * k + t, q * k + t) = blk(p, q);
  }
  return out;
}

CrossedElement group_act(int r, const CrossedElement& x) {
  const auto& sys = *x.system();
  const auto& g = *sys.group();
  std::vector<AlgebraElement> c;
  c.reserve(x.coefficients().size());
  for (int u = 0; u < g.order(); ++u) {
    int s = g.mul(g.mul(g.inv(r), u), r);  // u = r s r^-1
    c.push_back(sys.action().apply(r, x.coefficient(s)));
  }
  return CrossedElement(x.system(), std::move(c));
}

WindowedMatrix group_act_window(int r, const WindowedMatrix& m) {
  const auto& g = *m.system()->group();
  const Window& w = m.window();
  std::vector<int> moved(w.size());
  for (int i = 0; i < w.size(); ++i) {
    moved[i] = w.find(left_translate(g, r, w.tuple(i)));
    if (moved[i] < 0)
      throw WindowNotClosed("window is not closed under translation by '" +
                            g.label(r) + "'");
  }
  WindowedMatrix out = m;
  for (int s = 0; s < w.size(); ++s)
    for (int t = 0; t < w.size(); ++t) out.entry(moved[s], moved[t]) = m.entry(s, t);
  return out;
}

WindowedMatrix translate_window_matrix(int r, const WindowedMatrix& m) {
  const auto& g = *m.system()->group();
  Window moved = m.window().translated(g, r);
  std::vector<Matrix> entries;
  entries.reserve(static_cast<std::size_t>(moved.size()) * moved.size());
  for (int s = 0; s < m.window().size(); ++s)
    for (int t = 0; t < m.window().size(); ++t) entries.push_back(m.entry(s, t));
  return WindowedMatrix(m.system(), m.entry_algebra(), m.entry_action(),
                        std::move(moved), std::move(entries));
}

CrossedElement random_crossed_element(const SystemPtr& sys, Rng& rng) {
  std::vector<AlgebraElement> c;
  const int m = sys->algebra()->dim();
  for (int s = 0; s < sys->group()->order(); ++s)
    c.push_back(sys->algebra()->element_from_coefficients(random_vector(m, rng)));
  return CrossedElement(sys, std::move(c));
}

WindowedMatrix window_matrix_from_concrete(const SystemPtr& sys, const Window& w,
                                           const Matrix& x) {
  const int d = sys->algebra()->ambient_dim();
  const int k = w.size();
  if (x.rows() != d * k || x.cols() != d * k)
    throw InvalidInput("concrete window matrix has wrong dimension");
  WindowedMatrix m = WindowedMatrix::zero(sys, w);
  for (int s = 0; s < k; ++s)
    for (int t = 0; t < k; ++t) {
      Matrix e(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e(i, j) = x(i * k + s, j * k + t);
      m.entry(s, t) = std::move(e);
    }
  return m;
}

WindowedMatrix random_window_matrix(const SystemPtr& sys, const Window& w, Rng& rng) {
  WindowedMatrix m = WindowedMatrix::zero(sys, w);
  const int dim = sys->algebra()->dim();
  for (int s = 0; s < w.size(); ++s)
    for (int t = 0; t < w.size(); ++t)
      m.entry(s, t) = sys->algebra()->from_coefficients(random_vector(dim, rng));
  return m;
}

CheckResult check_compatibility(const CrossedSystem& sys, const Window& w,
                                int trials, std::uint64_t seed,
                                const Tolerances& tol) {
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_r(0, sys.group()->order() - 1);
  std::uniform_int_distribution<int> pick_w(0, w.size() - 1);
  const int m = sys.algebra()->dim();
  auto self = sys.shared_from_this();
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    int r = pick_r(rng);
    int s = pick_r(rng);
    AlgebraElement a = sys.algebra()->element_from_coefficients(random_vector(m, rng));
    AlgebraElement b = sys.algebra()->element_from_coefficients(random_vector(m, rng));

    // Crossed-product identity on a single term a s.
    std::vector<AlgebraElement> coeffs(sys.group()->order(), sys.algebra()->zero());
    coeffs[s] = a;
    CrossedElement as(self, std::move(coeffs));
    CrossedElement lhs = group_act(r, module_act(as, b));
    CrossedElement rhs = module_act(group_act(r, as), sys.action().apply(r, b));
    for (int u = 0; u < sys.group()->order(); ++u)
      worst = std::max(worst, frobenius_norm(Matrix(
                                  lhs.coefficient(u).matrix() -
                                  rhs.coefficient(u).matrix())));

    // Windowed identity on a single matrix unit a (x) e_{s,t}.
    int ws = pick_w(rng), wt = pick_w(rng);
    WindowedMatrix unit = WindowedMatrix::matrix_unit(self, w, ws, wt, a.matrix());
    WindowedMatrix lhw = group_act_window(r, module_act_window(unit, b.matrix()));
    WindowedMatrix rhw = module_act_window(group_act_window(r, unit),
                                           sys.action().apply(r, b).matrix());
    worst = std::max(worst, (lhw - rhw).frobenius());
  }
  return CheckResult::residual("compatibility", worst, tol.identity_tol);
}

}  // namespace xprod
