#include "xprod/cpmaps.hpp"

#include "xprod/coactions.hpp"

namespace xprod {

std::shared_ptr<const OperatorSpace> OperatorSpace::base_algebra(SystemPtr sys) {
  AlgebraPtr a = sys->algebra();
  return std::shared_ptr<const OperatorSpace>(
      new OperatorSpace(Kind::BaseAlgebra, std::move(sys), Window{}, std::move(a)));
}

std::shared_ptr<const OperatorSpace> OperatorSpace::crossed(SystemPtr sys) {
  AlgebraPtr a = sys->represented_algebra();
  return std::shared_ptr<const OperatorSpace>(
      new OperatorSpace(Kind::Crossed, std::move(sys), Window{}, std::move(a)));
}

std::shared_ptr<const OperatorSpace> OperatorSpace::window(SystemPtr sys, Window w) {
  AlgebraPtr a = sys->window_algebra(w);
  return std::shared_ptr<const OperatorSpace>(
      new OperatorSpace(Kind::WindowSp, std::move(sys), std::move(w), std::move(a)));
}

int OperatorSpace::group_order() const { return sys_->group()->order(); }

Matrix OperatorSpace::module_embed(const AlgebraElement& b) const {
  switch (kind_) {
    case Kind::BaseAlgebra:
      return b.matrix();
    case Kind::Crossed:
      return sys_->represent_algebra(b.matrix());
    case Kind::WindowSp:
      return window_module_embed(*sys_, window_, b.matrix(), sys_->action());
  }
  throw InternalError("unreachable");
}

Matrix OperatorSpace::act(int r, const Matrix& x) const {
  switch (kind_) {
    case Kind::BaseAlgebra:
      return sys_->action().apply_matrix(r, x);
    case Kind::Crossed: {
      Matrix u = sys_->represent_group(r);
      return u * x * u.adjoint();
    }
    case Kind::WindowSp:
      return group_act_window(r, window_matrix_from_concrete(sys_, window_, x))
          .concrete();
  }
  throw InternalError("unreachable");
}

Matrix OperatorSpace::coact(const Matrix& x) const {
  switch (kind_) {
    case Kind::BaseAlgebra:
      return coaction_base(*sys_, x);
    case Kind::Crossed:
      return coaction(sys_->from_matrix(x));
    case Kind::WindowSp:
      return window_tensor_shuffle(
          coaction_window(window_matrix_from_concrete(sys_, window_, x)));
  }
  throw InternalError("unreachable");
}

LinearMap::LinearMap(AlgebraPtr domain, int codomain_dim,
                     std::vector<Matrix> images, std::string name)
    : domain_(std::move(domain)), codomain_dim_(codomain_dim),
      images_(std::move(images)), name_(std::move(name)) {
  if (static_cast<int>(images_.size()) != domain_->dim())
    throw InvalidInput("linear map needs one image per domain basis element");
  for (const auto& img : images_)
    if (img.rows() != codomain_dim_ || img.cols() != codomain_dim_)
      throw InvalidInput("image has wrong codomain dimension");
}

LinearMap LinearMap::identity(AlgebraPtr domain, std::string name) {
  std::vector<Matrix> images = domain->basis();
  int k = domain->ambient_dim();
  return LinearMap(std::move(domain), k, std::move(images), std::move(name));
}

LinearMap LinearMap::compose(const LinearMap& outer, const LinearMap& inner,
                             std::string name) {
  std::vector<Matrix> images;
  images.reserve(inner.images_.size());
  for (const auto& img : inner.images_) images.push_back(outer.apply(img));
  if (name.empty()) name = outer.name_ + "." + inner.name_;
  LinearMap out(inner.domain_, outer.codomain_dim_, std::move(images),
                std::move(name));
  out.domain_space_ = inner.domain_space_;
  out.codomain_space_ = outer.codomain_space_;
  return out;
}

Matrix LinearMap::apply(const Matrix& x, double* residual) const {
  Vector coeffs = domain_->coefficients_of(x, residual);
  Matrix out = Matrix::Zero(codomain_dim_, codomain_dim_);
  for (int i = 0; i < domain_->dim(); ++i)
    if (coeffs(i) != Cplx(0.0)) out += coeffs(i) * images_[i];
  return out;
}

Matrix LinearMap::apply_unit() const {
  Matrix out = Matrix::Zero(codomain_dim_, codomain_dim_);
  const Vector& u = domain_->unit_coefficients();
  for (int i = 0; i < domain_->dim(); ++i) out += u(i) * images_[i];
  return out;
}

LinearMap LinearMap::scaled(double factor) const {
  LinearMap out = *this;
  for (auto& img : out.images_) img *= factor;
  return out;
}

LinearMap LinearMap::operator+(const LinearMap& o) const {
  if (o.domain_ != domain_ || o.codomain_dim_ != codomain_dim_)
    throw InvalidInput("sum of maps requires a common domain and codomain");
  LinearMap out = *this;
  for (std::size_t i = 0; i < images_.size(); ++i) out.images_[i] += o.images_[i];
  return out;
}

LinearMap LinearMap::conjugate_domain(const Matrix& b, std::string name) const {
  std::vector<Matrix> images;
  images.reserve(images_.size());
  for (int i = 0; i < domain_->dim(); ++i)
    images.push_back(apply(b * domain_->basis_element(i) * b.adjoint()));
  LinearMap out(domain_, codomain_dim_, std::move(images), std::move(name));
  out.domain_space_ = domain_space_;
  out.codomain_space_ = codomain_space_;
  return out;
}

LinearMap LinearMap::conjugate_codomain(const Matrix& d, std::string name) const {
  if (d.rows() != codomain_dim_ || d.cols() != codomain_dim_)
    throw InvalidInput("codomain conjugator has wrong dimension");
  LinearMap out = *this;
  out.name_ = std::move(name);
  for (auto& img : out.images_) img = d * img * d.adjoint();
  return out;
}

LinearMap& LinearMap::with_spaces(SpacePtr domain_space, SpacePtr codomain_space) {
  domain_space_ = std::move(domain_space);
  codomain_space_ = std::move(codomain_space);
  return *this;
}

Matrix choi_matrix(const LinearMap& map) {
  const auto& dom = *map.domain();
  const int m = dom.dim();
  const int k = map.codomain_dim();
  Matrix choi(m * k, m * k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      choi.block(i * k, j * k, k, k) =
          map.apply(dom.basis_element(i).adjoint() * dom.basis_element(j));
  return choi;
}

namespace {

void domain_unit_guard(const LinearMap& map, const Tolerances& tol) {
  const auto& dom = *map.domain();
  Matrix unit = dom.from_coefficients(dom.unit_coefficients());
  if (spectral_norm(Matrix(unit - Matrix::Identity(dom.ambient_dim(),
                                                   dom.ambient_dim()))) >
      tol.identity_tol)
    throw NotUnital("domain algebra does not contain the unit");
}

}  // namespace

CheckResult verify_cp(const LinearMap& map, CpMode mode, const Tolerances& tol) {
  const std::string label =
      (mode == CpMode::cp ? "cp" : mode == CpMode::ucp ? "ucp" : "ccp");
  const std::string name = map.name().empty() ? label : map.name() + "/" + label;
  double min_eig = 0.0;
  try {
    min_eig = min_hermitian_eigenvalue(choi_matrix(map), tol);
  } catch (const NotHermitian&) {
    return CheckResult::failed(name, -1.0, tol.psd_tol,
                               CheckResult::Kind::MinEigenvalue,
                               "Choi matrix is not Hermitian");
  }
  if (min_eig < -tol.psd_tol)
    return CheckResult::min_eigenvalue(name, min_eig, tol.psd_tol);

  if (mode == CpMode::ucp) {
    double unit_res = 0.0;
    domain_unit_guard(map, tol);
    unit_res = spectral_norm(Matrix(
        map.apply_unit() -
        Matrix::Identity(map.codomain_dim(), map.codomain_dim())));
    if (unit_res > tol.identity_tol)
      return CheckResult::failed(name, unit_res, tol.identity_tol,
                                 CheckResult::Kind::Residual,
                                 "map is not unital");
  } else if (mode == CpMode::ccp) {
    domain_unit_guard(map, tol);
    double norm_at_unit = spectral_norm(map.apply_unit());
    if (norm_at_unit > 1.0 + tol.identity_tol)
      return CheckResult::failed(name, norm_at_unit - 1.0, tol.identity_tol,
                                 CheckResult::Kind::Residual,
                                 "map is not contractive at the unit");
  }
  return CheckResult::min_eigenvalue(name, min_eig, tol.psd_tol);
}

LinearMap compression_map(const Matrix& x, AlgebraPtr domain, std::string name) {
  if (x.rows() != x.cols() || x.rows() != domain->ambient_dim())
    throw InvalidInput("compression operator must be square with the domain's "
                       "ambient dimension");
  std::vector<Matrix> images;
  images.reserve(domain->dim());
  for (int i = 0; i < domain->dim(); ++i)
    images.push_back(x * domain->basis_element(i) * x.adjoint());
  return LinearMap(std::move(domain), static_cast<int>(x.rows()),
                   std::move(images), std::move(name));
}

namespace {

/// Hilbert-Schmidt-orthonormal spanning set of the domain, with images.
struct OrthoDomain {
  std::vector<Matrix> basis;
  std::vector<Matrix> images;
  bool full;  // spans all of M_d
};

OrthoDomain orthonormalize(const LinearMap& map) {
  OrthoDomain out;
  const auto& dom = *map.domain();
  for (int i = 0; i < dom.dim(); ++i) {
    Vector v = vec(dom.basis_element(i));
    for (const auto& b : out.basis) v -= vec(b).dot(v) * vec(b);
    double n = v.norm();
    if (n <= 1e-12) continue;
    Matrix nb = Eigen::Map<const Matrix>(v.data(), dom.ambient_dim(),
                                         dom.ambient_dim()) / n;
    out.images.push_back(map.apply(nb));
    out.basis.push_back(std::move(nb));
  }
  out.full = static_cast<int>(out.basis.size()) ==
             dom.ambient_dim() * dom.ambient_dim();
  return out;
}

Matrix assemble(const OrthoDomain& dom, const std::vector<Matrix>& coeff_blocks,
                bool use_images, int k) {
  const auto& parts = use_images ? dom.images : dom.basis;
  const Eigen::Index d = parts.front().rows();
  Matrix out = Matrix::Zero(d * k, d * k);
  for (std::size_t i = 0; i < parts.size(); ++i)
    out += kron(parts[i], coeff_blocks[i]);
  return out;
}

double alternating_search(const OrthoDomain& dom, int k, int iterations,
                          Rng& rng) {
  const std::size_t m = dom.basis.size();
  const Eigen::Index kd = dom.basis.front().rows() * k;
  // Random feasible start.
  std::vector<Matrix> coeff(m);
  for (auto& c : coeff) c = random_matrix(k, k, rng);
  Matrix x = assemble(dom, coeff, false, k);
  double nx = spectral_norm(x);
  if (nx > 0) x /= nx;

  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    // Decompose the current iterate against the orthonormal basis.
    Matrix val = Matrix::Zero(dom.images.front().rows() * k,
                              dom.images.front().rows() * k);
    for (std::size_t i = 0; i < m; ++i) {
      Matrix ci(k, k);
      const Matrix& b = dom.basis[i];
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) {
          Cplx acc = 0.0;
          for (Eigen::Index a = 0; a < b.rows(); ++a)
            for (Eigen::Index c2 = 0; c2 < b.cols(); ++c2)
              acc += std::conj(b(a, c2)) * x(a * k + p, c2 * k + q);
          ci(p, q) = acc;
        }
      coeff[i] = std::move(ci);
      val += kron(dom.images[i], coeff[i]);
    }
    Eigen::JacobiSVD<Matrix> svd(val, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double sigma = svd.singularValues()(0);
    if (sigma <= best + 1e-13) {
      best = std::max(best, sigma);
      break;
    }
    best = sigma;
    Vector u = svd.matrixU().col(0);
    Vector v = svd.matrixV().col(0);

    // Gradient of <uv*, (theta (x) id_k)(X)> in coefficient space.
    const Eigen::Index kk = dom.images.front().rows();
    std::vector<Matrix> h(m, Matrix::Zero(k, k));
    for (std::size_t i = 0; i < m; ++i) {
      const Matrix& img = dom.images[i];
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) {
          Cplx acc = 0.0;
          for (Eigen::Index a = 0; a < kk; ++a)
            for (Eigen::Index b2 = 0; b2 < kk; ++b2)
              acc += std::conj(u(a * k + p)) * v(b2 * k + q) * img(a, b2);
          h[i](p, q) = std::conj(acc);
        }
    }
    Matrix grad = Matrix::Zero(kd, kd);
    for (std::size_t i = 0; i < m; ++i) grad += kron(dom.basis[i], h[i]);
    if (dom.full) {
      Eigen::JacobiSVD<Matrix> gs(grad, Eigen::ComputeThinU | Eigen::ComputeThinV);
      x = gs.matrixU() * gs.matrixV().adjoint();
    } else {
      double gn = spectral_norm(grad);
      if (gn <= 0) break;
      x = grad / gn;
    }
  }
  return best;
}

}  // namespace

CbNormResult cb_norm(const LinearMap& map, std::uint64_t seed,
                     const CbNormOptions& opts, const Tolerances& tol) {
  CbNormResult result;
  CheckResult cp = verify_cp(map, CpMode::cp, tol);
  result.is_cp = cp.pass;

  OrthoDomain dom = orthonormalize(map);
  if (cp.pass) {
    // For c.p. maps the cb norm is ||theta(1)||, attained at X = 1 (x) I_k.
    result.exact = spectral_norm(map.apply_unit());
    result.lower = *result.exact;
    Rng rng(seed);
    for (int r = 0; r < 8; ++r)
      result.lower = std::max(result.lower,
                              alternating_search(dom, std::min(2, opts.max_level),
                                                 opts.iterations, rng));
    return result;
  }
  Rng rng(seed);
  const int top = std::min(map.codomain_dim(), opts.max_level);
  for (int k = 1; k <= top; ++k)
    for (int r = 0; r < opts.restarts; ++r)
      result.lower = std::max(result.lower,
                              alternating_search(dom, k, opts.iterations, rng));
  return result;
}

std::vector<Matrix> split_group_leg(const Matrix& z, const FiniteGroup& g,
                                    double* residual) {
  const int n = g.order();
  if (z.rows() % n != 0 || z.rows() != z.cols())
    throw InvalidInput("tensor leg split: dimension mismatch");
  const Eigen::Index k = z.rows() / n;
  std::vector<Matrix> parts(n, Matrix::Zero(k, k));
  const int e = g.identity();
  // lambda_s column at the identity has its 1 in row s.
  for (int s = 0; s < n; ++s)
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        parts[s](i, j) = z(i * n + s, j * n + e);
  if (residual) {
    Matrix rebuilt = Matrix::Zero(z.rows(), z.cols());
    for (int s = 0; s < n; ++s) rebuilt += kron(parts[s], regular_unitary(g, s));
    *residual = frobenius_norm(Matrix(rebuilt - z));
  }
  return parts;
}

CheckResult check_equivariance(const LinearMap& map, EquivarianceMode mode,
                               const Tolerances& tol) {
  const auto& dom_space = map.domain_space();
  const auto& cod_space = map.codomain_space();
  if (!dom_space || !cod_space)
    throw StructureMissing("map carries no domain/codomain structure");
  const auto& dom = *map.domain();
  const std::string label = mode == EquivarianceMode::module ? "module"
                            : mode == EquivarianceMode::gmap ? "gmap"
                                                             : "gcomap";
  const std::string name =
      (map.name().empty() ? label : map.name() + "/" + label);
  double worst = 0.0;
  std::string violator;

  if (mode == EquivarianceMode::module) {
    const auto& a = *dom_space->system()->algebra();
    for (int i = 0; i < dom.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) {
        AlgebraElement b = a.element_from_coefficients(
            Vector::Unit(a.dim(), j));
        Matrix lhs = map.apply(dom.basis_element(i) * dom_space->module_embed(b));
        Matrix rhs = map.apply(dom.basis_element(i)) * cod_space->module_embed(b);
        double r = frobenius_norm(Matrix(lhs - rhs));
        if (r > worst) {
          worst = r;
          violator = "basis " + std::to_string(i) + ", module element " +
                     std::to_string(j);
        }
      }
  } else if (mode == EquivarianceMode::gmap) {
    const int n = dom_space->group_order();
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < dom.dim(); ++i) {
        Matrix lhs = map.apply(dom_space->act(r, dom.basis_element(i)));
        Matrix rhs = cod_space->act(r, map.apply(dom.basis_element(i)));
        double res = frobenius_norm(Matrix(lhs - rhs));
        if (res > worst) {
          worst = res;
          violator = "r = " +
                     dom_space->system()->group()->label(r) + ", basis " +
                     std::to_string(i);
        }
      }
  } else {
    const auto& g = *dom_space->system()->group();
    for (int i = 0; i < dom.dim(); ++i) {
      Matrix dz = dom_space->coact(dom.basis_element(i));
      double split_res = 0.0;
      std::vector<Matrix> legs = split_group_leg(dz, g, &split_res);
      Matrix lhs = Matrix::Zero(map.codomain_dim() * g.order(),
                                map.codomain_dim() * g.order());
      double span_res = 0.0;
      for (int s = 0; s < g.order(); ++s) {
        double r = 0.0;
        lhs += kron(map.apply(legs[s], &r), regular_unitary(g, s));
        span_res = std::max(span_res, r);
      }
      Matrix rhs = cod_space->coact(map.apply(dom.basis_element(i)));
      double res = std::max(frobenius_norm(Matrix(lhs - rhs)),
                            std::max(split_res, span_res));
      if (res > worst) {
        worst = res;
        violator = "basis " + std::to_string(i);
      }
    }
  }
  CheckResult out = CheckResult::residual(name, worst, tol.identity_tol);
  if (!out.pass) out.detail = "largest residual at " + violator;
  return out;
}

CheckResult check_window_family(const WindowFamily& family, const Tolerances& tol) {
  const auto& g = *family.sys->group();
  // The codomain G-action depends on where the family lands: conjugation by
  // the canonical unitaries on the crossed product, window translation for
  // window-valued families (theta_{rF}: M_{rF} -> M_{rF}).
  const bool window_valued =
      !family.maps.empty() && family.maps.front().codomain_space() &&
      family.maps.front().codomain_space()->kind() == OperatorSpace::Kind::WindowSp;
  double worst = 0.0;
  for (int r = 0; r < g.order(); ++r) {
    Window wr = family.base.translated(g, r);
    const LinearMap& psi_r = family.map_at(r);
    const int m = family.sys->algebra()->dim();
    for (int t = 0; t < g.order(); ++t) {
      const LinearMap& psi_tr = family.map_at(g.mul(t, r));
      Matrix ut = family.sys->represent_group(t);
      for (int s = 0; s < wr.size(); ++s)
        for (int u = 0; u < wr.size(); ++u)
          for (int i = 0; i < m; ++i) {
            WindowedMatrix unit = WindowedMatrix::matrix_unit(
                family.sys, wr, s, u,
                family.sys->algebra()->basis_element(i));
            Matrix lhs = psi_tr.apply(
                translate_window_matrix(t, unit).concrete());
            Matrix rhs;
            if (window_valued) {
              WindowedMatrix value = window_matrix_from_concrete(
                  family.sys, wr, psi_r.apply(unit.concrete()));
              rhs = translate_window_matrix(t, value).concrete();
            } else {
              rhs = ut * psi_r.apply(unit.concrete()) * ut.adjoint();
            }
            worst = std::max(worst, frobenius_norm(Matrix(lhs - rhs)));
          }
    }
  }
  return CheckResult::residual("window-family", worst, tol.identity_tol);
}

CheckResult check_window_cofamily(const WindowFamily& family, const Tolerances& tol) {
  double worst = 0.0;
  for (std::size_t r = 0; r < family.maps.size(); ++r) {
    CheckResult res = check_equivariance(family.maps[r], EquivarianceMode::gcomap, tol);
    worst = std::max(worst, res.witness);
  }
  return CheckResult::residual("window-cofamily", worst, tol.identity_tol);
}

}  // namespace xprod
