#pragma once

#include <optional>

#include "xprod/crossed.hpp"

namespace xprod {

/// A concrete matrix space carrying the structures equivariance checks need:
/// the right A-module action, the G-action, and the canonical coaction.
/// Three kinds are enough for everything the toolkit builds: the base algebra
/// A, the represented crossed product, and windowed matrix spaces M_W(A).
class OperatorSpace {
 public:
  enum class Kind { BaseAlgebra, Crossed, WindowSp };

  static std::shared_ptr<const OperatorSpace> base_algebra(SystemPtr sys);
  static std::shared_ptr<const OperatorSpace> crossed(SystemPtr sys);
  static std::shared_ptr<const OperatorSpace> window(SystemPtr sys, Window w);

  Kind kind() const { return kind_; }
  const SystemPtr& system() const { return sys_; }
  const Window& window() const { return window_; }
  /// Concrete star algebra of the space (the coefficient solver).
  const AlgebraPtr& algebra() const { return algebra_; }
  int group_order() const;

  /// Matrix that implements the right module action x -> x . b as right
  /// multiplication.
  Matrix module_embed(const AlgebraElement& b) const;
  /// r . x; for window spaces this requires the window to be closed under r.
  Matrix act(int r, const Matrix& x) const;
  /// The canonical coaction into space (x) C*_r(G), group-algebra leg minor.
  Matrix coact(const Matrix& x) const;

 private:
  OperatorSpace(Kind kind, SystemPtr sys, Window w, AlgebraPtr algebra)
      : kind_(kind), sys_(std::move(sys)), window_(std::move(w)),
        algebra_(std::move(algebra)) {}
  Kind kind_;
  SystemPtr sys_;
  Window window_;
  AlgebraPtr algebra_;
};

using SpacePtr = std::shared_ptr<const OperatorSpace>;

/// A linear map between concrete algebras, stored as the images of a domain
/// basis. Optional domain/codomain space handles make it checkable as a
/// module map, G-map, or G-comap.
class LinearMap {
 public:
  LinearMap(AlgebraPtr domain, int codomain_dim, std::vector<Matrix> images,
            std::string name = {});

  template <typename Fn>
  static LinearMap from_function(AlgebraPtr domain, int codomain_dim, Fn&& fn,
                                 std::string name = {}) {
    std::vector<Matrix> images;
    images.reserve(domain->dim());
    for (int i = 0; i < domain->dim(); ++i)
      images.push_back(fn(domain->basis_element(i)));
    return LinearMap(std::move(domain), codomain_dim, std::move(images),
                     std::move(name));
  }

  static LinearMap identity(AlgebraPtr domain, std::string name = "identity");
  /// outer . inner; the images of inner must lie in outer's domain span.
  static LinearMap compose(const LinearMap& outer, const LinearMap& inner,
                           std::string name = {});

  const AlgebraPtr& domain() const { return domain_; }
  int codomain_dim() const { return codomain_dim_; }
  const std::vector<Matrix>& images() const { return images_; }
  const std::string& name() const { return name_; }

  /// Evaluate at x (least-squares over the domain basis). `residual` reports
  /// how far x is from the domain span.
  Matrix apply(const Matrix& x, double* residual = nullptr) const;
  Matrix apply_unit() const;

  LinearMap scaled(double factor) const;
  LinearMap operator+(const LinearMap& o) const;
  /// x -> map(b x b*).
  LinearMap conjugate_domain(const Matrix& b, std::string name = {}) const;
  /// x -> d map(x) d*.
  LinearMap conjugate_codomain(const Matrix& d, std::string name = {}) const;

  LinearMap& with_spaces(SpacePtr domain_space, SpacePtr codomain_space);
  const SpacePtr& domain_space() const { return domain_space_; }
  const SpacePtr& codomain_space() const { return codomain_space_; }

 private:
  AlgebraPtr domain_;
  int codomain_dim_;
  std::vector<Matrix> images_;
  std::string name_;
  SpacePtr domain_space_;
  SpacePtr codomain_space_;
};

/// Block matrix [theta(b_i* b_j)] over the domain basis; positive
/// semidefinite exactly when theta is completely positive (reduces to the
/// usual Choi matrix for full matrix domains).
Matrix choi_matrix(const LinearMap& map);

enum class CpMode { cp, ucp, ccp };

/// Complete positivity through the smallest Choi eigenvalue; ucp adds
/// ||theta(1) - 1|| <= identity_tol, ccp adds ||theta(1)|| <= 1 + identity_tol.
CheckResult verify_cp(const LinearMap& map, CpMode mode, const Tolerances& tol = {});

struct CbNormOptions {
  int restarts = 64;
  int iterations = 40;
  /// Tensor levels searched are 1..min(codomain_dim, max_level).
  int max_level = 6;
};

struct CbNormResult {
  double lower = 0.0;                 // attained value of ||(theta (x) id_k)(X)||, ||X|| <= 1
  std::optional<double> exact;        // ||theta(1)|| when theta verifies as c.p.
  bool is_cp = false;
};

/// Completely bounded norm: exact formula for verified c.p. maps, alternating
/// maximization lower bound otherwise.
CbNormResult cb_norm(const LinearMap& map, std::uint64_t seed = 1,
                     const CbNormOptions& opts = {}, const Tolerances& tol = {});

/// The compression m -> X m X*; completely positive by construction.
LinearMap compression_map(const Matrix& x, AlgebraPtr domain, std::string name = {});

enum class EquivarianceMode { module, gmap, gcomap };

/// Checks the registered identity on the domain basis:
///   module: theta(x . b) = theta(x) . b for all basis b of A,
///   gmap:   theta(r . x) = r . theta(x) for all r in G,
///   gcomap: delta_D(theta(x)) = (theta (x) id)(delta_B(x)).
/// Throws StructureMissing when the needed space handles are absent.
CheckResult check_equivariance(const LinearMap& map, EquivarianceMode mode,
                               const Tolerances& tol = {});

/// Splits z in Space (x) C*_r(G) (group leg minor) into its lambda
/// coefficients; `residual` reports the reconstruction error.
std::vector<Matrix> split_group_leg(const Matrix& z, const FiniteGroup& g,
                                    double* residual = nullptr);

/// A translation-indexed family {psi_{rF}: M_{rF}(A) -> B}; the index set is
/// the group acting on windows by left translation.
struct WindowFamily {
  SystemPtr sys;
  Window base;
  std::vector<LinearMap> maps;  // maps[r] acts on M_{rF}(A)
  bool cofamily = false;

  const LinearMap& map_at(int r) const { return maps.at(r); }
};

/// Def-2.7-style family identity: psi_{t.i}(t . m) = t . psi_i(m) over all
/// pairs (t, i) and the matrix-unit basis of each M_{rF}(A).
CheckResult check_window_family(const WindowFamily& family, const Tolerances& tol = {});

/// Cofamily identity: (psi_i (x) id) delta_F = delta psi_i per index.
CheckResult check_window_cofamily(const WindowFamily& family, const Tolerances& tol = {});

}  // namespace xprod
