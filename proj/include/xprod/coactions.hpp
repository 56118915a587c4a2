#pragma once

#include "xprod/crossed.hpp"

namespace xprod {

class LinearMap;

/// The canonical reduced coaction delta(a s) = a s (x) lambda_s, returned
/// concretely on H (x) l^2(G) (x) l^2(G) (group-algebra leg minor).
Matrix coaction(const CrossedElement& x);

/// The window coaction delta_F(a (x) e_{s,t}) = (a (x) lambda_{bar(s) bar(t)^-1})
/// (x) e_{s,t}; entries land in A (x) C*_r(G) with the lifted action
/// alpha (x) id.
WindowedMatrix coaction_window(const WindowedMatrix& m);

/// The trivial restricted coaction delta_A(a) = a (x) lambda_e.
Matrix coaction_base(const CrossedSystem& sys, const Matrix& a);

/// Reshuffle M_W(A (x) C*_r(G)) into (M_W(A)) (x) C*_r(G) layout (window-space
/// leg major, group-algebra leg minor) — the canonical identification used by
/// the comap identities.
Matrix window_tensor_shuffle(const WindowedMatrix& tensored);

/// Both comodule identities delta(x . b) = delta(x) . delta_A(b) (crossed and
/// windowed versions) over random draws.
CheckResult check_comodule(const CrossedSystem& sys, const Window& w, int trials,
                           std::uint64_t seed, const Tolerances& tol = {});

/// The two intertwining identities of the comodule factorization:
/// (phi_F (x) id) delta = delta_F phi_F on the coefficient basis and
/// (psi_F (x) id) delta_F = delta psi_F on the matrix units.
CheckResult check_comap_pair(const LinearMap& phi_f, const LinearMap& psi_f,
                             const Tolerances& tol = {});

}  // namespace xprod
