#ifndef NOVSYM_CONSLAW_HPP
#define NOVSYM_CONSLAW_HPP

#include <optional>

#include "novsym/adjoint.hpp"
#include "novsym/symmetry.hpp"

namespace novsym {

enum class VectorStage { Raw, Restricted, Reduced };

/// A conserved-vector candidate (C^t, C^x). When `multiplier` is present the
/// off-shell identity D_t(c_t) + D_x(c_x) = multiplier * F holds exactly.
struct ConservedVector {
  Expr c_t;
  Expr c_x;
  std::optional<Expr> multiplier;
  std::string generator;
  VectorStage stage = VectorStage::Raw;
};

/// Conservation-vector construction from a symmetry and the formal
/// Lagrangian, with the mixed third-order slots weighted symmetrically:
///   C^i = W [dL/du_i - D_j(dL/du_ij) + D_j D_k(dL/du_ijk)]
///       + D_j(W) [dL/du_ij - D_k(dL/du_ijk)] + D_j D_k(W) dL/du_ijk,
/// summed over ordered index tuples in {t, x}; v stays symbolic.
ConservedVector conserved_vector_raw(const VectorField& f, const Equation& eq);

/// v := u (valid for strictly self-adjoint equations) followed by
/// restriction of both components to the solution manifold.
ConservedVector eliminate_nonlocal(const ConservedVector& cv, const Equation& eq);

/// Reduction pipeline: restrict, integrate C^t by parts in x on the solution
/// manifold (C^t = A + D_x B), transfer the potential to the flux
/// (C^x += D_t B) and simplify the flux on the manifold.
ConservedVector reduce_vector(const ConservedVector& cv, const Equation& eq);

/// True when the vector is equivalent to (0, 0): restriction plus
/// total-derivative transfer in both directions empties both components.
bool is_trivial(const ConservedVector& cv, const Equation& eq);

struct DivergenceResult {
  bool exact = false;
  Expr multiplier;
  Expr remainder;  // nonzero when the divergence is not a multiple of F
};

/// Computes D_t(c_t) + D_x(c_x) and divides exactly by F (polynomial
/// division in the leading derivative).
DivergenceResult verify_divergence(const ConservedVector& cv, const Equation& eq);

}  // namespace novsym

#endif
