#ifndef NOVSYM_ADJOINT_HPP
#define NOVSYM_ADJOINT_HPP

#include <optional>

#include "novsym/jetspace.hpp"

namespace novsym {

/// v*F together with its symmetrized rendering. Under canonical jet
/// coordinates the two expressions are identical; the symmetric weighting of
/// the mixed third-order slots matters only for the term-by-term
/// differentiation pattern of the conservation-vector formula, which reads
/// it off via slot multiplicities.
struct FormalLagrangian {
  Expr expr;
  Expr symmetric_form;
};

FormalLagrangian formal_lagrangian(const Equation& eq);

/// F* = E_u(v*F).
Expr adjoint_equation(const Equation& eq);

/// The adjoint residual as an Equation solved for its own leading
/// derivative (v_txx for the equations treated here); used for joint
/// solution-manifold restrictions.
Equation adjoint_as_equation(const Equation& eq);

struct SelfAdjointness {
  bool holds = false;
  std::optional<Expr> factor;  // lambda with F*|_{v=u} = lambda*F
};

/// Strict self-adjointness: substitute v = u into F* and test whether the
/// result is an exact multiple of F.
SelfAdjointness check_strict_self_adjointness(const Equation& eq);

struct SubstitutionCheck {
  bool vanishes = false;
  bool degenerate = false;  // phi == 0 substitution
  Expr residual;
};

/// Nonlinear-self-adjointness test of a candidate substitution v = phi(t,x,u):
/// v-jets expand through total derivatives, then the result is restricted to
/// the solution manifold of the u-equation.
SubstitutionCheck check_substitution(const Equation& eq, const Expr& phi);

}  // namespace novsym

#endif
