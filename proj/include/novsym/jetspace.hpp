#ifndef NOVSYM_JETSPACE_HPP
#define NOVSYM_JETSPACE_HPP

#include <optional>
#include <vector>

#include "novsym/expr.hpp"

namespace novsym {

/// A differential equation F = 0 with a distinguished leading derivative
/// that F is linear in (coefficient +-1), solved as leading = solved_rhs.
struct Equation {
  std::string name;
  Expr lhs;        // residual F
  JetVar leading;  // derivative eliminated on the solution manifold
  Expr solved_rhs;
  int leading_sign = 1;  // lhs == leading_sign * (leading - solved_rhs)
};

/// Builds an Equation, deriving solved_rhs and checking the linearity and
/// unit-coefficient invariants.
Equation make_equation(std::string name, const Expr& lhs, const JetVar& leading);

/// Euler-Lagrange expression of L with respect to the dependent variable
/// `dep` (jet order of dep in L must be <= 3):
///   E(L) = sum over multi-indices J, |J| <= 3, of (-D)_J dL/ddep_J.
Expr euler_operator(const Expr& lagrangian, const std::string& dep);

/// Substitutes the leading derivative and all of its differential
/// consequences until no eliminable jet remains. The result is the normal
/// form of e on the joint solution manifold of the given equations.
Expr restrict_to_solutions(const Expr& e, const Equation& eq);
Expr restrict_to_solutions(const Expr& e, const std::vector<const Equation*>& eqs);

struct IbpResult {
  Expr remainder;
  Expr potential;
};

/// Greedy integration by parts along `var` ("x" or "t"): e = remainder +
/// D_var(potential) exactly. When `eq` is supplied the loop re-restricts to
/// the solution manifold after each move, so the identity holds modulo the
/// equation instead, which is what the conservation-law reduction needs;
/// the extra move enabled by restriction (raising a factor so the leading
/// derivative appears and can be eliminated) is what empties densities that
/// are only total derivatives on solutions.
IbpResult integrate_by_parts(const Expr& e, const std::string& var,
                             const Equation* eq = nullptr);

/// Exact x-direction variant; remainder + D_x(potential) - e == 0 identically.
inline IbpResult integrate_by_parts_x(const Expr& e) { return integrate_by_parts(e, "x"); }

}  // namespace novsym

#endif
