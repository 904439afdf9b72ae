#ifndef NOVSYM_SYMMETRY_HPP
#define NOVSYM_SYMMETRY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novsym/jetspace.hpp"

namespace novsym {

/// A point vector field xi_t d/dt + xi_x d/dx + eta d/du with coefficients
/// in (t, x, u); no jet of positive order may appear.
struct VectorField {
  Expr xi_t;
  Expr xi_x;
  Expr eta;
  std::string name;
};

VectorField make_vector_field(std::string name, Expr xi_t, Expr xi_x, Expr eta);
VectorField scale(const VectorField& f, const Rational& r);
VectorField add(const VectorField& a, const VectorField& b);
bool same_field(const VectorField& a, const VectorField& b);

/// Characteristic W = eta - xi_t*u_t - xi_x*u_x.
Expr characteristic(const VectorField& f);

struct ProlongedField {
  VectorField base;
  int order = 0;
  std::map<JetVar, Expr> coeffs;  // includes order zero: coeffs[u] = eta
};

/// Prolongation to jet order `order`; coefficient of d/du_J is
/// D_J(W) + xi_t*u_{J+t} + xi_x*u_{J+x}.
ProlongedField prolong(const VectorField& f, int order);

/// Action of the prolonged field on an expression (includes transport of the
/// explicit t and x dependence).
Expr apply_prolonged(const ProlongedField& pf, const Expr& f);

struct SymmetryReport {
  bool is_symmetry = false;
  Expr on_shell_residual;
  std::optional<Expr> off_shell_multiplier;  // lambda with pr X(F) = lambda*F, when exact
};

SymmetryReport check_symmetry(const VectorField& f, const Equation& eq);

/// Linear homogeneous constraints on opaque infinitesimals xi0(t,x,u),
/// xi1(t,x,u), eta(t,x,u); every constraint is free of positive-order jets.
struct DeterminingSystem {
  std::vector<Expr> constraints;
};

DeterminingSystem determining_system(const Equation& eq);

/// Substitutes concrete coefficient expressions for the opaque unknowns and
/// returns the residual of every constraint.
std::vector<Expr> evaluate_constraints(const DeterminingSystem& sys, const Expr& xi_t,
                                       const Expr& xi_x, const Expr& eta);

/// [X, Y] computed coefficient-wise as X(Y^i) - Y(X^i).
VectorField lie_bracket(const VectorField& a, const VectorField& b);

struct ClosureResult {
  bool closed = true;
  /// table[i][j][k]: coefficient of basis k in [X_i, X_j]
  std::vector<std::vector<std::vector<Rational>>> table;
  std::string failure;
};

/// Expresses every pairwise bracket exactly in the basis (rational linear
/// algebra on coefficient normal forms); fails if a bracket leaves the span.
ClosureResult closure_check(const std::vector<VectorField>& basis);

/// Pushforward under the reflection x -> -x (coefficients substituted,
/// d/dx component negated).
VectorField reflect_x_field(const VectorField& f);

}  // namespace novsym

#endif
