#include "novsym/adjoint.hpp"

namespace novsym {

FormalLagrangian formal_lagrangian(const Equation& eq) {
  Expr v = Expr::atom(Atom::jet_var("v", 0, 0));
  Expr l = v * eq.lhs;
  return FormalLagrangian{l, l};
}

Expr adjoint_equation(const Equation& eq) {
  return euler_operator(formal_lagrangian(eq).expr, "u");
}

Equation adjoint_as_equation(const Equation& eq) {
  Expr fstar = adjoint_equation(eq);
  JetVar lead{"v", eq.leading.t_order, eq.leading.x_order};
  return make_equation(eq.name + "-adjoint", fstar, lead);
}

namespace {

Expr substitute_v_jets(const Expr& e, const Expr& phi) {
  // v_{a,b} -> D_t^a D_x^b (phi)
  std::map<std::pair<int, int>, Expr> memo;
  return substitute_base_jets(e, "v", [&](const JetVar& j) {
    auto key = std::make_pair(j.t_order, j.x_order);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Expr d = total_derivative_n(phi, "t", j.t_order);
    d = total_derivative_n(d, "x", j.x_order);
    return memo.emplace(key, std::move(d)).first->second;
  });
}

}  // namespace

SelfAdjointness check_strict_self_adjointness(const Equation& eq) {
  Expr fstar = adjoint_equation(eq);
  Expr at_u = substitute_base_jets(fstar, "v", [](const JetVar& j) {
    return Expr::atom(Atom::jet_var("u", j.t_order, j.x_order));
  });
  SelfAdjointness out;
  Atom lead = Atom::jet_var(eq.leading.base, eq.leading.t_order, eq.leading.x_order);
  try {
    auto [coeff, rest] = split_linear(at_u, lead);
    (void)rest;
    Expr lambda = coeff.scale(Rational(eq.leading_sign));
    if ((at_u - lambda * eq.lhs).is_zero()) {
      out.holds = true;
      out.factor = lambda;
    }
  } catch (const AlgebraError&) {
    // nonlinear in the leading derivative: not a multiple of F
  }
  return out;
}

SubstitutionCheck check_substitution(const Equation& eq, const Expr& phi) {
  for (const auto& j : jets_of(phi))
    if (j.order() > 0)
      throw AlgebraError("substitution must be a point function of (t, x, u), found " +
                         j.to_string());
  SubstitutionCheck out;
  out.degenerate = phi.is_zero();
  Expr fstar = adjoint_equation(eq);
  Expr substituted = substitute_v_jets(fstar, phi);
  out.residual = restrict_to_solutions(substituted, eq);
  out.vanishes = out.residual.is_zero();
  return out;
}

}  // namespace novsym
