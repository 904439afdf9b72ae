#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "novsym/adjoint.hpp"
#include "novsym/fixtures.hpp"
#include "novsym/parser.hpp"

using namespace novsym;

namespace {
Expr P(const std::string& s) { return parse(s); }
}

TEST_CASE("formal lagrangian") {
  FormalLagrangian l = formal_lagrangian(novikov());
  CHECK(l.expr == P("v*(u_t - u_txx + 4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx)"));
  CHECK((l.expr - l.symmetric_form).is_zero());

  Equation simple = make_equation("heat-free", P("u_t"), JetVar{"u", 1, 0});
  CHECK(formal_lagrangian(simple).expr == P("v*u_t"));

  FormalLagrangian lch = formal_lagrangian(camassa_holm());
  CHECK(lch.expr == P("v") * camassa_holm().lhs);
}

TEST_CASE("adjoint residual of the cubic equation") {
  Expr fstar = adjoint_equation(novikov());
  Expr expected =
      P("-v_t + v_txx - 4*u^2*v_x + 3*u*v_x*u_xx - 3*v*u_x*u_xx + 3*u*u_x*v_xx + u^2*v_xxx");
  CHECK(fstar == expected);

  Equation simple = make_equation("transport", P("u_t"), JetVar{"u", 1, 0});
  CHECK(adjoint_equation(simple) == P("-v_t"));
}

TEST_CASE("adjoint of the two lagrangian forms agree") {
  FormalLagrangian l = formal_lagrangian(novikov());
  CHECK(euler_operator(l.expr, "u") == euler_operator(l.symmetric_form, "u"));
}

TEST_CASE("strict self-adjointness") {
  SelfAdjointness nov = check_strict_self_adjointness(novikov());
  REQUIRE(nov.holds);
  CHECK(*nov.factor == Expr(-1));

  // F*|_{v=u} + F == 0 exactly
  Expr fstar = adjoint_equation(novikov());
  Expr at_u = substitute_base_jets(fstar, "v", [](const JetVar& j) {
    return Expr::atom(Atom::jet_var("u", j.t_order, j.x_order));
  });
  CHECK((at_u + novikov().lhs).is_zero());

  SelfAdjointness ch = check_strict_self_adjointness(camassa_holm());
  CHECK(ch.holds);

  Equation burgers =
      make_equation("burgers", P("u_t + u*u_x - u_xx"), JetVar{"u", 1, 0});
  CHECK_FALSE(check_strict_self_adjointness(burgers).holds);
}

TEST_CASE("substitution checks") {
  const Equation& nov = novikov();
  SubstitutionCheck lin = check_substitution(nov, P("alpha*u"));
  CHECK(lin.vanishes);
  CHECK_FALSE(lin.degenerate);

  SubstitutionCheck quad = check_substitution(nov, P("u^2"));
  CHECK_FALSE(quad.vanishes);

  SubstitutionCheck zero = check_substitution(nov, P("0"));
  CHECK(zero.vanishes);
  CHECK(zero.degenerate);

  CHECK_THROWS_AS(check_substitution(nov, P("u_x")), AlgebraError);
}

TEST_CASE("strictness implies the v=u substitution vanishes") {
  for (const Equation* eq : {&novikov(), &camassa_holm()}) {
    if (check_strict_self_adjointness(*eq).holds)
      CHECK(check_substitution(*eq, P("u")).vanishes);
  }
}

TEST_CASE("adjoint residual as an equation in v") {
  Equation adj = adjoint_as_equation(novikov());
  CHECK(adj.leading.base == "v");
  CHECK(adj.leading_sign == 1);
  CHECK(restrict_to_solutions(adj.lhs, adj).is_zero());
}
