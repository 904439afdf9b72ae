#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "novsym/fixtures.hpp"
#include "novsym/parser.hpp"
#include "novsym/symmetry.hpp"

using namespace novsym;

namespace {

Expr P(const std::string& s) { return parse(s); }

const VectorField& basis_field(const std::string& name) {
  for (const auto& f : novikov_basis())
    if (f.name == name) return f;
  throw std::runtime_error("no such basis field " + name);
}

VectorField random_point_field(unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<Expr> pool = {P("1"), P("t"), P("x"), P("u"), P("t*u"), P("exp(2*x)"),
                            P("exp(-x)*u"), P("x^2"), P("0")};
  auto pick = [&] { return pool[rng() % pool.size()].scale(Rational(1 + static_cast<long>(rng() % 3))); };
  return make_vector_field("R" + std::to_string(seed), pick(), pick(), pick());
}

}  // namespace

TEST_CASE("characteristics of the basis fields") {
  CHECK(characteristic(basis_field("X5")) == P("u + 2*t*u_t"));
  CHECK(characteristic(basis_field("X1")) == P("-u_t"));
  CHECK(characteristic(basis_field("X3")) == P("exp(2*x)*u - exp(2*x)*u_x"));
}

TEST_CASE("point fields reject jet coefficients") {
  CHECK_THROWS_AS(make_vector_field("bad", P("u_x"), P("0"), P("0")), AlgebraError);
}

TEST_CASE("prolongation coefficients") {
  // translations prolong to zero
  ProlongedField p2 = prolong(basis_field("X2"), 3);
  for (const auto& [j, c] : p2.coeffs) {
    CAPTURE(j.to_string());
    CHECK(c.is_zero());
  }

  // dilation: coefficient of d/du_t is D_t(u + 2t u_t) - 2t u_tt = 3 u_t
  ProlongedField p5 = prolong(basis_field("X5"), 2);
  CHECK(p5.coeffs.at(JetVar{"u", 1, 0}) == P("3*u_t"));
  CHECK(p5.coeffs.at(JetVar{"u", 0, 0}) == P("u"));

  // exponential field: coefficient of d/du_x is D_x(e^{2x}(u - u_x)) + e^{2x} u_xx
  ProlongedField p3 = prolong(basis_field("X3"), 1);
  CHECK(p3.coeffs.at(JetVar{"u", 0, 1}) == P("2*exp(2*x)*u - exp(2*x)*u_x"));

  // spot re-derivation of the recursive relation for a random field
  VectorField f = random_point_field(99);
  ProlongedField pf = prolong(f, 2);
  Expr w = characteristic(f);
  Expr expect = total_derivative(total_derivative(w, "t"), "x") +
                f.xi_t * Expr::atom(Atom::jet_var("u", 2, 1)) +
                f.xi_x * Expr::atom(Atom::jet_var("u", 1, 2));
  CHECK(pf.coeffs.at(JetVar{"u", 1, 1}) == expect);
}

TEST_CASE("symmetry verification for the basis") {
  const Equation& nov = novikov();
  for (const auto& f : novikov_basis()) {
    CAPTURE(f.name);
    SymmetryReport r = check_symmetry(f, nov);
    CHECK(r.is_symmetry);
    CHECK(r.on_shell_residual.is_zero());
  }
  // dilation acts off shell by an exact factor 3
  SymmetryReport r5 = check_symmetry(basis_field("X5"), nov);
  REQUIRE(r5.off_shell_multiplier.has_value());
  CHECK(*r5.off_shell_multiplier == Expr(3));
}

TEST_CASE("u d/du is not a symmetry") {
  SymmetryReport r = check_symmetry(scaling_u_field(), novikov());
  CHECK_FALSE(r.is_symmetry);
  CHECK_FALSE(r.on_shell_residual.is_zero());
}

TEST_CASE("lie bracket examples") {
  const auto& b = novikov_basis();
  VectorField z12 = lie_bracket(b[0], b[1]);
  CHECK(z12.xi_t.is_zero());
  CHECK(z12.xi_x.is_zero());
  CHECK(z12.eta.is_zero());

  CHECK(same_field(lie_bracket(b[1], b[2]), scale(b[2], Rational(2))));
  CHECK(same_field(lie_bracket(b[0], b[4]), scale(b[0], Rational(-2))));
}

TEST_CASE("bracket antisymmetry and jacobi identity") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    VectorField x = random_point_field(seed);
    VectorField y = random_point_field(seed + 100);
    VectorField z = random_point_field(seed + 200);
    VectorField xy = lie_bracket(x, y);
    VectorField yx = lie_bracket(y, x);
    CHECK(same_field(xy, scale(yx, Rational(-1))));
    VectorField jac = add(add(lie_bracket(x, lie_bracket(y, z)),
                              lie_bracket(y, lie_bracket(z, x))),
                          lie_bracket(z, lie_bracket(x, y)));
    CHECK(jac.xi_t.is_zero());
    CHECK(jac.xi_x.is_zero());
    CHECK(jac.eta.is_zero());
  }
}

TEST_CASE("closure of the five-dimensional algebra") {
  const auto& b = novikov_basis();
  ClosureResult r = closure_check(b);
  REQUIRE(r.closed);
  // [X2, X3] = 2 X3 and [X1, X5] = -2 X1
  CHECK(r.table[1][2][2] == Rational(2));
  CHECK(r.table[0][4][0] == Rational(-2));
  for (size_t i = 0; i < b.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      for (size_t k = 0; k < b.size(); ++k)
        CHECK(r.table[i][j][k] == -r.table[j][i][k]);
}

TEST_CASE("single generator is trivially closed") {
  ClosureResult r = closure_check({basis_field("X1")});
  REQUIRE(r.closed);
  CHECK(r.table[0][0][0] == Rational(0));
}

TEST_CASE("independent commuting pair closes") {
  ClosureResult r = closure_check({basis_field("X2"), scaling_u_field()});
  REQUIRE(r.closed);
  CHECK(r.table[0][1] == std::vector<Rational>{Rational(0), Rational(0)});
}

TEST_CASE("non-closed set is detected") {
  // [d/dt, t d/dx] = d/dx, which lies outside the span of the pair
  VectorField y = make_vector_field("Y", P("0"), P("t"), P("0"));
  ClosureResult r = closure_check({basis_field("X1"), y});
  CHECK_FALSE(r.closed);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("x reflection conjugates X3 into the reverse of X4") {
  const auto& b = novikov_basis();
  VectorField mapped = reflect_x_field(b[2]);
  CHECK(same_field(mapped, scale(b[3], Rational(-1))));
  VectorField back = reflect_x_field(b[3]);
  CHECK(same_field(back, scale(b[2], Rational(-1))));
}

TEST_CASE("determining system: basis annihilates, spurious field fails") {
  const Equation& nov = novikov();
  DeterminingSystem sys = determining_system(nov);
  CHECK(sys.constraints.size() >= 4);
  for (const auto& c : sys.constraints) {
    for (const auto& j : jets_of(c)) {
      CAPTURE(c.to_string());
      CHECK(j.order() == 0);  // splitting complete
    }
  }

  auto all_zero = [&](const Expr& xt, const Expr& xx, const Expr& eta) {
    for (const auto& r : evaluate_constraints(sys, xt, xx, eta))
      if (!r.is_zero()) return false;
    return true;
  };
  CHECK(all_zero(P("1"), P("0"), P("0")));
  CHECK(all_zero(P("0"), P("1"), P("0")));
  CHECK(all_zero(P("0"), P("exp(2*x)"), P("exp(2*x)*u")));
  CHECK(all_zero(P("0"), P("exp(-2*x)"), P("-exp(-2*x)*u")));
  CHECK(all_zero(P("-2*t"), P("0"), P("u")));
  CHECK_FALSE(all_zero(P("0"), P("0"), P("u")));
}

TEST_CASE("determining system agrees with direct symmetry checks") {
  const Equation& nov = novikov();
  DeterminingSystem sys = determining_system(nov);
  for (unsigned seed : {31u, 32u, 33u, 34u}) {
    VectorField f = random_point_field(seed);
    bool direct = check_symmetry(f, nov).is_symmetry;
    bool via_system = true;
    for (const auto& r : evaluate_constraints(sys, f.xi_t, f.xi_x, f.eta))
      if (!r.is_zero()) via_system = false;
    CAPTURE(f.name);
    CHECK(direct == via_system);
  }
}

TEST_CASE("prolonged fields act as derivations") {
  const Equation& nov = novikov();
  std::vector<Expr> exprs = {P("u*u_x"), P("u_t + u_xx"), P("t*u^2"), P("exp(2*x)*u_x")};
  for (unsigned seed : {41u, 42u, 43u}) {
    VectorField f = random_point_field(seed);
    ProlongedField pf = prolong(f, 3);
    for (size_t i = 0; i + 1 < exprs.size(); ++i) {
      const Expr& a = exprs[i];
      const Expr& b = exprs[i + 1];
      Expr lhs = apply_prolonged(pf, a * b);
      Expr rhs = apply_prolonged(pf, a) * b + a * apply_prolonged(pf, b);
      CHECK(lhs == rhs);
    }
    // the action commutes with scaling and addition
    CHECK(apply_prolonged(pf, exprs[0] + exprs[1]) ==
          apply_prolonged(pf, exprs[0]) + apply_prolonged(pf, exprs[1]));
  }
  (void)nov;
}
