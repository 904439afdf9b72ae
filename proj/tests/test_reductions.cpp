#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "novsym/fixtures.hpp"
#include "novsym/parser.hpp"
#include "novsym/reductions.hpp"

using namespace novsym;

namespace {

Expr P(const std::string& s) { return parse(s); }

Reduction reduce_novikov(Ansatz a, int sign = 1) {
  return reduce(make_reduction_spec(a, sign), novikov());
}

double fd_derivative(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("steady reduction integrates once") {
  Reduction r = reduce_novikov(Ansatz::Steady);
  REQUIRE(r.ode.has_value());
  CHECK(r.ode->residual == P("u^3*u_xx - u^4 - A"));
  CHECK(r.ode->order == 2);
  CHECK(r.substituted == P("4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx"));
  // soundness: u * (substituted) is the exact derivative of u^4 - u^3 u_xx
  CHECK(P("u") * r.substituted == total_derivative(P("u^4 - u^3*u_xx"), "x"));
}

TEST_CASE("exponential profiles solve the equation identically") {
  for (int sign : {1, -1}) {
    Reduction r = reduce_novikov(Ansatz::ExpProfile, sign);
    CAPTURE(sign);
    CHECK(r.identically_zero);
    CHECK(r.substituted.is_zero());
  }
}

TEST_CASE("scaling reduction") {
  Reduction r = reduce_novikov(Ansatz::Scaling);
  REQUIRE(r.ode.has_value());
  CHECK(r.ode->residual == P("4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx + 1/2*u_xx - 1/2*u"));
  CHECK(r.ode->order == 3);
  REQUIRE(r.factored_prefactor.has_value());
  CHECK(*r.factored_prefactor == P("t^(-3/2)"));
  // soundness: prefactor times profile residual reproduces the substitution
  Expr back = substitute_base_jets(r.ode->residual, "u", [](const JetVar& j) {
    return Expr::atom(Atom::opaque("psi", {"x"}, {j.x_order}));
  });
  CHECK((*r.factored_prefactor * back - r.substituted).is_zero());
}

TEST_CASE("travelling reduction keeps the wave speed symbolic") {
  Reduction r = reduce_novikov(Ansatz::Travelling);
  REQUIRE(r.ode.has_value());
  CHECK(r.ode->var == "z");
  CHECK(r.ode->residual == P("4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx + c*u_xxx - c*u_x"));
}

TEST_CASE("separable reduction produces the coupled pair") {
  Reduction r = reduce_novikov(Ansatz::Separable);
  REQUIRE(r.ode.has_value());
  REQUIRE(r.time_residual.has_value());
  CHECK(*r.time_residual == P("phi'(t) - k*phi(t)^3"));
  CHECK(r.ode->residual == P("4*u^2*u_x - 3*u*u_x*u_xx - u^2*u_xxx - k*u_xx + k*u"));

  // k = -1/2 reproduces the scaling profile equation term by term
  Expr at_half = substitute_constant(r.ode->residual, "k", Expr(Rational(-1, 2)));
  CHECK(at_half == reduce_novikov(Ansatz::Scaling).ode->residual);
  // k = 0 reproduces the once-differentiated steady equation
  Expr at_zero = substitute_constant(r.ode->residual, "k", Expr(0));
  CHECK(at_zero == reduce_novikov(Ansatz::Steady).substituted);
}

TEST_CASE("closed forms verify symbolically") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  CHECK(verify_candidate_ode(*steady.ode, P("c1*exp(x) + c2*exp(-x)"),
                             {{"A", Rational(0)}})
            .zero);
  CHECK_FALSE(verify_candidate_ode(*steady.ode, P("c1*exp(x)"), {{"A", Rational(1)}}).zero);

  Reduction scaling = reduce_novikov(Ansatz::Scaling);
  CHECK(verify_candidate_ode(*scaling.ode, P("exp(x)")).zero);
  CHECK(verify_candidate_ode(*scaling.ode, P("exp(-x)")).zero);

  Reduction travelling = reduce_novikov(Ansatz::Travelling);
  CHECK(verify_candidate_ode(*travelling.ode, P("exp(z)")).zero);

  CHECK(verify_candidate_pde(novikov(), P("phi(t)*exp(x)")).zero);
  CHECK(verify_candidate_pde(novikov(), P("phi(t)*exp(-x)")).zero);
  CHECK(verify_candidate_pde(novikov(), P("kappa")).zero);
  CHECK_FALSE(verify_candidate_pde(novikov(), P("exp(2*x)")).zero);
  CHECK_FALSE(verify_candidate_pde(novikov(), P("x")).zero);
}

TEST_CASE("mixed exponential pair solves the equation outright") {
  // u = phi1(t) e^x + phi2(t) e^{-x} satisfies u_xx = u, which kills the
  // linear part and makes the cubic part cancel (4 - 3 - 1 = 0); both
  // profiles stay arbitrary
  Expr mixed = P("f(t)*exp(x) + g(t)*exp(-x)");
  ExactCheck chk = verify_candidate_pde(novikov(), mixed);
  CHECK(chk.zero);
}

TEST_CASE("separable time factor") {
  SeparableTimeSolution s1 = solve_separable_time(Rational(-1, 2), Rational(0));
  CHECK(s1.verified_symbolic);
  REQUIRE(s1.phi_in_t.has_value());
  CHECK(*s1.phi_in_t == P("t^(-1/2)"));

  SeparableTimeSolution s2 = solve_separable_time(Rational(0), Rational(4));
  CHECK(s2.verified_symbolic);
  REQUIRE(s2.phi_in_t.has_value());
  CHECK(*s2.phi_in_t == P("1/2"));

  SeparableTimeSolution s3 = solve_separable_time(Rational(3), Rational(2));
  CHECK(s3.verified_symbolic);
  CHECK(s3.s_of_t == P("2 - 6*t"));

  // numeric spot check of the closed form
  double k = 3, c = 2, t = -1.0;
  auto phi = [&](double tt) { return 1.0 / std::sqrt(c - 2 * k * tt); };
  double dphi = fd_derivative(phi, t);
  CHECK(std::abs(dphi - k * std::pow(phi(t), 3)) < 1e-9);

  CHECK_THROWS_AS(solve_separable_time(Rational(0), Rational(0)), AlgebraError);
}

TEST_CASE("radical profile derivatives agree with finite differences") {
  std::vector<RadicalParams> params = {
      {1.0, 0.0, 0.0, 1, 1},  {0.5, -1.0, 0.3, 1, 1}, {2.0, 1.0, -0.2, -1, 1},
      {0.25, 0.5, 0.1, 1, 2}, {3.0, -2.0, 0.0, 1, 2},
  };
  for (const auto& prm : params) {
    NumericProfile prof = radical_profile(prm);
    for (double x : {0.1, 0.5, 0.9}) {
      CAPTURE(prm.family);
      CAPTURE(x);
      double scale = std::max(1.0, std::abs(prof.du(x)));
      CHECK(std::abs(prof.du(x) - fd_derivative(prof.u, x)) / scale < 1e-8);
      double scale2 = std::max(1.0, std::abs(prof.ddu(x)));
      CHECK(std::abs(prof.ddu(x) - fd_derivative(prof.du, x)) / scale2 < 1e-8);
    }
  }
}

TEST_CASE("radical profiles satisfy the steady equation numerically") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  std::vector<RadicalParams> params = {
      {1.0, 0.0, 0.0, 1, 1},   {0.5, -1.0, 0.3, 1, 1}, {2.0, 1.0, -0.2, -1, 1},
      {0.25, 0.5, 0.1, 1, 2},  {3.0, -2.0, 0.0, 1, 2}, {1.5, 0.7, 0.2, -1, 2},
  };
  for (const auto& prm : params) {
    NumericProfile prof = radical_profile(prm);
    NumericCheckResult r =
        verify_profile_numeric(*steady.ode, prof, 0.0, 1.0, 101, {{"A", prm.A}});
    CAPTURE(prm.family);
    CAPTURE(prm.A);
    CHECK_FALSE(r.domain_violation);
    CHECK(r.max_residual <= 1e-9);
  }
}

TEST_CASE("integration matches the hyperbolic closed form") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  OdeOptions opts;
  opts.step = 1e-3;
  opts.constants["A"] = 0.0;
  // u(0) = 2, u'(0) = 0 picks out e^x + e^{-x}
  OdeSolution sol = integrate_ode(*steady.ode, {2.0, 0.0}, 0.0, 1.0, opts);
  REQUIRE_FALSE(sol.singular_abort);
  double max_err = 0;
  for (const auto& pt : sol.samples)
    max_err = std::max(max_err, std::abs(pt.y[0] - (std::exp(pt.x) + std::exp(-pt.x))));
  CHECK(max_err <= 1e-8);

  OdeOptions adaptive = opts;
  adaptive.method = OdeMethod::Adaptive;
  adaptive.abs_tol = 1e-12;
  OdeSolution sol2 = integrate_ode(*steady.ode, {2.0, 0.0}, 0.0, 1.0, adaptive);
  REQUIRE_FALSE(sol2.singular_abort);
  double end_err = std::abs(sol2.samples.back().y[0] - (std::exp(1) + std::exp(-1)));
  CHECK(end_err <= 1e-7);
}

TEST_CASE("integration of the scaling profile equation matches exp") {
  Reduction scaling = reduce_novikov(Ansatz::Scaling);
  OdeOptions opts;
  opts.step = 1e-3;
  OdeSolution sol = integrate_ode(*scaling.ode, {1.0, 1.0, 1.0}, 0.0, 1.0, opts);
  REQUIRE_FALSE(sol.singular_abort);
  double max_err = 0;
  for (const auto& pt : sol.samples)
    max_err = std::max(max_err, std::abs(pt.y[0] - std::exp(pt.x)));
  CHECK(max_err <= 1e-8);
}

TEST_CASE("integration from consistent radical initial data tracks the closed form") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  RadicalParams prm{1.0, 0.0, 0.0, 1, 1};
  NumericProfile prof = radical_profile(prm);
  OdeOptions opts;
  opts.step = 1e-3;
  opts.constants["A"] = prm.A;
  OdeSolution sol = integrate_ode(*steady.ode, {prof.u(0), prof.du(0)}, 0.0, 1.0, opts);
  REQUIRE_FALSE(sol.singular_abort);
  double max_err = 0;
  for (const auto& pt : sol.samples)
    max_err = std::max(max_err, std::abs(pt.y[0] - prof.u(pt.x)));
  CHECK(max_err <= 1e-7);
}

TEST_CASE("rk4 self convergence exponent") {
  Reduction scaling = reduce_novikov(Ansatz::Scaling);
  auto max_err_at = [&](double h) {
    OdeOptions opts;
    opts.step = h;
    OdeSolution sol = integrate_ode(*scaling.ode, {1.0, 1.0, 1.0}, 0.0, 1.0, opts);
    double m = 0;
    for (const auto& pt : sol.samples) m = std::max(m, std::abs(pt.y[0] - std::exp(pt.x)));
    return m;
  };
  double e1 = max_err_at(0.02), e2 = max_err_at(0.01);
  double exponent = std::log2(e1 / e2);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(exponent >= 3.5);
  CHECK(exponent <= 4.5);
}

TEST_CASE("singularity handling near u = 0") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  OdeOptions opts;
  opts.constants["A"] = 1.0;
  OdeSolution sol = integrate_ode(*steady.ode, {1e-9, 0.0}, 0.0, 1.0, opts);
  CHECK(sol.singular_abort);
  CHECK(sol.stop_x == 0.0);
}

TEST_CASE("constants survive as symbols until pinned") {
  Reduction steady = reduce_novikov(Ansatz::Steady);
  OdeOptions opts;  // A missing from constants
  CHECK_THROWS_AS(integrate_ode(*steady.ode, {2.0, 0.0}, 0.0, 0.1, opts), EvalError);
}
