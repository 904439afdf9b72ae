#ifndef NOVSYM_REDUCTIONS_HPP
#define NOVSYM_REDUCTIONS_HPP

#include <functional>
#include <map>
#include <optional>

#include "novsym/jetspace.hpp"

namespace novsym {

/// The invariant-solution ansatz catalog:
///   Steady      u(t,x) = u(x)
///   ExpProfile  u(t,x) = phi(t) e^{s x},  s = +-1
///   Scaling     u(t,x) = t^{-1/2} psi(x)
///   Travelling  u(t,x) = phi(z), z = x - c t
///   Separable   u(t,x) = phi(t) psi(x)
enum class Ansatz { Steady, ExpProfile, Scaling, Travelling, Separable };

struct ReductionSpec {
  Ansatz ansatz = Ansatz::Steady;
  std::string name;
  int exp_sign = 1;  // ExpProfile only
};

ReductionSpec make_reduction_spec(Ansatz a, int exp_sign = 1);

/// A reduced ordinary differential equation. The unknown profile and its
/// derivatives are carried as x-jets of u (the residuals are autonomous, so
/// the display variable is cosmetic); named constants stay symbolic.
struct OdeProblem {
  std::string name;
  std::string var = "x";
  Expr residual;
  int order = 0;
};

struct Reduction {
  ReductionSpec spec;
  Expr substituted;                        // F after the ansatz substitution
  bool identically_zero = false;           // exp-profile family
  std::optional<OdeProblem> ode;           // spatial equation
  std::optional<Expr> time_residual;       // separable: phi' - k phi^3, opaque phi(t)
  std::optional<Expr> factored_prefactor;  // scaling: common t power divided out
};

/// Substitutes the ansatz into the equation, separates, and returns the
/// reduced problem; throws AlgebraError naming the obstructing term when an
/// ansatz fails to separate.
Reduction reduce(const ReductionSpec& spec, const Equation& eq);

// --- closed-form verification ----------------------------------------------

struct ExactCheck {
  bool zero = false;
  Expr residual;
};

/// Substitutes a closed-form candidate u = candidate(var) into the reduced
/// residual (derivatives become total derivatives along the problem
/// variable); exact normal-form zero test. Constants may be pinned.
ExactCheck verify_candidate_ode(const OdeProblem& p, const Expr& candidate,
                                const std::map<std::string, Rational>& constants = {});

/// Substitutes a full space-time candidate into the equation residual.
ExactCheck verify_candidate_pde(const Equation& eq, const Expr& candidate);

/// Replaces a named constant everywhere (exact).
Expr substitute_constant(const Expr& e, const std::string& name, const Expr& value);

// --- the separable time factor -----------------------------------------------

/// phi(t) = (c - 2 k t)^{-1/2} solves phi' = k phi^3. The residual is
/// machine-verified in the shifted variable s = c - 2 k t with symbolic k
/// (phi' = -2k d(phi)/ds); phi_in_t is filled when the closed form collapses
/// to a representable monomial in t (e.g. k = -1/2, c = 0 gives t^{-1/2}).
struct SeparableTimeSolution {
  Rational k;
  Rational c;
  Expr phi_in_s;            // s^(-1/2)
  Expr s_of_t;              // c - 2 k t
  std::optional<Expr> phi_in_t;
  bool verified_symbolic = false;
};

SeparableTimeSolution solve_separable_time(const Rational& k, const Rational& c);

// --- numeric profiles ---------------------------------------------------------

/// A sampled profile with enough derivatives for third-order residuals.
struct NumericProfile {
  std::function<double(double)> u;
  std::function<double(double)> du;
  std::function<double(double)> ddu;
  std::function<double(double)> dddu;  // may be empty for second-order problems
};

struct NumericCheckResult {
  double max_residual = 0;
  int samples = 0;
  bool domain_violation = false;  // NaN/inf encountered (e.g. negative radicand)
};

NumericCheckResult verify_profile_numeric(const OdeProblem& p, const NumericProfile& profile,
                                          double x0, double x1, int samples,
                                          const std::map<std::string, double>& constants);

/// The two closed-form radical families proposed for the steady equation
/// u^3 u'' = u^4 + A, with analytic first and second derivatives:
///   family 1: +-1/2 e^{-(x+c2)} sqrt(4A + e^{4(x+c2)} - 2 c1 e^{2(x+c2)} + c1^2)
///   family 2: +-1/2 sqrt(4A e^{2(x+c2)} + e^{-2(x+c2)} - 2 c1 + c1^2 e^{2(x+c2)})
struct RadicalParams {
  double A = 1;
  double c1 = 0;
  double c2 = 0;
  int sign = 1;
  int family = 1;
};

NumericProfile radical_profile(const RadicalParams& p);

// --- numeric integration --------------------------------------------------------

enum class OdeMethod { Rk4, Adaptive };

struct OdeOptions {
  double step = 1e-3;
  OdeMethod method = OdeMethod::Rk4;
  double abs_tol = 1e-10;
  double singular_u = 1e-8;
  std::map<std::string, double> constants;
  long max_steps = 2000000;
};

struct OdePoint {
  double x;
  std::vector<double> y;  // profile and derivatives up to order-1
};

struct OdeSolution {
  std::vector<OdePoint> samples;
  bool singular_abort = false;
  bool underflow_abort = false;
  double stop_x = 0;
  double error_estimate = 0;
};

/// Integrates the problem solved for its highest derivative. The leading
/// coefficient is evaluated numerically, so equations like the travelling
/// reduction (coefficient c - u^2) integrate without symbolic division;
/// integration aborts cleanly near the singular set.
OdeSolution integrate_ode(const OdeProblem& p, std::vector<double> y0, double x0, double x1,
                          const OdeOptions& opts = {});

}  // namespace novsym

#endif
