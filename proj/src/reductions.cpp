#include "novsym/reductions.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <memory>

namespace novsym {

namespace {

Expr jet(int t, int x) { return Expr::atom(Atom::jet_var("u", t, x)); }

/// u_J -> D_t^a D_x^b (ansatz), memoized.
Expr substitute_ansatz(const Expr& f, const Expr& ansatz) {
  auto memo = std::make_shared<std::map<std::pair<int, int>, Expr>>();
  std::function<Expr(int, int)> dn = [&](int a, int b) -> Expr {
    auto key = std::make_pair(a, b);
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
    Expr d;
    if (a == 0 && b == 0)
      d = ansatz;
    else if (b > 0)
      d = total_derivative(dn(a, b - 1), "x");
    else
      d = total_derivative(dn(a - 1, 0), "t");
    memo->emplace(key, d);
    return d;
  };
  return substitute_base_jets(f, "u", [&](const JetVar& j) { return dn(j.t_order, j.x_order); });
}

/// Single-argument opaque profile -> x-jets of u, e.g. psi''(x) -> u_xx.
Expr profile_to_jets(const Expr& e, const std::string& fname) {
  Expr out;
  for (const auto& t : e.terms()) {
    Term nt;
    nt.coeff = t.coeff;
    for (const auto& [a, ex] : t.powers) {
      if (a.kind == AtomKind::Opaque && a.name == fname) {
        if (a.args.size() != 1)
          throw AlgebraError("profile function must have a single argument: " + a.to_string());
        nt.powers.push_back({Atom::jet_var("u", 0, a.dcounts[0]), ex});
      } else {
        nt.powers.push_back({a, ex});
      }
    }
    out += Expr::from_terms({nt});
  }
  return out;
}

int profile_order(const Expr& e) {
  int m = 0;
  for (const auto& j : jets_of(e)) m = std::max(m, j.x_order);
  return m;
}

Reduction reduce_steady(const ReductionSpec& spec, const Equation& eq) {
  Reduction out;
  out.spec = spec;
  Expr sub = substitute_base_jets(eq.lhs, "u", [](const JetVar& j) {
    return j.t_order > 0 ? Expr() : Expr::atom(Atom::jet_var("u", 0, j.x_order));
  });
  out.substituted = sub;
  // multiply by the profile and pull out the exact x-derivative; the steady
  // equation integrates once to potential = -A
  Expr times_u = jet(0, 0) * sub;
  IbpResult r = integrate_by_parts_x(times_u);
  if (!r.remainder.is_zero())
    throw AlgebraError("steady reduction does not integrate; obstructing part: " +
                       r.remainder.to_string());
  Expr residual = -r.potential - Expr::atom(Atom::constant("A"));
  out.ode = OdeProblem{"steady", "x", residual, profile_order(residual)};
  return out;
}

Reduction reduce_exp_profile(const ReductionSpec& spec, const Equation& eq) {
  Reduction out;
  out.spec = spec;
  Expr ansatz = Expr::atom(Atom::opaque("phi", {"t"})) *
                Expr::atom(Atom::expo({{"x", Rational(spec.exp_sign)}}));
  out.substituted = substitute_ansatz(eq.lhs, ansatz);
  out.identically_zero = out.substituted.is_zero();
  return out;
}

Reduction reduce_scaling(const ReductionSpec& spec, const Equation& eq) {
  Reduction out;
  out.spec = spec;
  Expr ansatz = Expr::atom(Atom::indep("t")).pow(Rational(-1, 2)) *
                Expr::atom(Atom::opaque("psi", {"x"}));
  Expr sub = substitute_ansatz(eq.lhs, ansatz);
  out.substituted = sub;
  Expr scaled = Expr::atom(Atom::indep("t")).pow(Rational(3, 2)) * sub;
  for (const auto& t : scaled.terms()) {
    for (const auto& [a, ex] : t.powers) {
      (void)ex;
      if (a.kind == AtomKind::Indep && a.name == "t")
        throw AlgebraError("scaling ansatz does not separate; obstructing term: " +
                           Expr::from_terms({t}).to_string());
    }
  }
  out.factored_prefactor = Expr::atom(Atom::indep("t")).pow(Rational(-3, 2));
  Expr residual = profile_to_jets(scaled, "psi");
  out.ode = OdeProblem{"scaling", "x", residual, profile_order(residual)};
  return out;
}

Reduction reduce_travelling(const ReductionSpec& spec, const Equation& eq) {
  Reduction out;
  out.spec = spec;
  Expr c = Expr::atom(Atom::constant("c"));
  Expr sub = substitute_base_jets(eq.lhs, "u", [&](const JetVar& j) {
    Expr d = Expr::atom(Atom::opaque("phi", {"z"}, {j.order()}));
    Expr factor = c.pow(j.t_order).scale(Rational(j.t_order % 2 == 0 ? 1 : -1));
    return factor * d;
  });
  out.substituted = sub;
  Expr residual = profile_to_jets(sub, "phi");
  out.ode = OdeProblem{"travelling", "z", residual, profile_order(residual)};
  return out;
}

Reduction reduce_separable(const ReductionSpec& spec, const Equation& eq) {
  Reduction out;
  out.spec = spec;
  Expr ansatz = Expr::atom(Atom::opaque("phi", {"t"})) * Expr::atom(Atom::opaque("psi", {"x"}));
  Expr sub = substitute_ansatz(eq.lhs, ansatz);
  out.substituted = sub;

  auto groups = collect_by(sub, [](const Atom& a) {
    return a.kind == AtomKind::Opaque && a.name == "phi";
  });
  Atom phi = Atom::opaque("phi", {"t"});
  Atom dphi = Atom::opaque("phi", {"t"}, {1});
  PowerList key_dphi = {{dphi, Rational(1)}};
  PowerList key_phi3 = {{phi, Rational(3)}};
  Expr p_part, g_part;
  for (const auto& [key, coeff] : groups) {
    if (cmp_monomial(key, key_dphi) == 0)
      p_part = coeff;
    else if (cmp_monomial(key, key_phi3) == 0)
      g_part = coeff;
    else
      throw AlgebraError("separable ansatz does not separate; obstructing factor: " +
                         Expr::from_terms({Term{Rational(1), key}}).to_string());
  }
  // F = phi' * P(psi) + phi^3 * G(psi); imposing phi' = k phi^3 leaves
  // G + k P = 0 as the spatial equation
  Expr k = Expr::atom(Atom::constant("k"));
  out.time_residual = Expr::atom(dphi) - k * Expr::atom(phi).pow(3);
  Expr residual = profile_to_jets(g_part + k * p_part, "psi");
  out.ode = OdeProblem{"separable", "x", residual, profile_order(residual)};
  return out;
}

}  // namespace

ReductionSpec make_reduction_spec(Ansatz a, int exp_sign) {
  ReductionSpec spec;
  spec.ansatz = a;
  spec.exp_sign = exp_sign >= 0 ? 1 : -1;
  switch (a) {
    case Ansatz::Steady: spec.name = "steady"; break;
    case Ansatz::ExpProfile: spec.name = spec.exp_sign > 0 ? "exp-profile+" : "exp-profile-"; break;
    case Ansatz::Scaling: spec.name = "scaling"; break;
    case Ansatz::Travelling: spec.name = "travelling"; break;
    case Ansatz::Separable: spec.name = "separable"; break;
  }
  return spec;
}

Reduction reduce(const ReductionSpec& spec, const Equation& eq) {
  switch (spec.ansatz) {
    case Ansatz::Steady: return reduce_steady(spec, eq);
    case Ansatz::ExpProfile: return reduce_exp_profile(spec, eq);
    case Ansatz::Scaling: return reduce_scaling(spec, eq);
    case Ansatz::Travelling: return reduce_travelling(spec, eq);
    case Ansatz::Separable: return reduce_separable(spec, eq);
  }
  throw AlgebraError("unknown ansatz");
}

Expr substitute_constant(const Expr& e, const std::string& name, const Expr& value) {
  Atom target = Atom::constant(name);
  Expr out;
  for (const auto& t : e.terms()) {
    Term rest;
    rest.coeff = t.coeff;
    Rational expo(0);
    for (const auto& [a, ex] : t.powers) {
      if (cmp(a, target) == 0)
        expo = ex;
      else
        rest.powers.push_back({a, ex});
    }
    Expr piece = Expr::from_terms({rest});
    if (!expo.is_zero()) piece = piece * value.pow(expo);
    out += piece;
  }
  return out;
}

ExactCheck verify_candidate_ode(const OdeProblem& p, const Expr& candidate,
                                const std::map<std::string, Rational>& constants) {
  Expr residual = p.residual;
  for (const auto& [name, value] : constants)
    residual = substitute_constant(residual, name, Expr(value));
  auto memo = std::make_shared<std::map<int, Expr>>();
  std::function<Expr(int)> dn = [&](int n) -> Expr {
    auto it = memo->find(n);
    if (it != memo->end()) return it->second;
    Expr d = n == 0 ? candidate : total_derivative(dn(n - 1), p.var);
    memo->emplace(n, d);
    return d;
  };
  Expr sub = substitute_base_jets(residual, "u", [&](const JetVar& j) {
    if (j.t_order != 0) throw AlgebraError("reduced residual contains a t-jet");
    return dn(j.x_order);
  });
  return ExactCheck{sub.is_zero(), sub};
}

ExactCheck verify_candidate_pde(const Equation& eq, const Expr& candidate) {
  Expr sub = substitute_ansatz(eq.lhs, candidate);
  return ExactCheck{sub.is_zero(), sub};
}

SeparableTimeSolution solve_separable_time(const Rational& k, const Rational& c) {
  if (k.is_zero() && c.is_zero())
    throw AlgebraError("separable time factor undefined for k = c = 0");
  SeparableTimeSolution out;
  out.k = k;
  out.c = c;
  Expr s = Expr::atom(Atom::indep("s"));
  out.phi_in_s = s.pow(Rational(-1, 2));
  out.s_of_t = Expr(c) - Expr(k).scale(2) * Expr::atom(Atom::indep("t"));

  // chain rule in the shifted variable with a symbolic constant:
  // phi'(t) = (ds/dt) d(phi)/ds = -2k d(phi)/ds, so phi' - k phi^3
  // vanishes independently of k and c
  Expr ksym = Expr::atom(Atom::constant("k"));
  Expr dphi_dt = ksym.scale(-2) * diff_partial(out.phi_in_s, Atom::indep("s"));
  Expr residual = dphi_dt - ksym * out.phi_in_s.pow(3);
  out.verified_symbolic = residual.is_zero();

  if (c.is_zero()) {
    auto root = (Rational(-2) * k).pow_rational(Rational(-1, 2));
    if (root) out.phi_in_t = Expr(*root) * Expr::atom(Atom::indep("t")).pow(Rational(-1, 2));
  } else if (k.is_zero()) {
    auto root = c.pow_rational(Rational(-1, 2));
    if (root) out.phi_in_t = Expr(*root);
  }
  return out;
}

NumericCheckResult verify_profile_numeric(const OdeProblem& p, const NumericProfile& profile,
                                          double x0, double x1, int samples,
                                          const std::map<std::string, double>& constants) {
  if (p.order >= 3 && !profile.dddu)
    throw EvalError("profile lacks the third derivative required by " + p.name);
  NumericCheckResult out;
  out.samples = samples;
  for (int i = 0; i < samples; ++i) {
    double x = x0 + (x1 - x0) * i / (samples - 1);
    EvalContext ctx;
    ctx.constants = constants;
    ctx.indep[p.var] = x;
    double uv = profile.u(x);
    ctx.jets[JetVar{"u", 0, 0}] = uv;
    ctx.jets[JetVar{"u", 0, 1}] = profile.du(x);
    ctx.jets[JetVar{"u", 0, 2}] = profile.ddu(x);
    if (profile.dddu) ctx.jets[JetVar{"u", 0, 3}] = profile.dddu(x);
    if (!std::isfinite(uv)) {
      out.domain_violation = true;
      continue;
    }
    double r = eval_numeric(p.residual, ctx);
    if (!std::isfinite(r)) {
      out.domain_violation = true;
      continue;
    }
    out.max_residual = std::max(out.max_residual, std::abs(r));
  }
  return out;
}

NumericProfile radical_profile(const RadicalParams& p) {
  double A = p.A, c1 = p.c1, c2 = p.c2;
  double sg = p.sign >= 0 ? 1.0 : -1.0;
  NumericProfile out;
  if (p.family == 1) {
    auto parts = [=](double x) {
      double y = x + c2;
      double e2 = std::exp(2 * y), e4 = std::exp(4 * y);
      double q = 4 * A + e4 - 2 * c1 * e2 + c1 * c1;
      double dq = 4 * e4 - 4 * c1 * e2;
      double ddq = 16 * e4 - 8 * c1 * e2;
      return std::array<double, 4>{y, q, dq, ddq};
    };
    out.u = [parts, sg](double x) {
      auto v = parts(x);
      if (v[1] <= 0) return std::nan("");
      return 0.5 * sg * std::exp(-v[0]) * std::sqrt(v[1]);
    };
    out.du = [parts, sg](double x) {
      auto v = parts(x);
      if (v[1] <= 0) return std::nan("");
      double sq = std::sqrt(v[1]);
      double u = 0.5 * sg * std::exp(-v[0]) * sq;
      return -u + 0.25 * sg * std::exp(-v[0]) * v[2] / sq;
    };
    out.ddu = [parts, sg](double x) {
      auto v = parts(x);
      if (v[1] <= 0) return std::nan("");
      double sq = std::sqrt(v[1]);
      double u = 0.5 * sg * std::exp(-v[0]) * sq;
      double g = 0.25 * sg * std::exp(-v[0]) * v[2] / sq;
      double du = -u + g;
      return -du - g + 0.25 * sg * std::exp(-v[0]) * (v[3] / sq - v[2] * v[2] / (2 * v[1] * sq));
    };
  } else {
    auto parts = [=](double x) {
      double y = x + c2;
      double e2 = std::exp(2 * y), em2 = std::exp(-2 * y);
      double sv = 4 * A * e2 + em2 - 2 * c1 + c1 * c1 * e2;
      double dsv = 8 * A * e2 - 2 * em2 + 2 * c1 * c1 * e2;
      double ddsv = 16 * A * e2 + 4 * em2 + 4 * c1 * c1 * e2;
      return std::array<double, 3>{sv, dsv, ddsv};
    };
    out.u = [parts, sg](double x) {
      auto v = parts(x);
      if (v[0] <= 0) return std::nan("");
      return 0.5 * sg * std::sqrt(v[0]);
    };
    out.du = [parts, sg](double x) {
      auto v = parts(x);
      if (v[0] <= 0) return std::nan("");
      return 0.25 * sg * v[1] / std::sqrt(v[0]);
    };
    out.ddu = [parts, sg](double x) {
      auto v = parts(x);
      if (v[0] <= 0) return std::nan("");
      double sq = std::sqrt(v[0]);
      return 0.25 * sg * (v[2] / sq - v[1] * v[1] / (2 * v[0] * sq));
    };
  }
  return out;
}

// ---------------------------------------------------------------------------
// numeric integration
// ---------------------------------------------------------------------------

namespace {

using Vec = std::vector<double>;

struct OdeRhs {
  Expr lead_coeff;
  Expr rest;
  int order;
  std::map<std::string, double> constants;
  double singular_u;

  bool operator()(const Vec& y, Vec& dy) const {
    if (std::abs(y[0]) < singular_u) return false;
    EvalContext ctx;
    ctx.constants = constants;
    for (int k = 0; k < order; ++k) ctx.jets[JetVar{"u", 0, k}] = y[static_cast<size_t>(k)];
    double a = eval_numeric(lead_coeff, ctx);
    if (std::abs(a) < 1e-300) return false;
    double b = eval_numeric(rest, ctx);
    for (int k = 0; k + 1 < order; ++k) dy[static_cast<size_t>(k)] = y[static_cast<size_t>(k) + 1];
    dy[static_cast<size_t>(order) - 1] = -b / a;
    return true;
  }
};

Vec axpy(const Vec& y, double h, const Vec& d) {
  Vec r = y;
  for (size_t i = 0; i < r.size(); ++i) r[i] += h * d[i];
  return r;
}

bool rk4_step(const OdeRhs& f, double h, Vec& y) {
  size_t n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n);
  if (!f(y, k1)) return false;
  if (!f(axpy(y, h / 2, k1), k2)) return false;
  if (!f(axpy(y, h / 2, k2), k3)) return false;
  if (!f(axpy(y, h, k3), k4)) return false;
  for (size_t i = 0; i < n; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return true;
}

bool rkf45_stages(const OdeRhs& rhs, const Vec& y, double h, std::array<Vec, 6>& k) {
  size_t n = y.size();
  for (auto& v : k) v.assign(n, 0.0);
  if (!rhs(y, k[0])) return false;
  if (!rhs(axpy(y, h / 4, k[0]), k[1])) return false;
  Vec t = y;
  for (size_t i = 0; i < n; ++i) t[i] += h * (3.0 / 32 * k[0][i] + 9.0 / 32 * k[1][i]);
  if (!rhs(t, k[2])) return false;
  t = y;
  for (size_t i = 0; i < n; ++i)
    t[i] += h * (1932.0 / 2197 * k[0][i] - 7200.0 / 2197 * k[1][i] + 7296.0 / 2197 * k[2][i]);
  if (!rhs(t, k[3])) return false;
  t = y;
  for (size_t i = 0; i < n; ++i)
    t[i] += h * (439.0 / 216 * k[0][i] - 8.0 * k[1][i] + 3680.0 / 513 * k[2][i] -
                 845.0 / 4104 * k[3][i]);
  if (!rhs(t, k[4])) return false;
  t = y;
  for (size_t i = 0; i < n; ++i)
    t[i] += h * (-8.0 / 27 * k[0][i] + 2.0 * k[1][i] - 3544.0 / 2565 * k[2][i] +
                 1859.0 / 4104 * k[3][i] - 11.0 / 40 * k[4][i]);
  if (!rhs(t, k[5])) return false;
  return true;
}

}  // namespace

OdeSolution integrate_ode(const OdeProblem& p, std::vector<double> y0, double x0, double x1,
                          const OdeOptions& opts) {
  Atom lead = Atom::jet_var("u", 0, p.order);
  auto [a, b] = split_linear(p.residual, lead);
  OdeRhs rhs{a, b, p.order, opts.constants, opts.singular_u};
  if (static_cast<int>(y0.size()) != p.order)
    throw EvalError("initial state must provide " + std::to_string(p.order) + " values");

  OdeSolution sol;
  sol.samples.push_back({x0, y0});
  double span = x1 - x0;
  double dir = span >= 0 ? 1.0 : -1.0;

  if (opts.method == OdeMethod::Rk4) {
    auto run = [&](double h, bool record) -> std::pair<bool, Vec> {
      Vec y = y0;
      double x = x0;
      for (long i = 0; i < opts.max_steps && dir * (x1 - x) > 1e-15; ++i) {
        double step = dir * std::min(h, std::abs(x1 - x));
        if (!rk4_step(rhs, step, y)) {
          if (record) {
            sol.singular_abort = true;
            sol.stop_x = x;
          }
          return {false, y};
        }
        x += step;
        if (record) sol.samples.push_back({x, y});
      }
      return {true, y};
    };
    auto [ok, y_end] = run(opts.step, true);
    sol.stop_x = sol.samples.back().x;
    if (ok) {
      auto [ok2, y_half] = run(opts.step / 2, false);
      if (ok2) {
        double d = 0;
        for (size_t i = 0; i < y_end.size(); ++i) d = std::max(d, std::abs(y_end[i] - y_half[i]));
        sol.error_estimate = d;
      }
    }
    return sol;
  }

  Vec y = y0;
  double x = x0;
  double h = dir * opts.step;
  size_t n = y.size();
  std::array<Vec, 6> k;
  for (long it = 0; it < opts.max_steps; ++it) {
    if (dir * (x1 - x) <= 1e-15) break;
    if (std::abs(h) > std::abs(x1 - x)) h = x1 - x;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(span))) {
      sol.underflow_abort = true;
      break;
    }
    if (!rkf45_stages(rhs, y, h, k)) {
      sol.singular_abort = true;
      break;
    }
    Vec y5(n);
    double err = 0;
    for (size_t i = 0; i < n; ++i) {
      y5[i] = y[i] + h * (16.0 / 135 * k[0][i] + 6656.0 / 12825 * k[2][i] +
                          28561.0 / 56430 * k[3][i] - 9.0 / 50 * k[4][i] + 2.0 / 55 * k[5][i]);
      double y4 = y[i] + h * (25.0 / 216 * k[0][i] + 1408.0 / 2565 * k[2][i] +
                              2197.0 / 4104 * k[3][i] - 1.0 / 5 * k[4][i]);
      err = std::max(err, std::abs(y5[i] - y4));
    }
    if (err <= opts.abs_tol) {
      x += h;
      y = y5;
      sol.samples.push_back({x, y});
      sol.error_estimate = std::max(sol.error_estimate, err);
    }
    double scale = err > 0 ? 0.9 * std::pow(opts.abs_tol / err, 0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, scale));
  }
  sol.stop_x = x;
  return sol;
}

}  // namespace novsym
