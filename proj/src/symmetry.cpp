#include "novsym/symmetry.hpp"

#include <algorithm>

namespace novsym {

namespace {

void require_point_coefficients(const Expr& e, const std::string& what) {
  for (const auto& j : jets_of(e))
    if (j.order() > 0)
      throw AlgebraError(what + " contains jet variable " + j.to_string() +
                         "; point fields allow only (t, x, u)");
}

const Atom kT = Atom::indep("t");
const Atom kX = Atom::indep("x");
const Atom kU = Atom::jet_var("u", 0, 0);

}  // namespace

VectorField make_vector_field(std::string name, Expr xi_t, Expr xi_x, Expr eta) {
  require_point_coefficients(xi_t, "xi_t");
  require_point_coefficients(xi_x, "xi_x");
  require_point_coefficients(eta, "eta");
  return VectorField{std::move(xi_t), std::move(xi_x), std::move(eta), std::move(name)};
}

VectorField scale(const VectorField& f, const Rational& r) {
  return VectorField{f.xi_t.scale(r), f.xi_x.scale(r), f.eta.scale(r), f.name};
}

VectorField add(const VectorField& a, const VectorField& b) {
  return VectorField{a.xi_t + b.xi_t, a.xi_x + b.xi_x, a.eta + b.eta,
                     a.name + "+" + b.name};
}

bool same_field(const VectorField& a, const VectorField& b) {
  return a.xi_t == b.xi_t && a.xi_x == b.xi_x && a.eta == b.eta;
}

Expr characteristic(const VectorField& f) {
  return f.eta - f.xi_t * Expr::atom(Atom::jet_var("u", 1, 0)) -
         f.xi_x * Expr::atom(Atom::jet_var("u", 0, 1));
}

ProlongedField prolong(const VectorField& f, int order) {
  if (order > kJetOrderHardCap - 1)
    throw JetOrderError("prolongation order " + std::to_string(order) + " above cap");
  ProlongedField pf;
  pf.base = f;
  pf.order = order;
  Expr w = characteristic(f);
  for (int a = 0; a <= order; ++a) {
    for (int b = 0; a + b <= order; ++b) {
      Expr dw = total_derivative_n(w, "t", a);
      dw = total_derivative_n(dw, "x", b);
      Expr coeff = dw + f.xi_t * Expr::atom(Atom::jet_var("u", a + 1, b)) +
                   f.xi_x * Expr::atom(Atom::jet_var("u", a, b + 1));
      pf.coeffs[JetVar{"u", a, b}] = coeff;
    }
  }
  return pf;
}

Expr apply_prolonged(const ProlongedField& pf, const Expr& f) {
  Expr result = pf.base.xi_t * diff_partial(f, kT) + pf.base.xi_x * diff_partial(f, kX);
  for (const auto& [j, coeff] : pf.coeffs) {
    Expr df = diff_partial(f, Atom::jet_var(j.base, j.t_order, j.x_order));
    if (!df.is_zero()) result += coeff * df;
  }
  return result;
}

SymmetryReport check_symmetry(const VectorField& f, const Equation& eq) {
  int order = 0;
  for (const auto& j : jets_of(eq.lhs))
    if (j.base == eq.leading.base) order = std::max(order, j.order());
  ProlongedField pf = prolong(f, order);
  Expr action = apply_prolonged(pf, eq.lhs);

  SymmetryReport report;
  report.on_shell_residual = restrict_to_solutions(action, eq);
  report.is_symmetry = report.on_shell_residual.is_zero();

  Atom lead = Atom::jet_var(eq.leading.base, eq.leading.t_order, eq.leading.x_order);
  try {
    auto [coeff, rest] = split_linear(action, lead);
    (void)rest;
    Expr lambda = coeff.scale(Rational(eq.leading_sign));
    if ((action - lambda * eq.lhs).is_zero()) report.off_shell_multiplier = lambda;
  } catch (const AlgebraError&) {
    // nonlinear in the leading derivative: no exact multiplier reported
  }
  return report;
}

DeterminingSystem determining_system(const Equation& eq) {
  std::vector<std::string> args = {"t", "x", "u"};
  VectorField generic{Expr::atom(Atom::opaque("xi0", args)),
                      Expr::atom(Atom::opaque("xi1", args)),
                      Expr::atom(Atom::opaque("eta", args)), "generic"};
  int order = 0;
  for (const auto& j : jets_of(eq.lhs))
    if (j.base == eq.leading.base) order = std::max(order, j.order());
  Expr action = apply_prolonged(prolong(generic, order), eq.lhs);
  Expr restricted = restrict_to_solutions(action, eq);

  auto groups = collect_by(restricted, [](const Atom& a) {
    return a.kind == AtomKind::Jet && a.jet.order() > 0;
  });
  DeterminingSystem sys;
  for (auto& [mono, coeff] : groups) sys.constraints.push_back(coeff);
  return sys;
}

std::vector<Expr> evaluate_constraints(const DeterminingSystem& sys, const Expr& xi_t,
                                       const Expr& xi_x, const Expr& eta) {
  std::vector<Expr> out;
  out.reserve(sys.constraints.size());
  for (const auto& c : sys.constraints) {
    Expr e = substitute_opaque(c, "xi0", xi_t);
    e = substitute_opaque(e, "xi1", xi_x);
    e = substitute_opaque(e, "eta", eta);
    out.push_back(e);
  }
  return out;
}

namespace {

Expr apply_field(const VectorField& f, const Expr& g) {
  return f.xi_t * diff_partial(g, kT) + f.xi_x * diff_partial(g, kX) +
         f.eta * diff_partial(g, kU);
}

}  // namespace

VectorField lie_bracket(const VectorField& a, const VectorField& b) {
  return VectorField{apply_field(a, b.xi_t) - apply_field(b, a.xi_t),
                     apply_field(a, b.xi_x) - apply_field(b, a.xi_x),
                     apply_field(a, b.eta) - apply_field(b, a.eta),
                     "[" + a.name + "," + b.name + "]"};
}

namespace {

/// Exact solve of A c = rhs by Gaussian elimination; returns a solution or
/// nullopt when inconsistent. Free variables are set to zero.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a,
                                                 std::vector<Rational> rhs) {
  size_t rows = a.size();
  size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && a[sel][c].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[r]);
    std::swap(rhs[sel], rhs[r]);
    Rational inv = a[r][c].inverse();
    for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
    rhs[r] = rhs[r] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational factor = a[i][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
      rhs[i] = rhs[i] - factor * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (!rhs[i].is_zero()) return std::nullopt;
  std::vector<Rational> sol(cols, Rational(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) sol[pivot_col[i]] = rhs[i];
  return sol;
}

}  // namespace

ClosureResult closure_check(const std::vector<VectorField>& basis) {
  size_t n = basis.size();
  ClosureResult result;
  result.table.assign(n, std::vector<std::vector<Rational>>(
                             n, std::vector<Rational>(n, Rational(0))));

  // joint monomial index over the three components of all fields involved
  auto solve_in_span = [&](const VectorField& z) -> std::optional<std::vector<Rational>> {
    std::map<std::pair<int, std::string>, size_t> row_index;
    auto touch = [&](const VectorField& f) {
      const Expr* comps[3] = {&f.xi_t, &f.xi_x, &f.eta};
      for (int c = 0; c < 3; ++c)
        for (const auto& term : comps[c]->terms()) {
          Term mono{Rational(1), term.powers};
          std::string key = Expr::from_terms({mono}).to_string();
          row_index.try_emplace({c, key}, row_index.size());
        }
    };
    for (const auto& f : basis) touch(f);
    touch(z);

    size_t rows = row_index.size();
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> rhs(rows, Rational(0));
    auto fill = [&](const VectorField& f, auto&& sink) {
      const Expr* comps[3] = {&f.xi_t, &f.xi_x, &f.eta};
      for (int c = 0; c < 3; ++c)
        for (const auto& term : comps[c]->terms()) {
          Term mono{Rational(1), term.powers};
          std::string key = Expr::from_terms({mono}).to_string();
          sink(row_index.at({c, key}), term.coeff);
        }
    };
    for (size_t k = 0; k < n; ++k)
      fill(basis[k], [&](size_t row, const Rational& v) { a[row][k] = v; });
    fill(z, [&](size_t row, const Rational& v) { rhs[row] = v; });
    auto sol = solve_exact(std::move(a), std::move(rhs));
    if (!sol) return std::nullopt;
    // confirm exactly on the expression level
    VectorField combo{Expr(), Expr(), Expr(), "combo"};
    for (size_t k = 0; k < n; ++k) combo = add(combo, scale(basis[k], (*sol)[k]));
    if (!same_field(combo, z)) return std::nullopt;
    return sol;
  };

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      VectorField z = lie_bracket(basis[i], basis[j]);
      auto sol = solve_in_span(z);
      if (!sol) {
        result.closed = false;
        result.failure = "[" + basis[i].name + "," + basis[j].name + "] = (" +
                         z.xi_t.to_string() + ", " + z.xi_x.to_string() + ", " +
                         z.eta.to_string() + ") lies outside the span";
        return result;
      }
      result.table[i][j] = *sol;
    }
  }
  return result;
}

VectorField reflect_x_field(const VectorField& f) {
  return VectorField{reflect_x(f.xi_t), -reflect_x(f.xi_x), reflect_x(f.eta),
                     f.name + "|x->-x"};
}

}  // namespace novsym
