#include "novsym/jetspace.hpp"

#include <map>
#include <set>

namespace novsym {

Equation make_equation(std::string name, const Expr& lhs, const JetVar& leading) {
  Atom lead = Atom::jet_var(leading.base, leading.t_order, leading.x_order);
  auto [coeff, rest] = split_linear(lhs, lead);
  if (!coeff.is_rational())
    throw AlgebraError("leading derivative has non-constant coefficient: " + coeff.to_string());
  Rational c = coeff.rational_value();
  if (!(c == Rational(1) || c == Rational(-1)))
    throw AlgebraError("leading derivative coefficient must be +-1, got " + c.to_string());
  Equation eq;
  eq.name = std::move(name);
  eq.lhs = lhs;
  eq.leading = leading;
  eq.leading_sign = c == Rational(1) ? 1 : -1;
  eq.solved_rhs = rest.scale(-c.inverse());
  // consistency: lhs - sign*(leading - solved) == 0
  Expr check = lhs - (Expr::atom(lead) - eq.solved_rhs).scale(c);
  if (!check.is_zero()) throw AlgebraError("equation failed the solved-form consistency check");
  return eq;
}

// ---------------------------------------------------------------------------
// Euler operator
// ---------------------------------------------------------------------------

Expr euler_operator(const Expr& lagrangian, const std::string& dep) {
  int maxord = 0;
  for (const auto& j : jets_of(lagrangian))
    if (j.base == dep) maxord = std::max(maxord, j.order());
  if (maxord > 3)
    throw JetOrderError("euler_operator supports jet order <= 3, found " +
                        std::to_string(maxord));
  Expr result;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; a + b <= 3; ++b) {
      Atom coord = Atom::jet_var(dep, a, b);
      Expr d = diff_partial(lagrangian, coord);
      if (d.is_zero()) continue;
      d = total_derivative_n(d, "t", a);
      d = total_derivative_n(d, "x", b);
      if ((a + b) % 2 == 1) d = -d;
      result += d;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// restriction to the solution manifold
// ---------------------------------------------------------------------------

namespace {

bool eliminable(const JetVar& j, const Equation& eq) {
  return j.base == eq.leading.base && j.t_order >= eq.leading.t_order &&
         j.x_order >= eq.leading.x_order;
}

/// Differential consequence leading+(dt,dx) = D_t^dt D_x^dx (solved_rhs),
/// memoized per equation instance within one restriction pass.
class ConsequenceTable {
 public:
  explicit ConsequenceTable(const Equation& eq) : eq_(eq) {}

  const Expr& rhs_for(const JetVar& j) {
    std::pair<int, int> key{j.t_order - eq_.leading.t_order, j.x_order - eq_.leading.x_order};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Expr e = eq_.solved_rhs;
    e = total_derivative_n(e, "t", key.first);
    e = total_derivative_n(e, "x", key.second);
    return memo_.emplace(key, std::move(e)).first->second;
  }

 private:
  const Equation& eq_;
  std::map<std::pair<int, int>, Expr> memo_;
};

}  // namespace

Expr restrict_to_solutions(const Expr& e, const std::vector<const Equation*>& eqs) {
  std::vector<ConsequenceTable> tables;
  tables.reserve(eqs.size());
  for (const Equation* eq : eqs) tables.emplace_back(*eq);

  Expr cur = e;
  for (int iter = 0; iter < 256; ++iter) {
    // highest eliminable jet first (t-count, then x-count); the substitution
    // only introduces strictly lower eliminable jets, so this terminates
    std::optional<JetVar> pick;
    size_t pick_eq = 0;
    for (const auto& j : jets_of(cur)) {
      for (size_t k = 0; k < eqs.size(); ++k) {
        if (!eliminable(j, *eqs[k])) continue;
        if (!pick || j.t_order > pick->t_order ||
            (j.t_order == pick->t_order && j.x_order > pick->x_order)) {
          pick = j;
          pick_eq = k;
        }
      }
    }
    if (!pick) return cur;
    cur = substitute_jet(cur, *pick, tables[pick_eq].rhs_for(*pick));
  }
  throw AlgebraError("restriction to the solution manifold did not terminate");
}

Expr restrict_to_solutions(const Expr& e, const Equation& eq) {
  return restrict_to_solutions(e, std::vector<const Equation*>{&eq});
}

// ---------------------------------------------------------------------------
// integration by parts
// ---------------------------------------------------------------------------

namespace {

struct JetRank {
  int main = 0;  // derivative count along the integration direction
  int other = 0;
  std::string base;

  bool operator<(const JetRank& o) const {
    if (main != o.main) return main < o.main;
    if (other != o.other) return other < o.other;
    return base < o.base;
  }
  bool operator==(const JetRank& o) const {
    return main == o.main && other == o.other && base == o.base;
  }
};

JetRank rank_of(const JetVar& j, const std::string& var) {
  if (var == "x") return JetRank{j.x_order, j.t_order, j.base};
  return JetRank{j.t_order, j.x_order, j.base};
}

JetVar shift(const JetVar& j, const std::string& var, int delta) {
  JetVar r = j;
  if (var == "x")
    r.x_order += delta;
  else
    r.t_order += delta;
  return r;
}

std::optional<JetRank> highest_rank(const Expr& e, const std::string& var) {
  std::optional<JetRank> best;
  for (const auto& j : jets_of(e)) {
    JetRank r = rank_of(j, var);
    if (r.main >= 1 && (!best || *best < r)) best = r;
  }
  return best;
}

Expr maybe_restrict(const Expr& e, const Equation* eq) {
  return eq ? restrict_to_solutions(e, *eq) : e;
}

}  // namespace

IbpResult integrate_by_parts(const Expr& e, const std::string& var, const Equation* eq) {
  Expr cur = maybe_restrict(e, eq);
  Expr potential;
  std::set<std::string> seen;
  seen.insert(cur.to_string());

  for (int iter = 0; iter < 1000; ++iter) {
    // jets with a derivative along var, highest rank first
    std::vector<JetVar> candidates;
    for (const auto& j : jets_of(cur)) {
      if (rank_of(j, var).main >= 1) candidates.push_back(j);
    }
    std::sort(candidates.begin(), candidates.end(), [&](const JetVar& a, const JetVar& b) {
      return rank_of(b, var) < rank_of(a, var);
    });

    bool progressed = false;
    for (const JetVar& kj : candidates) {
      Atom katom = Atom::jet_var(kj.base, kj.t_order, kj.x_order);
      JetRank krank = rank_of(kj, var);
      Atom lower = Atom::jet_var(kj.base, shift(kj, var, -1).t_order, shift(kj, var, -1).x_order);

      for (const auto& term : cur.terms()) {
        Rational kexp = term.exponent_of(katom);
        if (kexp.is_zero() || !kexp.is_one()) continue;  // nonlinear occurrences stay

        Term cof;  // term / katom
        cof.coeff = term.coeff;
        for (const auto& [a, ex] : term.powers)
          if (cmp(a, katom) != 0) cof.powers.push_back({a, ex});
        Expr cofactor = Expr::from_terms({cof});
        Expr term_expr = cofactor * Expr::atom(katom);

        // forward peel: A*u_K = D(A*u_K') - D(A)*u_K'
        {
          Expr padd = cofactor * Expr::atom(lower);
          Expr residue = -(total_derivative(cofactor, var) * Expr::atom(lower));
          Expr test = maybe_restrict(residue, eq);
          auto hr = highest_rank(test, var);
          if (!hr || *hr < krank) {
            potential += padd;
            cur = maybe_restrict(cur - term_expr + residue, eq);
            progressed = true;
            break;
          }
        }

        // perfect power: X*u_J^m*u_K with K = J+1 and D(X) lower-ranked
        // gives X*u_J^(m+1)/(m+1) up to a lower-order residue
        {
          Rational mexp = cof.exponent_of(lower);
          if (mexp.is_integer() && !mexp.is_negative() && !mexp.is_zero()) {
            Term xt;
            xt.coeff = cof.coeff;
            for (const auto& [a, ex] : cof.powers)
              if (cmp(a, lower) != 0) xt.powers.push_back({a, ex});
            Expr xpart = Expr::from_terms({xt});
            Rational m1 = mexp + Rational(1);
            Expr padd = xpart.scale(m1.inverse()) * Expr::atom(lower).pow(m1);
            Expr residue =
                -(total_derivative(xpart, var).scale(m1.inverse()) * Expr::atom(lower).pow(m1));
            Expr test = maybe_restrict(residue, eq);
            auto hr = highest_rank(test, var);
            if (!hr || *hr < krank) {
              potential += padd;
              cur = maybe_restrict(cur - term_expr + residue, eq);
              progressed = true;
              break;
            }
          }
        }

        // transfer peel (solution-manifold mode only): raise a lower factor
        // so the leading derivative appears and restriction eliminates it:
        //   u_M*B*u_K = D(u_(M-1)*B*u_K) - u_(M-1)*D(B*u_K)
        if (eq && eliminable(shift(kj, var, 1), *eq)) {
          std::optional<JetVar> mjet;
          for (const auto& [a, ex] : cof.powers) {
            if (a.kind != AtomKind::Jet) continue;
            if (rank_of(a.jet, var).main < 1) continue;
            if (!ex.is_integer() || ex.is_negative()) continue;
            if (!mjet || rank_of(a.jet, var) < rank_of(*mjet, var)) mjet = a.jet;
          }
          if (mjet) {
            Atom matom = Atom::jet_var(mjet->base, mjet->t_order, mjet->x_order);
            Atom mlower = Atom::jet_var(mjet->base, shift(*mjet, var, -1).t_order,
                                        shift(*mjet, var, -1).x_order);
            Term bt;
            bt.coeff = cof.coeff;
            bool taken = false;
            for (const auto& [a, ex] : cof.powers) {
              if (!taken && cmp(a, matom) == 0) {
                taken = true;
                if (!(ex - Rational(1)).is_zero()) bt.powers.push_back({a, ex - Rational(1)});
              } else {
                bt.powers.push_back({a, ex});
              }
            }
            Expr bpart = Expr::from_terms({bt}) * Expr::atom(katom);
            Expr padd = Expr::atom(mlower) * bpart;
            Expr residue = -(Expr::atom(mlower) * total_derivative(bpart, var));
            potential += padd;
            cur = maybe_restrict(cur - term_expr + residue, eq);
            progressed = true;
            break;
          }
        }
      }
      if (progressed) break;
    }

    if (!progressed) break;
    std::string key = cur.to_string();
    if (!seen.insert(key).second) break;  // cycle guard
  }
  return IbpResult{cur, potential};
}

}  // namespace novsym
