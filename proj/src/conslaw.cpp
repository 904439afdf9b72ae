#include "novsym/conslaw.hpp"

namespace novsym {

namespace {

long orderings(int tc, int xc) {
  // binomial(tc+xc, tc)
  long n = tc + xc, r = std::min(tc, xc), out = 1;
  for (long i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

/// Partial derivative of the Lagrangian with respect to one *ordered*
/// derivative slot: the symmetric writing spreads the canonical coefficient
/// evenly over the orderings of the multi-index.
Expr slot_partial(const Expr& lagrangian, const std::vector<std::string>& tuple) {
  int tc = 0, xc = 0;
  for (const auto& s : tuple) (s == "t" ? tc : xc) += 1;
  Expr d = diff_partial(lagrangian, Atom::jet_var("u", tc, xc));
  if (d.is_zero()) return d;
  return d.scale(Rational(1, orderings(tc, xc)));
}

const std::vector<std::string> kDirs = {"t", "x"};

Expr component(const Expr& lagrangian, const Expr& w, const std::string& i) {
  Expr bracket = slot_partial(lagrangian, {i});
  for (const auto& j : kDirs) bracket -= total_derivative(slot_partial(lagrangian, {i, j}), j);
  for (const auto& j : kDirs)
    for (const auto& k : kDirs)
      bracket += total_derivative(total_derivative(slot_partial(lagrangian, {i, j, k}), k), j);
  Expr out = w * bracket;

  for (const auto& j : kDirs) {
    Expr mid = slot_partial(lagrangian, {i, j});
    for (const auto& k : kDirs) mid -= total_derivative(slot_partial(lagrangian, {i, j, k}), k);
    if (!mid.is_zero()) out += total_derivative(w, j) * mid;
  }
  for (const auto& j : kDirs) {
    for (const auto& k : kDirs) {
      Expr sp = slot_partial(lagrangian, {i, j, k});
      if (sp.is_zero()) continue;
      out += total_derivative(total_derivative(w, k), j) * sp;
    }
  }
  return out;
}

void require_no_nonlocal(const ConservedVector& cv) {
  for (const Expr* e : {&cv.c_t, &cv.c_x})
    for (const auto& j : jets_of(*e))
      if (j.base == "v")
        throw AlgebraError("conserved vector still carries the nonlocal variable v");
}

}  // namespace

ConservedVector conserved_vector_raw(const VectorField& f, const Equation& eq) {
  Expr lagrangian = formal_lagrangian(eq).symmetric_form;
  Expr w = characteristic(f);
  ConservedVector cv;
  cv.c_t = component(lagrangian, w, "t");
  cv.c_x = component(lagrangian, w, "x");
  cv.generator = f.name;
  cv.stage = VectorStage::Raw;
  return cv;
}

ConservedVector eliminate_nonlocal(const ConservedVector& cv, const Equation& eq) {
  auto v_to_u = [](const JetVar& j) {
    return Expr::atom(Atom::jet_var("u", j.t_order, j.x_order));
  };
  ConservedVector out;
  out.c_t = restrict_to_solutions(substitute_base_jets(cv.c_t, "v", v_to_u), eq);
  out.c_x = restrict_to_solutions(substitute_base_jets(cv.c_x, "v", v_to_u), eq);
  out.generator = cv.generator;
  out.stage = VectorStage::Restricted;
  return out;
}

ConservedVector reduce_vector(const ConservedVector& cv, const Equation& eq) {
  require_no_nonlocal(cv);
  Expr ct = restrict_to_solutions(cv.c_t, eq);
  Expr cx = restrict_to_solutions(cv.c_x, eq);
  IbpResult r = integrate_by_parts(ct, "x", &eq);
  ConservedVector out;
  out.c_t = r.remainder;
  out.c_x = restrict_to_solutions(cx + total_derivative(r.potential, "t"), eq);
  out.generator = cv.generator;
  out.stage = VectorStage::Reduced;
  return out;
}

bool is_trivial(const ConservedVector& cv, const Equation& eq) {
  require_no_nonlocal(cv);
  Expr ct = restrict_to_solutions(cv.c_t, eq);
  Expr cx = restrict_to_solutions(cv.c_x, eq);
  for (int round = 0; round < 6; ++round) {
    if (ct.is_zero() && cx.is_zero()) return true;
    Expr prev_ct = ct, prev_cx = cx;
    IbpResult rx = integrate_by_parts(ct, "x", &eq);
    ct = rx.remainder;
    cx = restrict_to_solutions(cx + total_derivative(rx.potential, "t"), eq);
    IbpResult rt = integrate_by_parts(cx, "t", &eq);
    cx = rt.remainder;
    ct = restrict_to_solutions(ct + total_derivative(rt.potential, "x"), eq);
    if (ct == prev_ct && cx == prev_cx) break;
  }
  return ct.is_zero() && cx.is_zero();
}

DivergenceResult verify_divergence(const ConservedVector& cv, const Equation& eq) {
  Expr divergence = total_derivative(cv.c_t, "t") + total_derivative(cv.c_x, "x");
  Atom lead = Atom::jet_var(eq.leading.base, eq.leading.t_order, eq.leading.x_order);
  Rational sign(eq.leading_sign);

  Expr quotient, rem = divergence;
  for (int iter = 0; iter < 16; ++iter) {
    Rational top(0);
    for (const auto& t : rem.terms()) {
      Rational e = t.exponent_of(lead);
      if (e > top) top = e;
    }
    if (top.is_zero()) break;
    if (!top.is_integer())
      throw AlgebraError("fractional power of the leading derivative in a divergence");
    long p = top.as_long();
    Expr a_p;
    for (const auto& t : rem.terms()) {
      if (t.exponent_of(lead) != top) continue;
      Term c;
      c.coeff = t.coeff;
      for (const auto& [at, ex] : t.powers)
        if (cmp(at, lead) != 0) c.powers.push_back({at, ex});
      a_p += Expr::from_terms({c});
    }
    Expr q = a_p.scale(sign) * Expr::atom(lead).pow(p - 1);
    quotient += q;
    rem -= q * eq.lhs;
  }

  DivergenceResult out;
  out.remainder = rem;
  if (rem.is_zero()) {
    out.exact = true;
    out.multiplier = quotient;
  }
  return out;
}

}  // namespace novsym
