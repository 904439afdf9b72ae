#include "novsym/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace novsym {

// ---------------------------------------------------------------------------
// JetVar
// ---------------------------------------------------------------------------

std::string JetVar::to_string() const {
  if (order() == 0) return base;
  std::string s = base + "_";
  s.append(t_order, 't');
  s.append(x_order, 'x');
  return s;
}

int cmp(const JetVar& a, const JetVar& b) {
  if (a.base != b.base) return a.base < b.base ? -1 : 1;
  if (a.t_order != b.t_order) return a.t_order < b.t_order ? -1 : 1;
  if (a.x_order != b.x_order) return a.x_order < b.x_order ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// Atom
// ---------------------------------------------------------------------------

Atom Atom::indep(std::string n) {
  Atom a;
  a.kind = AtomKind::Indep;
  a.name = std::move(n);
  return a;
}

Atom Atom::constant(std::string n) {
  Atom a;
  a.kind = AtomKind::Const;
  a.name = std::move(n);
  return a;
}

Atom Atom::jet_var(std::string base, int t, int x) {
  Atom a;
  a.kind = AtomKind::Jet;
  a.jet = JetVar{std::move(base), t, x};
  return a;
}

Atom Atom::expo(LinForm lin) {
  Atom a;
  a.kind = AtomKind::Exp;
  std::sort(lin.begin(), lin.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });
  for (const auto& [v, c] : lin)
    if (!c.is_zero()) a.lin.emplace_back(v, c);
  return a;
}

Atom Atom::opaque(std::string n, std::vector<std::string> args, std::vector<int> dcounts) {
  Atom a;
  a.kind = AtomKind::Opaque;
  a.name = std::move(n);
  a.args = std::move(args);
  if (dcounts.empty()) dcounts.assign(a.args.size(), 0);
  a.dcounts = std::move(dcounts);
  if (a.dcounts.size() != a.args.size())
    throw AlgebraError("opaque function derivative index does not match argument list");
  return a;
}

static int cmp(const LinForm& a, const LinForm& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
    int c = a[i].second.cmp(b[i].second);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int cmp(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case AtomKind::Indep:
    case AtomKind::Const:
      return a.name == b.name ? 0 : (a.name < b.name ? -1 : 1);
    case AtomKind::Jet:
      return cmp(a.jet, b.jet);
    case AtomKind::Exp:
      return cmp(a.lin, b.lin);
    case AtomKind::Opaque: {
      if (a.name != b.name) return a.name < b.name ? -1 : 1;
      if (a.args != b.args) return a.args < b.args ? -1 : 1;
      if (a.dcounts != b.dcounts) return a.dcounts < b.dcounts ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

static std::string linform_to_string(const LinForm& lin) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : lin) {
    Rational a = c.abs();
    if (first) {
      if (c.is_negative()) os << "-";
      first = false;
    } else {
      os << (c.is_negative() ? " - " : " + ");
    }
    if (!a.is_one()) os << a.to_string() << "*";
    os << v;
  }
  if (first) os << "0";
  return os.str();
}

std::string Atom::to_string() const {
  switch (kind) {
    case AtomKind::Indep:
    case AtomKind::Const:
      return name;
    case AtomKind::Jet:
      return jet.to_string();
    case AtomKind::Exp:
      return "exp(" + linform_to_string(lin) + ")";
    case AtomKind::Opaque: {
      std::string s = name;
      int total = 0;
      for (int d : dcounts) total += d;
      if (total > 0) {
        if (args.size() == 1) {
          s.append(dcounts[0], '\'');
        } else {
          s += "_";
          for (size_t i = 0; i < args.size(); ++i)
            for (int k = 0; k < dcounts[i]; ++k) s += args[i];
        }
      }
      s += "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i];
      }
      s += ")";
      return s;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// monomials and terms
// ---------------------------------------------------------------------------

static void add_to_linform(LinForm& lin, const std::string& var, const Rational& c) {
  for (auto& [v, cc] : lin) {
    if (v == var) {
      cc += c;
      return;
    }
  }
  lin.emplace_back(var, c);
}

/// Canonical monomial: sorted distinct atoms, nonzero exponents, and at most
/// one exponential atom (exp(L1)^a * exp(L2)^b folds into exp(a*L1 + b*L2)).
static PowerList normalize_powers(const PowerList& in) {
  LinForm acc;
  PowerList flat;
  for (const auto& [a, e] : in) {
    if (e.is_zero()) continue;
    if (a.kind == AtomKind::Exp) {
      for (const auto& [v, c] : a.lin) add_to_linform(acc, v, c * e);
    } else {
      flat.emplace_back(a, e);
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const auto& p, const auto& q) { return cmp(p.first, q.first) < 0; });
  PowerList out;
  for (auto& [a, e] : flat) {
    if (!out.empty() && cmp(out.back().first, a) == 0)
      out.back().second += e;
    else
      out.emplace_back(a, e);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& p) { return p.second.is_zero(); }),
            out.end());
  Atom ex = Atom::expo(acc);
  if (!ex.lin.empty()) {
    auto pos = std::lower_bound(out.begin(), out.end(), ex, [](const auto& p, const Atom& a) {
      return cmp(p.first, a) < 0;
    });
    out.insert(pos, {ex, Rational(1)});
  }
  return out;
}

Rational Term::degree() const {
  Rational d(0);
  for (const auto& [a, e] : powers) d += e;
  return d;
}

bool Term::has_atom(const Atom& a) const {
  for (const auto& [b, e] : powers)
    if (cmp(a, b) == 0) return true;
  return false;
}

Rational Term::exponent_of(const Atom& a) const {
  for (const auto& [b, e] : powers)
    if (cmp(a, b) == 0) return e;
  return Rational(0);
}

int cmp_monomial(const PowerList& a, const PowerList& b) {
  Rational da(0), db(0);
  for (const auto& [at, e] : a) da += e;
  for (const auto& [at, e] : b) db += e;
  int c = da.cmp(db);
  if (c != 0) return c;
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    c = cmp(a[i].first, b[i].first);
    if (c != 0) return c;
    c = a[i].second.cmp(b[i].second);
    if (c != 0) return -c;  // larger exponent first
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

static bool mono_less(const PowerList& a, const PowerList& b) { return cmp_monomial(a, b) < 0; }

using MonoMap = std::map<PowerList, Rational, bool (*)(const PowerList&, const PowerList&)>;

static MonoMap make_mono_map() { return MonoMap(&mono_less); }

static Expr from_mono_map(const MonoMap& m) {
  std::vector<Term> ts;
  ts.reserve(m.size());
  for (const auto& [pl, c] : m)
    if (!c.is_zero()) ts.push_back(Term{c, pl});
  return Expr::from_terms(std::move(ts));
}

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

Expr::Expr(long n) {
  if (n != 0) terms_.push_back(Term{Rational(n), {}});
}

Expr::Expr(const Rational& r) {
  if (!r.is_zero()) terms_.push_back(Term{r, {}});
}

Expr Expr::atom(const Atom& a) {
  Expr e;
  PowerList pl = normalize_powers({{a, Rational(1)}});
  e.terms_.push_back(Term{Rational(1), std::move(pl)});
  if (e.terms_.back().powers.empty()) return Expr(1);  // exp(0)
  return e;
}

Expr Expr::from_terms(std::vector<Term> terms) {
  auto m = make_mono_map();
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    PowerList pl = normalize_powers(t.powers);
    auto [it, inserted] = m.try_emplace(std::move(pl), t.coeff);
    if (!inserted) it->second += t.coeff;
  }
  Expr e;
  e.terms_.reserve(m.size());
  for (const auto& [pl, c] : m)
    if (!c.is_zero()) e.terms_.push_back(Term{c, pl});
  return e;
}

bool Expr::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].powers.empty());
}

Rational Expr::rational_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_rational()) throw AlgebraError("expression is not a plain rational: " + to_string());
  return terms_[0].coeff;
}

Expr Expr::operator+(const Expr& o) const {
  auto m = make_mono_map();
  for (const auto& t : terms_) m[t.powers] = t.coeff;
  for (const auto& t : o.terms_) {
    auto [it, inserted] = m.try_emplace(t.powers, t.coeff);
    if (!inserted) it->second += t.coeff;
  }
  return from_mono_map(m);
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator-() const {
  Expr e = *this;
  for (auto& t : e.terms_) t.coeff = -t.coeff;
  return e;
}

Expr Expr::scale(const Rational& r) const {
  if (r.is_zero()) return Expr();
  Expr e = *this;
  for (auto& t : e.terms_) t.coeff *= r;
  return e;
}

Expr Expr::operator*(const Expr& o) const {
  auto m = make_mono_map();
  for (const auto& t : terms_) {
    for (const auto& s : o.terms_) {
      PowerList pl = t.powers;
      pl.insert(pl.end(), s.powers.begin(), s.powers.end());
      pl = normalize_powers(pl);
      Rational c = t.coeff * s.coeff;
      auto [it, inserted] = m.try_emplace(std::move(pl), c);
      if (!inserted) it->second += c;
    }
  }
  return from_mono_map(m);
}

Expr Expr::pow(long n) const {
  if (n == 0) return Expr(1);
  if (n < 0) {
    if (terms_.size() != 1)
      throw AlgebraError("negative power of a non-monomial expression: " + to_string());
    Term t = terms_[0];
    Term inv;
    inv.coeff = t.coeff.pow_int(-1);
    for (const auto& [a, e] : t.powers) inv.powers.emplace_back(a, -e);
    Expr base = Expr::from_terms({inv});
    return base.pow(-n);
  }
  Expr result(1);
  Expr base = *this;
  long k = n;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = (k >>= 1) ? base * base : base;
  }
  return result;
}

Expr Expr::pow(const Rational& r) const {
  if (r.is_integer()) return pow(r.as_long());
  if (terms_.empty()) return Expr();
  if (terms_.size() != 1)
    throw AlgebraError("non-integer power of a non-monomial expression: " + to_string());
  const Term& t = terms_[0];
  auto c = t.coeff.pow_rational(r);
  if (!c)
    throw AlgebraError("coefficient " + t.coeff.to_string() + " has no exact power " +
                       r.to_string());
  PowerList pl;
  for (const auto& [a, e] : t.powers) pl.emplace_back(a, e * r);
  return Expr::from_terms({Term{*c, std::move(pl)}});
}

bool Expr::operator==(const Expr& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != o.terms_[i].coeff) return false;
    if (cmp_monomial(terms_[i].powers, o.terms_[i].powers) != 0) return false;
  }
  return true;
}

static std::string power_to_string(const Atom& a, const Rational& e) {
  std::string s = a.to_string();
  if (e.is_one()) return s;
  if (e.is_integer() && !e.is_negative()) return s + "^" + e.to_string();
  return s + "^(" + e.to_string() + ")";
}

static std::string term_body_to_string(const Term& t) {
  Rational c = t.coeff.abs();
  std::ostringstream os;
  bool need_star = false;
  if (t.powers.empty() || !c.is_one()) {
    os << c.to_string();
    need_star = true;
  }
  for (const auto& [a, e] : t.powers) {
    if (need_star) os << "*";
    os << power_to_string(a, e);
    need_star = true;
  }
  return os.str();
}

std::string Expr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (first) {
      if (t.coeff.is_negative()) os << "-";
      first = false;
    } else {
      os << (t.coeff.is_negative() ? " - " : " + ");
    }
    os << term_body_to_string(t);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

static Expr term_without(const Term& t, size_t skip) {
  Term r;
  r.coeff = t.coeff;
  for (size_t i = 0; i < t.powers.size(); ++i)
    if (i != skip) r.powers.push_back(t.powers[i]);
  return Expr::from_terms({r});
}

/// Partial derivative of a bare atom with respect to the target coordinate.
static Expr datom_partial(const Atom& a, const Atom& target) {
  if (cmp(a, target) == 0) return Expr(1);
  switch (a.kind) {
    case AtomKind::Indep:
    case AtomKind::Const:
    case AtomKind::Jet:
      return Expr();
    case AtomKind::Exp: {
      if (target.kind != AtomKind::Indep) return Expr();
      for (const auto& [v, c] : a.lin)
        if (v == target.name) return Expr(c) * Expr::atom(a);
      return Expr();
    }
    case AtomKind::Opaque: {
      std::string argname;
      if (target.kind == AtomKind::Indep) argname = target.name;
      else if (target.kind == AtomKind::Jet && target.jet.order() == 0) argname = target.jet.base;
      else return Expr();
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i] == argname) {
          Atom d = a;
          d.dcounts[i] += 1;
          return Expr::atom(d);
        }
      }
      return Expr();
    }
  }
  return Expr();
}

Expr diff_partial(const Expr& e, const Atom& target) {
  if (target.kind != AtomKind::Indep && target.kind != AtomKind::Jet)
    throw AlgebraError("diff_partial target must be a jet or independent variable");
  Expr result;
  for (const auto& t : e.terms()) {
    for (size_t i = 0; i < t.powers.size(); ++i) {
      const auto& [a, k] = t.powers[i];
      Expr da = datom_partial(a, target);
      if (da.is_zero()) continue;
      Expr rest = term_without(t, i).scale(k);
      result += rest * Expr::atom(a).pow(k - Rational(1)) * da;
    }
  }
  return result;
}

static Expr dtotal_atom(const Atom& a, const std::string& var, int max_order) {
  switch (a.kind) {
    case AtomKind::Indep:
      return a.name == var ? Expr(1) : Expr();
    case AtomKind::Const:
      return Expr();
    case AtomKind::Jet: {
      JetVar j = a.jet;
      if (var == "t")
        j.t_order += 1;
      else if (var == "x")
        j.x_order += 1;
      else
        throw AlgebraError("total derivative of jet variable along " + var);
      if (j.order() > max_order)
        throw JetOrderError("jet order above maximum: " + j.to_string());
      return Expr::atom(Atom::jet_var(j.base, j.t_order, j.x_order));
    }
    case AtomKind::Exp: {
      for (const auto& [v, c] : a.lin)
        if (v == var) return Expr(c) * Expr::atom(a);
      return Expr();
    }
    case AtomKind::Opaque: {
      Expr sum;
      for (size_t i = 0; i < a.args.size(); ++i) {
        Atom d = a;
        d.dcounts[i] += 1;
        const std::string& arg = a.args[i];
        Expr darg;
        if (arg == "u" || arg == "v") {
          darg = dtotal_atom(Atom::jet_var(arg, 0, 0), var, max_order);
        } else {
          darg = (arg == var) ? Expr(1) : Expr();
        }
        if (!darg.is_zero()) sum += Expr::atom(d) * darg;
      }
      return sum;
    }
  }
  return Expr();
}

Expr total_derivative(const Expr& e, const std::string& var, int max_order) {
  Expr result;
  for (const auto& t : e.terms()) {
    for (size_t i = 0; i < t.powers.size(); ++i) {
      const auto& [a, k] = t.powers[i];
      Expr da = dtotal_atom(a, var, max_order);
      if (da.is_zero()) continue;
      Expr rest = term_without(t, i).scale(k);
      result += rest * Expr::atom(a).pow(k - Rational(1)) * da;
    }
  }
  return result;
}

Expr total_derivative_n(const Expr& e, const std::string& var, int n, int max_order) {
  Expr r = e;
  for (int i = 0; i < n; ++i) r = total_derivative(r, var, max_order);
  return r;
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

static long positive_int_exponent(const Rational& e, const std::string& what) {
  if (!e.is_integer() || e.is_negative() || e.is_zero())
    throw AlgebraError("substitution requires positive integer powers of " + what +
                       ", found exponent " + e.to_string());
  return e.as_long();
}

Expr substitute_jet(const Expr& e, const JetVar& j, const Expr& repl) {
  Atom target = Atom::jet_var(j.base, j.t_order, j.x_order);
  Expr result;
  for (const auto& t : e.terms()) {
    Term rest;
    rest.coeff = t.coeff;
    long k = 0;
    for (const auto& [a, ex] : t.powers) {
      if (cmp(a, target) == 0)
        k = positive_int_exponent(ex, j.to_string());
      else
        rest.powers.push_back({a, ex});
    }
    Expr piece = Expr::from_terms({rest});
    if (k > 0) piece = piece * repl.pow(k);
    result += piece;
  }
  return result;
}

Expr substitute_base_jets(const Expr& e, const std::string& base,
                          const std::function<Expr(const JetVar&)>& f) {
  Expr result;
  for (const auto& t : e.terms()) {
    Term rest;
    rest.coeff = t.coeff;
    Expr piece(1);
    bool hit = false;
    for (const auto& [a, ex] : t.powers) {
      if (a.kind == AtomKind::Jet && a.jet.base == base) {
        long k = positive_int_exponent(ex, a.jet.to_string());
        piece = piece * f(a.jet).pow(k);
        hit = true;
      } else {
        rest.powers.push_back({a, ex});
      }
    }
    Expr r = Expr::from_terms({rest});
    result += hit ? r * piece : r;
  }
  return result;
}

Expr substitute_opaque(const Expr& e, const std::string& name, const Expr& candidate) {
  std::map<std::vector<int>, Expr> memo;
  auto derived = [&](const Atom& a) -> const Expr& {
    auto it = memo.find(a.dcounts);
    if (it != memo.end()) return it->second;
    Expr d = candidate;
    for (size_t i = 0; i < a.args.size(); ++i) {
      Atom coord = (a.args[i] == "u" || a.args[i] == "v")
                       ? Atom::jet_var(a.args[i], 0, 0)
                       : Atom::indep(a.args[i]);
      for (int k = 0; k < a.dcounts[i]; ++k) d = diff_partial(d, coord);
    }
    return memo.emplace(a.dcounts, std::move(d)).first->second;
  };
  Expr result;
  for (const auto& t : e.terms()) {
    Term rest;
    rest.coeff = t.coeff;
    Expr piece(1);
    bool hit = false;
    for (const auto& [a, ex] : t.powers) {
      if (a.kind == AtomKind::Opaque && a.name == name) {
        long k = positive_int_exponent(ex, a.to_string());
        piece = piece * derived(a).pow(k);
        hit = true;
      } else {
        rest.powers.push_back({a, ex});
      }
    }
    Expr r = Expr::from_terms({rest});
    result += hit ? r * piece : r;
  }
  return result;
}

Expr reflect_x(const Expr& e) {
  Expr result;
  for (const auto& t : e.terms()) {
    Term nt;
    nt.coeff = t.coeff;
    for (const auto& [a, ex] : t.powers) {
      switch (a.kind) {
        case AtomKind::Indep:
          if (a.name == "x") {
            if (!ex.is_integer())
              throw AlgebraError("cannot reflect fractional power of x");
            if (ex.as_long() % 2 != 0) nt.coeff = -nt.coeff;
          }
          nt.powers.push_back({a, ex});
          break;
        case AtomKind::Exp: {
          LinForm lin = a.lin;
          for (auto& [v, c] : lin)
            if (v == "x") c = -c;
          nt.powers.push_back({Atom::expo(lin), ex});
          break;
        }
        case AtomKind::Jet: {
          if (a.jet.x_order % 2 != 0) nt.coeff = -nt.coeff;
          nt.powers.push_back({a, ex});
          break;
        }
        case AtomKind::Opaque: {
          for (size_t i = 0; i < a.args.size(); ++i)
            if (a.args[i] == "x")
              throw AlgebraError("cannot reflect opaque function of x");
          nt.powers.push_back({a, ex});
          break;
        }
        case AtomKind::Const:
          nt.powers.push_back({a, ex});
          break;
      }
    }
    result += Expr::from_terms({nt});
  }
  return result;
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

std::set<Atom> atoms_of(const Expr& e) {
  std::set<Atom> out;
  for (const auto& t : e.terms())
    for (const auto& [a, ex] : t.powers) out.insert(a);
  return out;
}

std::set<JetVar> jets_of(const Expr& e) {
  std::set<JetVar> out;
  for (const auto& t : e.terms())
    for (const auto& [a, ex] : t.powers)
      if (a.kind == AtomKind::Jet) out.insert(a.jet);
  return out;
}

bool contains_atom(const Expr& e, const Atom& a) {
  for (const auto& t : e.terms())
    if (t.has_atom(a)) return true;
  return false;
}

int max_jet_order(const Expr& e) {
  int m = 0;
  for (const auto& t : e.terms())
    for (const auto& [a, ex] : t.powers)
      if (a.kind == AtomKind::Jet) m = std::max(m, a.jet.order());
  return m;
}

std::map<PowerList, Expr, bool (*)(const PowerList&, const PowerList&)> collect_by(
    const Expr& e, const std::function<bool(const Atom&)>& pred) {
  std::map<PowerList, Expr, bool (*)(const PowerList&, const PowerList&)> out(&mono_less);
  for (const auto& t : e.terms()) {
    PowerList key;
    Term rest;
    rest.coeff = t.coeff;
    for (const auto& [a, ex] : t.powers) {
      if (pred(a))
        key.push_back({a, ex});
      else
        rest.powers.push_back({a, ex});
    }
    out[key] += Expr::from_terms({rest});
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

std::pair<Expr, Expr> split_linear(const Expr& e, const Atom& a) {
  Expr lin, rest;
  for (const auto& t : e.terms()) {
    Rational ex = t.exponent_of(a);
    if (ex.is_zero()) {
      rest += Expr::from_terms({t});
    } else if (ex.is_one()) {
      Term c;
      c.coeff = t.coeff;
      for (const auto& [b, k] : t.powers)
        if (cmp(a, b) != 0) c.powers.push_back({b, k});
      lin += Expr::from_terms({c});
    } else {
      throw AlgebraError("expression is not linear in " + a.to_string());
    }
  }
  return {lin, rest};
}

// ---------------------------------------------------------------------------
// numeric evaluation
// ---------------------------------------------------------------------------

static double eval_atom(const Atom& a, const EvalContext& ctx) {
  switch (a.kind) {
    case AtomKind::Indep: {
      auto it = ctx.indep.find(a.name);
      if (it == ctx.indep.end()) throw EvalError("unbound variable " + a.name);
      return it->second;
    }
    case AtomKind::Const: {
      auto it = ctx.constants.find(a.name);
      if (it == ctx.constants.end()) throw EvalError("unbound constant " + a.name);
      return it->second;
    }
    case AtomKind::Jet: {
      auto it = ctx.jets.find(a.jet);
      if (it == ctx.jets.end()) throw EvalError("unbound jet " + a.jet.to_string());
      return it->second;
    }
    case AtomKind::Exp: {
      double s = 0;
      for (const auto& [v, c] : a.lin) {
        auto it = ctx.indep.find(v);
        if (it == ctx.indep.end()) throw EvalError("unbound variable " + v);
        s += c.to_double() * it->second;
      }
      return std::exp(s);
    }
    case AtomKind::Opaque: {
      auto it = ctx.funcs.find(a.name);
      if (it == ctx.funcs.end()) throw EvalError("unbound function " + a.name);
      std::vector<double> argv;
      argv.reserve(a.args.size());
      for (const auto& arg : a.args) {
        if (arg == "u" || arg == "v") {
          auto jt = ctx.jets.find(JetVar{arg, 0, 0});
          if (jt == ctx.jets.end()) throw EvalError("unbound jet " + arg);
          argv.push_back(jt->second);
        } else {
          auto vt = ctx.indep.find(arg);
          if (vt == ctx.indep.end()) throw EvalError("unbound variable " + arg);
          argv.push_back(vt->second);
        }
      }
      return it->second(a.dcounts, argv);
    }
  }
  throw EvalError("unreachable atom kind");
}

double eval_numeric(const Expr& e, const EvalContext& ctx) {
  double sum = 0;
  for (const auto& t : e.terms()) {
    double prod = t.coeff.to_double();
    for (const auto& [a, ex] : t.powers) {
      double v = eval_atom(a, ctx);
      if (ex.is_integer()) {
        prod *= std::pow(v, static_cast<double>(ex.as_long()));
      } else {
        if (v < 0)
          throw EvalError("negative base " + std::to_string(v) + " with non-integer power " +
                          ex.to_string());
        prod *= std::pow(v, ex.to_double());
      }
    }
    sum += prod;
  }
  return sum;
}

}  // namespace novsym
