#ifndef NOVSYM_EXPR_HPP
#define NOVSYM_EXPR_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "novsym/rational.hpp"

namespace novsym {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JetOrderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hard ceiling for jet orders produced by internal machinery (prolongation,
/// differential consequences). User-facing input is gated separately by the
/// configurable maximum handed to the parser.
inline constexpr int kJetOrderHardCap = 8;
inline constexpr int kDefaultMaxJetOrder = 4;

/// A derivative coordinate of a dependent variable, e.g. u_txx. Mixed
/// partials commute, so the multi-index is just a pair of counts; printing
/// always emits t's before x's.
struct JetVar {
  std::string base;  // "u" or "v"
  int t_order = 0;
  int x_order = 0;

  int order() const { return t_order + x_order; }
  std::string to_string() const;
};

int cmp(const JetVar& a, const JetVar& b);
inline bool operator==(const JetVar& a, const JetVar& b) { return cmp(a, b) == 0; }
inline bool operator<(const JetVar& a, const JetVar& b) { return cmp(a, b) < 0; }

/// Linear form over independent variables with rational coefficients;
/// the admissible argument class of an exponential atom.
using LinForm = std::vector<std::pair<std::string, Rational>>;  // sorted by name

enum class AtomKind { Indep, Const, Jet, Exp, Opaque };

/// One multiplicand of a monomial. The five kinds cover everything the
/// engine manipulates: independent variables (t, x, and reduction variables
/// z, s), named symbolic constants, jet variables, exponentials of linear
/// forms, and opaque functions carrying a derivative multi-index.
struct Atom {
  AtomKind kind = AtomKind::Indep;
  std::string name;                // Indep / Const / Opaque
  JetVar jet;                      // Jet
  LinForm lin;                     // Exp (nonempty, sorted)
  std::vector<std::string> args;   // Opaque argument names ("t","x","z","s","u")
  std::vector<int> dcounts;        // Opaque derivative counts per argument

  static Atom indep(std::string n);
  static Atom constant(std::string n);
  static Atom jet_var(std::string base, int t, int x);
  static Atom expo(LinForm lin);
  static Atom opaque(std::string n, std::vector<std::string> args, std::vector<int> dcounts = {});

  std::string to_string() const;
};

int cmp(const Atom& a, const Atom& b);
inline bool operator==(const Atom& a, const Atom& b) { return cmp(a, b) == 0; }
inline bool operator<(const Atom& a, const Atom& b) { return cmp(a, b) < 0; }

using PowerList = std::vector<std::pair<Atom, Rational>>;  // sorted, no zero exponents

/// coefficient * product of atom powers
struct Term {
  Rational coeff;
  PowerList powers;

  Rational degree() const;
  bool has_atom(const Atom& a) const;
  Rational exponent_of(const Atom& a) const;
};

int cmp_monomial(const PowerList& a, const PowerList& b);

/// Canonical multivariate expression: a sorted sum of terms with distinct
/// monomials and nonzero rational coefficients. Construction normalizes, so
/// structural equality of two Expr values decides mathematical equality
/// within the supported atom classes. Immutable in use; all operations
/// return fresh values.
class Expr {
 public:
  Expr() = default;
  Expr(long n);  // NOLINT: numeric literals promote implicitly
  explicit Expr(const Rational& r);
  static Expr atom(const Atom& a);
  static Expr from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  Rational rational_value() const;  // requires is_rational()
  bool is_single_term() const { return terms_.size() == 1; }

  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { *this = *this + o; return *this; }
  Expr& operator-=(const Expr& o) { *this = *this - o; return *this; }

  Expr scale(const Rational& r) const;
  Expr pow(long n) const;
  Expr pow(const Rational& r) const;  // non-integer exponents need a monomial base

  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

inline Expr operator*(const Rational& r, const Expr& e) { return e.scale(r); }
inline Expr operator*(long n, const Expr& e) { return e.scale(Rational(n)); }

/// normalize is the identity on this representation (expressions are
/// canonical by construction); exposed so callers can state intent.
inline Expr normalize(const Expr& e) { return e; }

// --- calculus -------------------------------------------------------------

/// Partial derivative treating every atom as an independent coordinate.
/// Valid targets: jet variables and independent variables.
Expr diff_partial(const Expr& e, const Atom& target);

/// Total derivative along an independent variable (chain rule through all
/// jets and opaque-function arguments). Throws JetOrderError past the cap.
Expr total_derivative(const Expr& e, const std::string& var,
                      int max_order = kJetOrderHardCap);

Expr total_derivative_n(const Expr& e, const std::string& var, int n,
                        int max_order = kJetOrderHardCap);

// --- substitution ----------------------------------------------------------

/// Replace one jet coordinate by an expression (the jet must occur with
/// positive integer exponents).
Expr substitute_jet(const Expr& e, const JetVar& j, const Expr& repl);

/// Replace every jet of a given base via a callback.
Expr substitute_base_jets(const Expr& e, const std::string& base,
                          const std::function<Expr(const JetVar&)>& f);

/// Replace an opaque function by a concrete expression of its arguments;
/// recorded derivative indices become partial derivatives of the candidate.
Expr substitute_opaque(const Expr& e, const std::string& name, const Expr& candidate);

/// x -> -x on expressions in (t, x, u, exponentials); integer powers of x
/// flip sign, exponential arguments negate their x coefficient.
Expr reflect_x(const Expr& e);

// --- queries ----------------------------------------------------------------

std::set<Atom> atoms_of(const Expr& e);
std::set<JetVar> jets_of(const Expr& e);
bool contains_atom(const Expr& e, const Atom& a);
int max_jet_order(const Expr& e);

/// Splits e as sum over monomials in the atoms selected by `pred`; the mapped
/// value is the cofactor expression of each such monomial.
std::map<PowerList, Expr, bool (*)(const PowerList&, const PowerList&)> collect_by(
    const Expr& e, const std::function<bool(const Atom&)>& pred);

/// e = A*a + B with A, B free of atom a; requires e polynomial of degree <= 1 in a.
std::pair<Expr, Expr> split_linear(const Expr& e, const Atom& a);

// --- numeric evaluation ------------------------------------------------------

using OpaqueEval =
    std::function<double(const std::vector<int>& dcounts, const std::vector<double>& args)>;

struct EvalContext {
  std::map<std::string, double> indep;
  std::map<std::string, double> constants;
  std::map<JetVar, double> jets;
  std::map<std::string, OpaqueEval> funcs;
};

double eval_numeric(const Expr& e, const EvalContext& ctx);

}  // namespace novsym

#endif
