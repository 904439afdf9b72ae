#include "novsym/parser.hpp"

#include <cctype>
#include <set>

namespace novsym {

namespace {

const std::set<std::string> kIndepNames = {"t", "x", "z", "s"};
const std::set<std::string> kJetBases = {"u", "v"};
const std::set<std::string> kConstNames = {"A", "c", "c1", "c2", "k", "alpha", "kappa"};

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts) : text_(text), opts_(opts) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, size_t off) const {
    throw ParseError(msg, off);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  Expr parse_expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Expr e = parse_term();
    if (neg) e = -e;
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        e += parse_term();
      } else if (c == '-') {
        ++pos_;
        e -= parse_term();
      } else {
        break;
      }
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        e = e * parse_factor();
      } else if (c == '/') {
        ++pos_;
        size_t off = pos_;
        Expr d = parse_factor();
        if (d.is_zero()) fail_at("division by zero", off);
        try {
          e = e * d.pow(-1);
        } catch (const AlgebraError& err) {
          fail_at(err.what(), off);
        }
      } else {
        break;
      }
    }
    return e;
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (peek() == '^') {
      ++pos_;
      size_t off = pos_;
      Rational ex = parse_exponent();
      try {
        base = base.pow(ex);
      } catch (const AlgebraError& err) {
        fail_at(err.what(), off);
      }
    }
    return base;
  }

  Rational parse_exponent() {
    skip_ws();
    if (eat('(')) {
      bool neg = eat('-');
      Rational num = parse_number_raw();
      Rational r = num;
      if (eat('/')) {
        Rational den = parse_number_raw();
        if (den.is_zero()) fail("zero denominator in exponent");
        r = num / den;
      }
      expect(')', "closing exponent");
      return neg ? -r : r;
    }
    bool neg = eat('-');
    Rational r = parse_number_raw();
    if (!r.is_integer()) fail("fractional exponents must be parenthesized");
    return neg ? -r : r;
  }

  Rational parse_number_raw() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start) fail("expected number");
    return Rational::from_string(text_.substr(start, pos_ - start));
  }

  std::string parse_ident_raw() {
    skip_ws();
    size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      fail("expected identifier");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    while (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected expression");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(parse_number_raw());
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')', "closing parenthesis");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t ident_off = pos_;
      std::string ident = parse_ident_raw();
      if (peek() == '(') {
        if (ident == "exp") return parse_exp_call(ident_off);
        return parse_opaque_call(ident, ident_off);
      }
      return classify_plain(ident, ident_off);
    }
    fail("expected expression");
  }

  Expr parse_exp_call(size_t off) {
    expect('(', "after exp");
    Expr arg = parse_expr();
    expect(')', "closing exp");
    LinForm lin;
    for (const auto& t : arg.terms()) {
      if (t.powers.empty())
        fail_at("exponential argument must have no constant part", off);
      if (t.powers.size() != 1 || !t.powers[0].second.is_one() ||
          t.powers[0].first.kind != AtomKind::Indep)
        fail_at("exponential argument must be linear in independent variables", off);
      lin.emplace_back(t.powers[0].first.name, t.coeff);
    }
    return Expr::atom(Atom::expo(lin));
  }

  Expr parse_opaque_call(const std::string& ident, size_t off) {
    size_t primes = 0;
    std::string name = ident;
    while (!name.empty() && name.back() == '\'') {
      name.pop_back();
      ++primes;
    }
    expect('(', "after function name");
    std::vector<std::string> args;
    if (peek() != ')') {
      while (true) {
        size_t aoff = pos_;
        std::string a = parse_ident_raw();
        if (kIndepNames.count(a) == 0 && kJetBases.count(a) == 0)
          fail_at("function argument must be an independent variable or u, v", aoff);
        args.push_back(a);
        if (!eat(',')) break;
      }
    }
    expect(')', "closing argument list");
    if (args.empty()) fail_at("function needs at least one argument", off);

    std::vector<int> dcounts(args.size(), 0);
    if (primes > 0) {
      if (args.size() != 1)
        fail_at("prime derivative marks require a single-argument function", off);
      dcounts[0] = static_cast<int>(primes);
    }
    auto us = name.rfind('_');
    if (us != std::string::npos && us + 1 < name.size()) {
      std::string suffix = name.substr(us + 1);
      std::vector<int> d(args.size(), 0);
      bool ok = true;
      for (char sc : suffix) {
        std::string letter(1, sc);
        auto it = std::find(args.begin(), args.end(), letter);
        if (it == args.end()) {
          ok = false;
          break;
        }
        d[static_cast<size_t>(it - args.begin())] += 1;
      }
      if (ok) {
        if (primes > 0) fail_at("mixed prime and suffix derivative marks", off);
        name = name.substr(0, us);
        dcounts = d;
      }
    }
    if (name.empty() || kIndepNames.count(name) || kJetBases.count(name) ||
        kConstNames.count(name) || name == "exp")
      fail_at("reserved name used as a function: " + name, off);
    return Expr::atom(Atom::opaque(name, args, dcounts));
  }

  Expr classify_plain(const std::string& ident, size_t off) {
    if (ident.find('\'') != std::string::npos)
      fail_at("prime marks need a function call", off);
    if (kIndepNames.count(ident)) return Expr::atom(Atom::indep(ident));
    if (kConstNames.count(ident)) return Expr::atom(Atom::constant(ident));
    auto us = ident.find('_');
    std::string base = us == std::string::npos ? ident : ident.substr(0, us);
    if (kJetBases.count(base)) {
      int t_order = 0, x_order = 0;
      if (us != std::string::npos) {
        std::string suffix = ident.substr(us + 1);
        if (suffix.empty()) fail_at("empty derivative suffix", off);
        for (char sc : suffix) {
          if (sc == 't')
            ++t_order;
          else if (sc == 'x')
            ++x_order;
          else
            fail_at("derivative suffix may contain only t and x", off);
        }
      }
      if (t_order + x_order > opts_.max_jet_order)
        fail_at("jet order above maximum " + std::to_string(opts_.max_jet_order), off);
      return Expr::atom(Atom::jet_var(base, t_order, x_order));
    }
    fail_at("unknown identifier: " + ident, off);
  }

  const std::string& text_;
  ParseOptions opts_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text, const ParseOptions& opts) {
  return Parser(text, opts).run();
}

}  // namespace novsym
