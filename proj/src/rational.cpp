#include "novsym/rational.hpp"

namespace novsym {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw AlgebraError("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::from_string(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw AlgebraError("empty rational literal");
  long ten_exp = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    ten_exp = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
    if (s.empty()) throw AlgebraError("bad literal: " + text);
  }
  Rational r;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw AlgebraError("bad decimal literal: " + text);
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    r = Rational(mpq_class(num, den));
  } else {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::string n = s.substr(0, slash), d = s.substr(slash + 1);
      if (n.empty() || d.empty() ||
          n.find_first_not_of("0123456789") != std::string::npos ||
          d.find_first_not_of("0123456789") != std::string::npos)
        throw AlgebraError("bad rational literal: " + text);
      mpq_class q(mpz_class(n, 10), mpz_class(d, 10));
      if (q.get_den() == 0) throw AlgebraError("rational with zero denominator");
      r = Rational(q);
    } else {
      if (s.find_first_not_of("0123456789") != std::string::npos)
        throw AlgebraError("bad integer literal: " + text);
      r = Rational(mpq_class(mpz_class(s, 10)));
    }
  }
  if (ten_exp != 0) r *= Rational(10).pow_int(ten_exp);
  return neg ? -r : r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw AlgebraError("division by zero");
  return Rational(v_ / o.v_);
}

long Rational::as_long() const {
  if (!is_integer()) throw AlgebraError("as_long on non-integer " + to_string());
  if (!v_.get_num().fits_slong_p()) throw AlgebraError("integer too large: " + to_string());
  return v_.get_num().get_si();
}

Rational Rational::pow_int(long e) const {
  if (e == 0) return Rational(1);
  if (is_zero()) {
    if (e < 0) throw AlgebraError("zero to negative power");
    return Rational(0);
  }
  mpz_class num, den;
  unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(num.get_mpz_t(), v_.get_num().get_mpz_t(), a);
  mpz_pow_ui(den.get_mpz_t(), v_.get_den().get_mpz_t(), a);
  mpq_class q(num, den);
  q.canonicalize();
  Rational r{q};
  return e < 0 ? r.inverse() : r;
}

std::optional<Rational> Rational::pow_rational(const Rational& e) const {
  if (e.is_integer()) {
    if (!e.v_.get_num().fits_slong_p()) return std::nullopt;
    if (is_zero() && e.is_negative()) return std::nullopt;
    return pow_int(e.v_.get_num().get_si());
  }
  if (is_zero()) return e.is_negative() ? std::nullopt : std::optional<Rational>(Rational(0));
  if (is_one()) return Rational(1);
  if (!e.v_.get_den().fits_ulong_p() || !e.v_.get_num().fits_slong_p()) return std::nullopt;
  unsigned long root = e.v_.get_den().get_ui();
  long num_pow = e.v_.get_num().get_si();
  mpz_class n = v_.get_num(), d = v_.get_den();
  if (sgn(n) < 0 && root % 2 == 0) return std::nullopt;
  mpz_class rn, rd;
  int exact_n = mpz_root(rn.get_mpz_t(), n.get_mpz_t(), root);
  int exact_d = mpz_root(rd.get_mpz_t(), d.get_mpz_t(), root);
  if (!exact_n || !exact_d) return std::nullopt;
  mpq_class q(rn, rd);
  q.canonicalize();
  return Rational{q}.pow_int(num_pow);
}

Rational Rational::inverse() const {
  if (is_zero()) throw AlgebraError("inverse of zero");
  return Rational(1 / v_);
}

}  // namespace novsym
