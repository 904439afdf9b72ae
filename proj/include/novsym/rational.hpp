#ifndef NOVSYM_RATIONAL_HPP
#define NOVSYM_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace novsym {

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact rational number. All symbolic coefficients in the engine are of
/// this type; no floating point enters a normal form.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Rational(long num, long den);

  /// Accepts "7", "-3/4" and decimal literals like "0.25" (converted exactly).
  static Rational from_string(const std::string& text);

  Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
  Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
  Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  int cmp(const Rational& o) const { return ::cmp(v_, o.v_); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_negative() const { return sgn(v_) < 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// Integer value; caller must have checked is_integer and range.
  long as_long() const;

  Rational pow_int(long e) const;

  /// Exact e-th power for rational e, when it exists (perfect roots only).
  std::optional<Rational> pow_rational(const Rational& e) const;

  Rational inverse() const;
  Rational abs() const { return Rational(::abs(v_)); }

  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_;
};

inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }

}  // namespace novsym

#endif
