#ifndef KOP_EXACT_HPP
#define KOP_EXACT_HPP

#include <gmpxx.h>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace kop
{

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p/q" or a decimal such as "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

/// Element a + b*sqrt(k) of a real quadratic field Q(sqrt(k)).
///
/// The radicand k is a positive integer that is not a perfect square, or 0
/// when the element is rational. Arithmetic between two irrational elements
/// is only defined when both live in the same field; mixing fields throws
/// std::domain_error.
class Quadratic
{
public:
  Quadratic() = default;
  Quadratic(long v) : a_(v) {}
  Quadratic(int v) : a_(v) {}
  Quadratic(Rational a) : a_(std::move(a)) {}
  Quadratic(Rational a, Rational b, Integer radicand);

  /// Exact square root of a nonnegative rational, as an element of Q(sqrt(k))
  /// with k squarefree up to trial division.
  static Quadratic sqrt_of(const Rational& n);

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  const Integer& radicand() const { return k_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  int sign() const;

  /// Throws std::domain_error unless is_rational().
  const Rational& as_rational() const;

  double to_double() const;
  long double to_long_double() const;

  Quadratic operator-() const;
  Quadratic& operator+=(const Quadratic& o);
  Quadratic& operator-=(const Quadratic& o);
  Quadratic& operator*=(const Quadratic& o);
  Quadratic& operator/=(const Quadratic& o);

  friend Quadratic operator+(Quadratic x, const Quadratic& y) { return x += y; }
  friend Quadratic operator-(Quadratic x, const Quadratic& y) { return x -= y; }
  friend Quadratic operator*(Quadratic x, const Quadratic& y) { return x *= y; }
  friend Quadratic operator/(Quadratic x, const Quadratic& y) { return x /= y; }

  friend bool operator==(const Quadratic& x, const Quadratic& y) { return (x - y).is_zero(); }
  friend bool operator!=(const Quadratic& x, const Quadratic& y) { return !(x == y); }
  friend bool operator<(const Quadratic& x, const Quadratic& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Quadratic& x, const Quadratic& y) { return y < x; }
  friend bool operator<=(const Quadratic& x, const Quadratic& y) { return !(y < x); }
  friend bool operator>=(const Quadratic& x, const Quadratic& y) { return !(x < y); }

  /// "a", "b*sqrt(k)" or "a + b*sqrt(k)" with rationals printed as p/q.
  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const Quadratic& x) { return os << x.str(); }

private:
  void adopt_field(const Quadratic& o);
  void normalize();

  Rational a_;
  Rational b_;
  Integer k_;  // 0 when b_ == 0
};

// Scalar traits used by the templated containers (Polynomial, CartanVec).
inline bool is_zero(const Quadratic& x) { return x.is_zero(); }
inline bool is_zero(double x) { return x == 0.0; }
inline int sign_of(const Quadratic& x) { return x.sign(); }
inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline double as_double(const Quadratic& x) { return x.to_double(); }
inline double as_double(double x) { return x; }

}  // namespace kop

#endif
