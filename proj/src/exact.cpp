#include "kop/exact.hpp"

#include <cmath>
#include <sstream>

namespace kop
{

namespace
{

// Splits n = s^2 * k with k free of prime squares below the trial bound.
void split_square(Integer n, Integer& s, Integer& k)
{
  s = 1;
  if (mpz_perfect_square_p(n.get_mpz_t()))
  {
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    k = 1;
    return;
  }
  for (unsigned long p = 2; p < 100000; ++p)
  {
    Integer pp = Integer(p) * p;
    if (pp > n)
      break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p * p))
    {
      n /= pp;
      s *= p;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t()))
  {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    s *= r;
    n = 1;
  }
  k = n;
}

mpf_class high_precision(const Rational& q)
{
  mpf_class f(0, 256);
  f = q;
  return f;
}

// mpf get_d truncates toward zero; pick the nearer of the two neighbours
double round_nearest(const mpf_class& v)
{
  const double d = v.get_d();
  if (sgn(v) == 0 || !std::isfinite(d))
    return d;
  const double away = std::nextafter(d, sgn(v) > 0 ? HUGE_VAL : -HUGE_VAL);
  const mpf_class e1 = abs(v - mpf_class(d, 256));
  const mpf_class e2 = abs(mpf_class(away, 256) - v);
  return e2 < e1 ? away : d;
}

}  // namespace

Rational parse_rational(const std::string& text)
{
  std::string t;
  for (char c : text)
    if (c != ' ')
      t.push_back(c);
  if (t.empty())
    throw std::invalid_argument("empty rational literal");
  if (t.front() == '+')
    t.erase(t.begin());
  auto dot = t.find('.');
  if (dot != std::string::npos)
  {
    if (t.find('/') != std::string::npos)
      throw std::invalid_argument("malformed rational literal: " + text);
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    std::size_t frac = t.size() - dot - 1;
    Integer num;
    if (num.set_str(digits, 10) != 0)
      throw std::invalid_argument("malformed rational literal: " + text);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(t, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + text);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q)
{
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Quadratic::Quadratic(Rational a, Rational b, Integer radicand)
  : a_(std::move(a)), b_(std::move(b)), k_(std::move(radicand))
{
  if (k_ < 0)
    throw std::domain_error("negative radicand");
  normalize();
}

Quadratic Quadratic::sqrt_of(const Rational& n)
{
  if (n < 0)
    throw std::domain_error("square root of a negative rational");
  if (n == 0)
    return Quadratic();
  // sqrt(p/q) = sqrt(p*q)/q
  Integer pq = n.get_num() * n.get_den();
  Integer s, k;
  split_square(pq, s, k);
  Rational coef(s, n.get_den());
  coef.canonicalize();
  if (k == 1)
    return Quadratic(coef);
  return Quadratic(Rational(0), coef, k);
}

void Quadratic::normalize()
{
  if (b_ == 0 || k_ == 0)
  {
    b_ = 0;
    k_ = 0;
    return;
  }
  Integer s, k;
  split_square(k_, s, k);
  if (k == 1)
  {
    a_ += b_ * Rational(s);
    b_ = 0;
    k_ = 0;
    return;
  }
  b_ *= Rational(s);
  k_ = k;
}

void Quadratic::adopt_field(const Quadratic& o)
{
  if (o.b_ == 0)
    return;
  if (b_ == 0)
  {
    k_ = o.k_;
    return;
  }
  if (k_ != o.k_)
    throw std::domain_error("arithmetic across different quadratic fields: sqrt(" + k_.get_str() +
                            ") vs sqrt(" + o.k_.get_str() + ")");
}

int Quadratic::sign() const
{
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0)
    return sa;
  if (sa == 0 || sa == sb)
    return sb;
  // opposite signs: compare a^2 with b^2 k
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * Rational(k_);
  int c = cmp(lhs, rhs);
  return c > 0 ? sa : (c < 0 ? sb : 0);
}

const Rational& Quadratic::as_rational() const
{
  if (!is_rational())
    throw std::domain_error("irrational value " + str() + " where a rational was required");
  return a_;
}

double Quadratic::to_double() const
{
  if (b_ == 0)
    return round_nearest(high_precision(a_));
  mpf_class r(0, 256);
  r = k_;
  r = sqrt(r);
  return round_nearest(high_precision(a_) + high_precision(b_) * r);
}

long double Quadratic::to_long_double() const
{
  if (b_ == 0)
  {
    const mpf_class v = high_precision(a_);
    const double hi = round_nearest(v);
    return static_cast<long double>(hi) + static_cast<long double>(round_nearest(v - mpf_class(hi, 256)));
  }
  // split to keep the extra bits of long double
  mpf_class r(0, 256);
  r = k_;
  r = sqrt(r);
  mpf_class v = high_precision(a_) + high_precision(b_) * r;
  const double hi = round_nearest(v);
  return static_cast<long double>(hi) + static_cast<long double>(round_nearest(v - mpf_class(hi, 256)));
}

Quadratic Quadratic::operator-() const
{
  Quadratic r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Quadratic& Quadratic::operator+=(const Quadratic& o)
{
  adopt_field(o);
  a_ += o.a_;
  b_ += o.b_;
  if (b_ == 0)
    k_ = 0;
  return *this;
}

Quadratic& Quadratic::operator-=(const Quadratic& o)
{
  adopt_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  if (b_ == 0)
    k_ = 0;
  return *this;
}

Quadratic& Quadratic::operator*=(const Quadratic& o)
{
  adopt_field(o);
  const Integer k = k_ != 0 ? k_ : o.k_;
  Rational a = a_ * o.a_ + b_ * o.b_ * Rational(k);
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  k_ = b_ == 0 ? Integer(0) : k;
  return *this;
}

Quadratic& Quadratic::operator/=(const Quadratic& o)
{
  if (o.is_zero())
    throw std::domain_error("division by zero");
  adopt_field(o);
  // (a + b r)/(c + d r) = (a + b r)(c - d r)/(c^2 - d^2 k)
  const Integer k = k_ != 0 ? k_ : o.k_;
  Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(k);
  Quadratic conj(o.a_, -o.b_, o.b_ == 0 ? Integer(0) : k);
  *this *= conj;
  a_ /= norm;
  b_ /= norm;
  return *this;
}

std::string Quadratic::str() const
{
  std::ostringstream os;
  if (b_ == 0)
  {
    os << a_.get_str();
    return os.str();
  }
  std::string rad = "sqrt(" + k_.get_str() + ")";
  std::string bpart;
  Rational babs = abs(b_);
  if (babs == 1)
    bpart = rad;
  else if (babs.get_den() == 1)
    bpart = babs.get_num().get_str() + "*" + rad;
  else if (babs.get_num() == 1)
    bpart = rad + "/" + babs.get_den().get_str();
  else
    bpart = babs.get_num().get_str() + "*" + rad + "/" + babs.get_den().get_str();
  if (a_ == 0)
    os << (b_ < 0 ? "-" : "") << bpart;
  else
    os << a_.get_str() << (b_ < 0 ? " - " : " + ") << bpart;
  return os.str();
}

}  // namespace kop
