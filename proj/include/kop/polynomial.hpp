#ifndef KOP_POLYNOMIAL_HPP
#define KOP_POLYNOMIAL_HPP

#include "kop/exact.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kop
{

/// Dense univariate polynomial, coefficients stored lowest degree first.
/// S is Quadratic (exact) or double.
template <class S>
class Polynomial
{
public:
  Polynomial() = default;
  Polynomial(std::initializer_list<S> c) : c_(c) { trim(); }
  explicit Polynomial(std::vector<S> c) : c_(std::move(c)) { trim(); }

  static Polynomial constant(const S& v) { return Polynomial(std::vector<S>{v}); }
  /// a + b x
  static Polynomial linear(const S& a, const S& b) { return Polynomial(std::vector<S>{a, b}); }

  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<S>& coefficients() const { return c_; }
  S coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : S(0); }
  S leading() const { return c_.empty() ? S(0) : c_.back(); }

  S operator()(const S& x) const
  {
    S acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o)
  {
    if (o.c_.size() > c_.size())
      c_.resize(o.c_.size(), S(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
      c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o)
  {
    if (o.c_.size() > c_.size())
      c_.resize(o.c_.size(), S(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i)
      c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const S& s)
  {
    for (auto& x : c_)
      x *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
  {
    if (a.is_zero() || b.is_zero())
      return {};
    std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b)
  {
    if (a.c_.size() != b.c_.size())
      return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i]))
        return false;
    return true;
  }

  Polynomial derivative() const
  {
    if (c_.size() <= 1)
      return {};
    std::vector<S> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r[i - 1] = c_[i] * S(static_cast<long>(i));
    return Polynomial(std::move(r));
  }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const
  {
    if (c_.empty())
      return {};
    std::vector<S> r(c_.size() + 1, S(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      r[i + 1] = c_[i] / S(static_cast<long>(i + 1));
    return Polynomial(std::move(r));
  }

  /// Exact definite integral over [lo, hi] via the antiderivative.
  S integrate(const S& lo, const S& hi) const
  {
    Polynomial F = antiderivative();
    return F(hi) - F(lo);
  }

  /// q(x) = p(a + b x)
  Polynomial compose_linear(const S& a, const S& b) const
  {
    Polynomial r;
    Polynomial lin = linear(a, b);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      r = r * lin + constant(*it);
    return r;
  }

  /// Order of vanishing at x = 0 (number of leading zero coefficients).
  std::size_t zero_order_at_origin() const
  {
    std::size_t k = 0;
    while (k < c_.size() && kop::is_zero(c_[k]))
      ++k;
    return k;
  }

  /// Drops the k lowest coefficients, i.e. divides by x^k. The dropped
  /// coefficients must be zero.
  Polynomial divide_by_power(std::size_t k) const
  {
    for (std::size_t i = 0; i < std::min(k, c_.size()); ++i)
      if (!kop::is_zero(c_[i]))
        throw std::domain_error("divide_by_power: polynomial not divisible by x^k");
    if (k >= c_.size())
      return {};
    return Polynomial(std::vector<S>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
  }

  /// Euclidean division; requires a field of coefficients.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const
  {
    if (d.is_zero())
      throw std::domain_error("polynomial division by zero");
    Polynomial q, r = *this;
    if (r.degree() < d.degree())
      return {q, r};
    std::vector<S> qc(static_cast<std::size_t>(r.degree() - d.degree() + 1), S(0));
    const S lead = d.leading();
    while (!r.is_zero() && r.degree() >= d.degree())
    {
      const std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
      const S factor = r.leading() / lead;
      qc[shift] = factor;
      std::vector<S> sub(shift + d.c_.size(), S(0));
      for (std::size_t i = 0; i < d.c_.size(); ++i)
        sub[shift + i] = d.c_[i] * factor;
      std::size_t before = r.c_.size();
      r -= Polynomial(std::move(sub));
      // force the cancelled leading term out when S is inexact
      if (r.c_.size() == before)
        r.c_.pop_back(), r.trim();
    }
    return {Polynomial(std::move(qc)), r};
  }

  template <class T, class Convert>
  Polynomial<T> map(Convert conv) const
  {
    std::vector<T> r;
    r.reserve(c_.size());
    for (const auto& x : c_)
      r.push_back(conv(x));
    return Polynomial<T>(std::move(r));
  }

  std::string str(const std::string& var = "x") const
  {
    if (c_.empty())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i)
    {
      if (kop::is_zero(c_[i]))
        continue;
      if (!first)
        os << " + ";
      first = false;
      os << "(" << c_[i] << ")";
      if (i >= 1)
        os << "*" << var;
      if (i >= 2)
        os << "^" << i;
    }
    return os.str();
  }

private:
  void trim()
  {
    while (!c_.empty() && kop::is_zero(c_.back()))
      c_.pop_back();
  }

  std::vector<S> c_;
};

/// Number of distinct real roots of p in the half-open interval (lo, hi],
/// by Sturm's theorem. Exact for Quadratic coefficients.
template <class S>
int sturm_root_count(const Polynomial<S>& p, const S& lo, const S& hi)
{
  if (p.is_zero())
    throw std::domain_error("sturm_root_count: zero polynomial");
  std::vector<Polynomial<S>> chain{p, p.derivative()};
  while (!chain.back().is_zero())
  {
    auto [q, r] = chain[chain.size() - 2].divmod(chain.back());
    chain.push_back(-r);
  }
  chain.pop_back();
  auto variations = [&](const S& x) {
    int count = 0, prev = 0;
    for (const auto& s : chain)
    {
      int sg = sign_of(s(x));
      if (sg == 0)
        continue;
      if (prev != 0 && sg != prev)
        ++count;
      prev = sg;
    }
    return count;
  };
  return variations(lo) - variations(hi);
}

}  // namespace kop

#endif
