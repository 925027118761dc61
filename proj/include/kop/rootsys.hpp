#ifndef KOP_ROOTSYS_HPP
#define KOP_ROOTSYS_HPP

#include "kop/exact.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kop
{

enum class Family
{
  A,
  B,
  C,
  D,
  E,
  F,
  G
};

char family_letter(Family f);

struct SimpleComponent
{
  Family family;
  int rank;

  friend bool operator==(const SimpleComponent&, const SimpleComponent&) = default;
};

/// Ordered product of compact simple Lie algebras.
struct LieAlgebraSpec
{
  std::vector<SimpleComponent> components;

  /// Accepts "A2", "A1xA1", "B3 x G2" (case-insensitive family letters).
  static LieAlgebraSpec parse(const std::string& text);

  int rank() const;
  std::string str() const;
  /// Throws std::invalid_argument on an empty algebra or an unsupported rank.
  void validate() const;
};

/// Classical number of roots of a simple algebra of the given type.
std::size_t expected_root_count(SimpleComponent c);

/// Cartan matrix A_ij = <alpha_i, alpha_j^vee>, Bourbaki numbering.
std::vector<std::vector<int>> cartan_matrix(SimpleComponent c);

/// Element of the Cartan subalgebra, stored by its values on the simple
/// roots: values[i] = alpha_i(H).
template <class S>
struct CartanVec
{
  std::vector<S> values;

  std::size_t size() const { return values.size(); }

  CartanVec& operator+=(const CartanVec& o)
  {
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] += o.values[i];
    return *this;
  }
  CartanVec& operator-=(const CartanVec& o)
  {
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] -= o.values[i];
    return *this;
  }
  CartanVec& operator*=(const S& s)
  {
    for (auto& v : values)
      v *= s;
    return *this;
  }
  friend CartanVec operator+(CartanVec a, const CartanVec& b) { return a += b; }
  friend CartanVec operator-(CartanVec a, const CartanVec& b) { return a -= b; }
  friend CartanVec operator-(CartanVec a)
  {
    for (auto& v : a.values)
      v = -v;
    return a;
  }
  friend CartanVec operator*(const S& s, CartanVec a) { return a *= s; }
  friend CartanVec operator*(CartanVec a, const S& s) { return a *= s; }
  friend bool operator==(const CartanVec& a, const CartanVec& b)
  {
    if (a.values.size() != b.values.size())
      return false;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      if (!(a.values[i] == b.values[i]))
        return false;
    return true;
  }

  bool is_zero() const
  {
    for (const auto& v : values)
      if (!kop::is_zero(v))
        return false;
    return true;
  }

  static CartanVec zero(std::size_t n) { return CartanVec{std::vector<S>(n, S(0))}; }
};

using CartanVector = CartanVec<Quadratic>;
using CartanVectorF = CartanVec<double>;

CartanVectorF to_float(const CartanVector& h);
CartanVector from_rationals(const std::vector<Rational>& values);
std::string to_string(const CartanVector& h);

struct Root
{
  std::vector<int> coords;  // simple-root coefficients
  int component = 0;

  bool is_positive() const;
  int height() const;
  Root operator-() const;
  std::string str() const;

  friend bool operator==(const Root& a, const Root& b) { return a.coords == b.coords; }
  friend bool operator<(const Root& a, const Root& b) { return a.coords < b.coords; }
};

/// alpha(H) = coords . values
template <class S>
S evaluate(const Root& alpha, const CartanVec<S>& h)
{
  S acc(0);
  for (std::size_t i = 0; i < alpha.coords.size(); ++i)
    if (alpha.coords[i] != 0)
      acc += S(static_cast<long>(alpha.coords[i])) * h.values[i];
  return acc;
}

/// All roots of a compact semisimple Lie algebra in simple-root coordinates,
/// together with the Gram matrix M = sum_beta beta beta^T of the positive
/// definite form E(H, H') = sum_beta beta(H) beta(H') (= -Killing form).
class RootSystem
{
public:
  explicit RootSystem(LieAlgebraSpec spec);

  const LieAlgebraSpec& spec() const { return spec_; }
  int rank() const { return rank_; }

  /// Positive roots first (by component, height, coordinates), then their
  /// negatives in the same order.
  const std::vector<Root>& roots() const { return roots_; }
  std::vector<Root> positive_roots() const;
  const Root& simple_root(int i) const { return roots_[static_cast<std::size_t>(simple_index_[static_cast<std::size_t>(i)])]; }

  std::optional<std::size_t> index_of(const std::vector<int>& coords) const;
  bool contains(const std::vector<int>& coords) const { return index_of(coords).has_value(); }

  /// Component index of simple root i and the first simple index of each block.
  int component_of_simple(int i) const { return component_of_simple_[static_cast<std::size_t>(i)]; }
  int component_offset(int c) const { return offsets_[static_cast<std::size_t>(c)]; }

  const std::vector<std::vector<long>>& gram() const { return gram_; }
  const std::vector<std::vector<Rational>>& gram_inverse() const { return gram_inverse_; }

  /// E(H1, H2) = values1^T M values2
  template <class S>
  S killing(const CartanVec<S>& h1, const CartanVec<S>& h2) const
  {
    S acc(0);
    for (int i = 0; i < rank_; ++i)
    {
      S row(0);
      for (int j = 0; j < rank_; ++j)
        if (gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0)
          row += S(gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * h2.values[static_cast<std::size_t>(j)];
      acc += h1.values[static_cast<std::size_t>(i)] * row;
    }
    return acc;
  }

  /// H_alpha with E(H_alpha, H) = alpha(H): values = M^{-1} coords.
  CartanVector coroot_vector(const Root& alpha) const;

  /// Induced form on roots: (alpha, beta)* = alpha(H_beta).
  Rational dual_inner(const Root& a, const Root& b) const;

private:
  LieAlgebraSpec spec_;
  int rank_ = 0;
  std::vector<Root> roots_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<int> simple_index_;
  std::vector<int> component_of_simple_;
  std::vector<int> offsets_;
  std::vector<std::vector<long>> gram_;
  std::vector<std::vector<Rational>> gram_inverse_;
};

RootSystem build_root_system(const LieAlgebraSpec& spec);

/// Exact inverse of a nonsingular rational matrix (Gauss-Jordan).
std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m);

}  // namespace kop

#endif
