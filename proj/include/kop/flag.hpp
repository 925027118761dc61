#ifndef KOP_FLAG_HPP
#define KOP_FLAG_HPP

#include "kop/rootsys.hpp"

#include <cmath>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace kop
{

/// Flag manifold G/K: K is generated by the maximal torus and the painted
/// simple roots. R = R_K (roots in the integer span of the painted roots)
/// disjoint union R_m.
class FlagData
{
public:
  FlagData(std::shared_ptr<const RootSystem> rs, std::vector<int> painted);

  const RootSystem& roots() const { return *rs_; }
  std::shared_ptr<const RootSystem> root_system() const { return rs_; }
  const std::vector<int>& painted() const { return painted_; }
  bool is_painted(int i) const;

  const std::vector<Root>& r_k() const { return r_k_; }
  const std::vector<Root>& r_m() const { return r_m_; }
  bool in_r_k(const Root& a) const;

  /// Basis of the center of k: {H : alpha_i(H) = 0 for painted i}. In the
  /// simple-root value coordinates these are the unit vectors e_j, j unpainted.
  const std::vector<CartanVector>& center_basis() const { return center_; }
  std::size_t center_dimension() const { return center_.size(); }
  /// True when alpha_i(H) = 0 for every painted i.
  template <class S>
  bool in_center(const CartanVec<S>& h) const
  {
    for (int i : painted_)
      if (!kop::is_zero(h.values[static_cast<std::size_t>(i)]))
        return false;
    return true;
  }

private:
  std::shared_ptr<const RootSystem> rs_;
  std::vector<int> painted_;
  std::vector<Root> r_k_;
  std::vector<Root> r_m_;
  std::vector<CartanVector> center_;
};

FlagData build_flag(std::shared_ptr<const RootSystem> rs, std::vector<int> painted);

/// Invariant complex structure on G/K, given by the set R_m^+ of roots
/// alpha in R_m with J E_alpha = +i E_alpha.
class InvariantComplexStructure
{
public:
  InvariantComplexStructure() = default;
  explicit InvariantComplexStructure(std::vector<Root> positive);

  const std::vector<Root>& positive() const { return positive_; }
  bool is_positive(const Root& a) const { return lookup_.count(a.coords) > 0; }
  InvariantComplexStructure reversed() const;

private:
  std::vector<Root> positive_;
  std::set<std::vector<int>> lookup_;
};

struct ValidationResult
{
  bool ok = true;
  std::string detail;
  explicit operator bool() const { return ok; }
};

/// R_m^+ = roots of R_m positive for the standard simple-root order.
InvariantComplexStructure default_complex_structure(const FlagData& flag);

/// Builds a structure from signs over the standard positive roots of R_m
/// (order of default_complex_structure): +1 keeps the root, -1 takes its
/// negative. Not validated.
InvariantComplexStructure complex_structure_from_signs(const FlagData& flag, const std::vector<int>& signs);

/// Checks R_m^+ partitions R_m against its negative and the parabolic closure
/// (R_m^+ + R_K) cap R subset R_m^+, (R_m^+ + R_m^+) cap R subset R_m^+.
ValidationResult validate_complex_structure(const FlagData& flag, const InvariantComplexStructure& j);

/// Z^kappa = sum over R_m^+ of H_alpha.
CartanVector ricci_invariant(const FlagData& flag, const InvariantComplexStructure& j);

/// Roots of R_m vanishing on x. For double input, |alpha(x)| <= tol counts.
template <class S>
std::vector<Root> wall_roots(const FlagData& flag, const CartanVec<S>& x, double tol = 0.0)
{
  std::vector<Root> walls;
  for (const auto& a : flag.r_m())
  {
    const S v = evaluate(a, x);
    if constexpr (std::is_same_v<S, double>)
    {
      if (std::abs(v) <= tol)
        walls.push_back(a);
    }
    else if (kop::is_zero(v))
      walls.push_back(a);
  }
  return walls;
}

enum class ChamberLocation
{
  interior,
  boundary,
  outside
};

std::string to_string(ChamberLocation c);

struct ChamberPosition
{
  ChamberLocation location = ChamberLocation::interior;
  std::vector<Root> walls;  // R_m roots vanishing at x, both signs
};

/// Position of x relative to the positive T-chamber {alpha(x) > 0, alpha in R_m^+}.
template <class S>
ChamberPosition chamber_position([[maybe_unused]] const FlagData& flag, const InvariantComplexStructure& j, const CartanVec<S>& x,
                                 double tol = 0.0)
{
  ChamberPosition pos;
  bool negative = false;
  for (const auto& a : j.positive())
  {
    const int s = [&] {
      const S v = evaluate(a, x);
      if constexpr (std::is_same_v<S, double>)
        return std::abs(v) <= tol ? 0 : sign_of(v);
      else
        return sign_of(v);
    }();
    if (s < 0)
      negative = true;
    else if (s == 0)
    {
      pos.walls.push_back(a);
      pos.walls.push_back(-a);
    }
  }
  if (negative)
    pos.location = ChamberLocation::outside;
  else if (!pos.walls.empty())
    pos.location = ChamberLocation::boundary;
  return pos;
}

}  // namespace kop

#endif
