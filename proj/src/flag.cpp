#include "kop/flag.hpp"

#include <algorithm>
#include <stdexcept>

namespace kop
{

FlagData::FlagData(std::shared_ptr<const RootSystem> rs, std::vector<int> painted)
  : rs_(std::move(rs)), painted_(std::move(painted))
{
  if (!rs_)
    throw std::invalid_argument("flag requires a root system");
  std::sort(painted_.begin(), painted_.end());
  painted_.erase(std::unique(painted_.begin(), painted_.end()), painted_.end());
  const int n = rs_->rank();
  for (int i : painted_)
    if (i < 0 || i >= n)
      throw std::invalid_argument("painted index " + std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");

  for (const auto& a : rs_->roots())
    (in_r_k(a) ? r_k_ : r_m_).push_back(a);

  for (int j = 0; j < n; ++j)
  {
    if (is_painted(j))
      continue;
    CartanVector e = CartanVector::zero(static_cast<std::size_t>(n));
    e.values[static_cast<std::size_t>(j)] = Quadratic(1);
    center_.push_back(std::move(e));
  }
}

bool FlagData::is_painted(int i) const
{
  return std::binary_search(painted_.begin(), painted_.end(), i);
}

bool FlagData::in_r_k(const Root& a) const
{
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (a.coords[i] != 0 && !is_painted(static_cast<int>(i)))
      return false;
  return true;
}

FlagData build_flag(std::shared_ptr<const RootSystem> rs, std::vector<int> painted)
{
  return FlagData(std::move(rs), std::move(painted));
}

InvariantComplexStructure::InvariantComplexStructure(std::vector<Root> positive) : positive_(std::move(positive))
{
  for (const auto& a : positive_)
    lookup_.insert(a.coords);
}

InvariantComplexStructure InvariantComplexStructure::reversed() const
{
  std::vector<Root> neg;
  neg.reserve(positive_.size());
  for (const auto& a : positive_)
    neg.push_back(-a);
  return InvariantComplexStructure(std::move(neg));
}

InvariantComplexStructure default_complex_structure(const FlagData& flag)
{
  std::vector<Root> pos;
  for (const auto& a : flag.r_m())
    if (a.is_positive())
      pos.push_back(a);
  InvariantComplexStructure j(std::move(pos));
  auto v = validate_complex_structure(flag, j);
  if (!v)
    throw std::logic_error("standard order gave an invalid complex structure: " + v.detail);
  return j;
}

InvariantComplexStructure complex_structure_from_signs(const FlagData& flag, const std::vector<int>& signs)
{
  std::vector<Root> std_pos;
  for (const auto& a : flag.r_m())
    if (a.is_positive())
      std_pos.push_back(a);
  if (signs.size() != std_pos.size())
    throw std::invalid_argument("complex structure sign list has " + std::to_string(signs.size()) +
                                " entries, expected " + std::to_string(std_pos.size()));
  std::vector<Root> pos;
  for (std::size_t i = 0; i < signs.size(); ++i)
  {
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("complex structure signs must be +1 or -1");
    pos.push_back(signs[i] > 0 ? std_pos[i] : -std_pos[i]);
  }
  return InvariantComplexStructure(std::move(pos));
}

namespace
{

std::vector<int> add(const Root& a, const Root& b)
{
  std::vector<int> s(a.coords.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = a.coords[i] + b.coords[i];
  return s;
}

}  // namespace

ValidationResult validate_complex_structure(const FlagData& flag, const InvariantComplexStructure& j)
{
  const auto& rs = flag.roots();
  for (const auto& a : j.positive())
  {
    if (flag.in_r_k(a) || !rs.contains(a.coords))
      return {false, "root " + a.str() + " is not in R_m"};
    if (j.is_positive(-a))
      return {false, "both " + a.str() + " and its negative are marked positive"};
  }
  for (const auto& a : flag.r_m())
    if (!j.is_positive(a) && !j.is_positive(-a))
      return {false, "neither " + a.str() + " nor its negative is marked positive"};

  for (const auto& a : j.positive())
  {
    for (const auto& b : flag.r_k())
    {
      auto s = add(a, b);
      if (rs.contains(s) && !j.is_positive(Root{s, 0}))
        return {false, "closure under R_K fails: " + a.str() + " + " + b.str() + " is a root outside R_m^+"};
    }
    for (const auto& b : j.positive())
    {
      auto s = add(a, b);
      if (rs.contains(s) && !j.is_positive(Root{s, 0}))
        return {false, "closure under R_m^+ fails: " + a.str() + " + " + b.str() + " is a root outside R_m^+"};
    }
  }
  return {};
}

CartanVector ricci_invariant(const FlagData& flag, const InvariantComplexStructure& j)
{
  const auto& rs = flag.roots();
  CartanVector z = CartanVector::zero(static_cast<std::size_t>(rs.rank()));
  for (const auto& a : j.positive())
    z += rs.coroot_vector(a);
  return z;
}

std::string to_string(ChamberLocation c)
{
  switch (c)
  {
  case ChamberLocation::interior: return "interior";
  case ChamberLocation::boundary: return "boundary";
  case ChamberLocation::outside: return "outside";
  }
  return "?";
}

}  // namespace kop
