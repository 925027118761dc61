#include "kop/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kop
{

KopBase make_base(FlagData flag, InvariantComplexStructure j, const CartanVector& direction)
{
  if (direction.size() != static_cast<std::size_t>(flag.roots().rank()))
    throw std::invalid_argument("Z direction has " + std::to_string(direction.size()) + " entries, rank is " +
                                std::to_string(flag.roots().rank()));
  if (direction.is_zero())
    throw std::invalid_argument("Z direction is the zero vector");
  if (!flag.in_center(direction))
    throw std::invalid_argument("Z direction " + to_string(direction) +
                                " is not in the center of k (painted simple roots must vanish on it)");
  if (auto v = validate_complex_structure(flag, j); !v)
    throw std::invalid_argument("invalid complex structure: " + v.detail);

  const auto& rs = flag.roots();
  const Quadratic norm_sq = rs.killing(direction, direction);
  CartanVector z;
  if (norm_sq == Quadratic(1))
    z = direction;
  else
  {
    // Z = d / sqrt(n) = d * sqrt(n) / n
    const Rational& n = norm_sq.as_rational();
    z = direction * (Quadratic::sqrt_of(n) / Quadratic(n));
  }
  CartanVector zk = ricci_invariant(flag, j);
  return KopBase{std::move(flag), std::move(j), direction, std::move(z), std::move(zk)};
}

CartanVector scaled_direction(const KopBase& base, const Rational& tau_squared)
{
  if (tau_squared <= 0)
    throw std::invalid_argument("tau^2 must be positive");
  if (tau_squared == 1)
    return base.z;
  const Quadratic n = base.flag.roots().killing(base.direction, base.direction);
  const Rational m = n.as_rational() * tau_squared;
  return base.direction * (Quadratic::sqrt_of(m) / Quadratic(m));
}

int degree_from_walls(std::size_t wall_count)
{
  if (wall_count % 2 != 0)
    throw std::logic_error("wall roots must come in +/- pairs");
  return static_cast<int>(wall_count / 2) + 1;
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

bool contains(const std::vector<Root>& set, const Root& a)
{
  return std::find(set.begin(), set.end(), a) != set.end();
}

std::string list(const std::vector<Root>& roots)
{
  std::string s = "{";
  for (std::size_t i = 0; i < roots.size(); ++i)
    s += (i ? ", " : "") + roots[i].str();
  return s + "}";
}

}  // namespace

Check projective_fiber_check(const FlagData& flag, const InvariantComplexStructure& j, const std::vector<Root>& walls)
{
  if (walls.empty())
    return {};
  const auto& rs = flag.roots();
  const std::size_t m = walls.size() / 2;

  // Positive system of R_K cup W induced by R_K^+ cup R_m^+.
  std::vector<Root> positive;
  for (const auto& a : flag.r_k())
    if (a.is_positive())
      positive.push_back(a);
  for (const auto& a : walls)
    if (j.is_positive(a))
      positive.push_back(a);
  std::set<std::vector<int>> pos_set;
  for (const auto& a : positive)
    pos_set.insert(a.coords);

  std::vector<Root> simple;
  for (const auto& a : positive)
  {
    bool decomposable = false;
    for (const auto& b : positive)
    {
      std::vector<int> d(a.coords.size());
      for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = a.coords[i] - b.coords[i];
      if (pos_set.count(d))
      {
        decomposable = true;
        break;
      }
    }
    if (!decomposable)
      simple.push_back(a);
  }

  // connected components of the Dynkin graph
  const std::size_t k = simple.size();
  std::vector<std::vector<std::size_t>> adj(k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (rs.dual_inner(simple[a], simple[b]) != 0)
      {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
  std::vector<int> comp(k, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < k; ++s)
  {
    if (comp[s] >= 0)
      continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty())
    {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v])
        if (comp[w] < 0)
        {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }

  int meeting = -1;
  for (std::size_t s = 0; s < k; ++s)
  {
    if (flag.in_r_k(simple[s]))
      continue;
    if (meeting >= 0 && meeting != comp[s])
      return {false, "wall roots " + list(walls) + " meet more than one simple factor of the centralizer"};
    meeting = comp[s];
  }
  if (meeting < 0)
    return {false, "no simple root of the centralizer lies in the walls"};

  std::vector<std::size_t> members;
  for (std::size_t s = 0; s < k; ++s)
    if (comp[s] == meeting)
      members.push_back(s);
  const std::size_t rank = members.size();

  // roots of the factor: positive roots supported on its simple roots
  std::size_t factor_roots = 0;
  for (const auto& a : positive)
  {
    // a is in the factor iff a minus a simple root of the factor is 0 or a
    // positive root of the factor; test through E*-orthogonality to the rest
    bool orthogonal_to_rest = true;
    for (std::size_t s = 0; s < k && orthogonal_to_rest; ++s)
      if (comp[s] != meeting && rs.dual_inner(a, simple[s]) != 0)
        orthogonal_to_rest = false;
    bool touches = false;
    for (auto s : members)
      if (rs.dual_inner(a, simple[s]) != 0)
        touches = true;
    if (orthogonal_to_rest && touches)
      ++factor_roots;
  }
  factor_roots *= 2;

  if (factor_roots != rank * (rank + 1))
    return {false, "centralizer factor meeting the walls has rank " + std::to_string(rank) + " and " +
                     std::to_string(factor_roots) + " roots, not of type A"};
  if (rank != m)
    return {false, "centralizer factor has type A" + std::to_string(rank) + " but |W|/2 = " + std::to_string(m)};

  std::size_t outside = 0, node = 0;
  for (auto s : members)
    if (!flag.in_r_k(simple[s]))
    {
      ++outside;
      node = s;
    }
  if (outside != 1)
    return {false, "K is not obtained from the A" + std::to_string(rank) + " factor by deleting one node"};
  if (adj[node].size() > 1)
    return {false, "the deleted node " + simple[node].str() + " is not terminal in A" + std::to_string(rank)};
  return {};
}

Check holomorphic_projection_check(const FlagData& flag, const InvariantComplexStructure& j,
                                   const std::vector<Root>& walls)
{
  const auto& rs = flag.roots();
  std::vector<Root> vertical = flag.r_k();
  vertical.insert(vertical.end(), walls.begin(), walls.end());
  for (const auto& a : j.positive())
  {
    if (contains(walls, a))
      continue;
    for (const auto& b : vertical)
    {
      auto s = add(a, b);
      if (!rs.contains(s))
        continue;
      Root sum{s, 0};
      if (!j.is_positive(sum) || contains(walls, sum))
        return {false, a.str() + " + " + b.str() + " leaves R_m^+ \\ W"};
    }
  }
  return {};
}

namespace
{

template <class S>
AdmissibleSegmentT<S> analyze_impl(const FlagData& flag, const InvariantComplexStructure& j, const CartanVec<S>& z1,
                                   const CartanVec<S>& z2, double tol)
{
  AdmissibleSegmentT<S> seg;
  seg.z1 = z1;
  seg.z2 = z2;

  auto sgn = [&](const S& v) {
    if constexpr (std::is_same_v<S, double>)
      return std::abs(v) <= tol ? 0 : sign_of(v);
    else
      return sign_of(v);
  };
  for (const auto& a : j.positive())
  {
    const int s1 = sgn(evaluate(a, z1));
    const int s2 = sgn(evaluate(a, z2));
    if (s1 < 0 || s2 < 0)
    {
      seg.chamber = {false, "root " + a.str() + " is negative at Z" + std::string(s1 < 0 ? "1" : "2") +
                              ": segment leaves the closed positive chamber"};
      break;
    }
    if (s1 == 0 && s2 == 0)
    {
      seg.chamber = {false, "root " + a.str() + " vanishes along the whole segment"};
      break;
    }
  }

  auto endpoint = [&](const CartanVec<S>& x) {
    EndpointReport e;
    e.walls = wall_roots(flag, x, tol);
    e.degree = degree_from_walls(e.walls.size());
    e.fiber = projective_fiber_check(flag, j, e.walls);
    e.projection = holomorphic_projection_check(flag, j, e.walls);
    return e;
  };
  seg.end1 = endpoint(z1);
  seg.end2 = endpoint(z2);
  seg.degrees_ok = seg.end1.fiber.ok && seg.end2.fiber.ok;
  seg.projection_ok = seg.end1.projection.ok && seg.end2.projection.ok;
  seg.overall_ok = seg.chamber.ok && seg.degrees_ok && seg.projection_ok;
  return seg;
}

}  // namespace

AdmissibleSegment analyze_endpoints(const FlagData& flag, const InvariantComplexStructure& j, const CartanVector& z1,
                                    const CartanVector& z2)
{
  return analyze_impl(flag, j, z1, z2, 0.0);
}

AdmissibleSegmentF analyze_endpoints(const FlagData& flag, const InvariantComplexStructure& j, const CartanVectorF& z1,
                                     const CartanVectorF& z2, double tol)
{
  return analyze_impl(flag, j, z1, z2, tol);
}

AdmissibleSegment analyze_segment(const KopBase& base, const CartanVector& z1, const Quadratic& length)
{
  if (length.sign() <= 0)
    throw std::invalid_argument("segment length must be positive");
  return analyze_endpoints(base.flag, base.j, z1, z1 - length * base.z);
}

ParametrizationCheck check_parametrization(const Parametrization& p, double delta, double length, double tol)
{
  ParametrizationCheck r;
  std::vector<double> t = p.t, f = p.values, fpp = p.second_derivative;
  if (!p.is_sampled())
  {
    if (!p.f)
      throw std::invalid_argument("parametrization has neither samples nor a closed form");
    const std::size_t n = 4097;
    t.resize(n);
    f.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      t[i] = delta * static_cast<double>(i) / static_cast<double>(n - 1);
      f[i] = p.f(t[i]);
    }
    if (p.fpp)
      fpp = {p.fpp(0.0), p.fpp(delta)};
  }
  if (t.size() < 16 || f.size() != t.size())
    throw std::invalid_argument("parametrization grid needs at least 16 points");

  std::ostringstream detail;
  const std::size_t n = t.size();
  const double bound_tol = 1e-8 * std::max(1.0, std::abs(length));
  r.boundary_ok = std::abs(f.front()) <= bound_tol && std::abs(f.back() - length) <= bound_tol &&
                  std::abs(t.front()) <= 1e-14 && std::abs(t.back() - delta) <= 1e-12 * std::max(1.0, delta);
  if (!r.boundary_ok)
    detail << "boundary values f(0)=" << f.front() << ", f(delta)=" << f.back() << " (want 0, " << length << "); ";

  r.monotone_ok = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(f[i + 1] > f[i]))
    {
      r.monotone_ok = false;
      detail << "not strictly increasing at t=" << t[i] << "; ";
      break;
    }

  // Evenness about an endpoint: reflecting the grid makes the one-sided
  // second difference 2(f1 - f0)/h^2 agree with the interior one.
  const double h0 = t[1] - t[0];
  const double h1 = t[n - 1] - t[n - 2];
  const double reflected0 = 2.0 * (f[1] - f[0]) / (h0 * h0);
  const double interior0 = (f[2] - 2.0 * f[1] + f[0]) / (h0 * h0);
  const double reflected1 = 2.0 * (f[n - 2] - f[n - 1]) / (h1 * h1);
  const double interior1 = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / (h1 * h1);
  const double even_tol = 1e-2;
  r.even_ok = std::abs(reflected0 - interior0) <= even_tol * std::max(1.0, std::abs(interior0)) &&
              std::abs(reflected1 - interior1) <= even_tol * std::max(1.0, std::abs(interior1));
  if (!r.even_ok)
    detail << "not even at an endpoint (reflected vs interior second differences " << reflected0 << "/" << interior0
           << ", " << reflected1 << "/" << interior1 << "); ";

  r.fpp_start = fpp.empty() ? reflected0 : fpp.front();
  r.fpp_end = fpp.empty() ? reflected1 : fpp.back();
  r.curvature_ok = std::abs(r.fpp_start - 1.0) <= tol && std::abs(r.fpp_end + 1.0) <= tol;
  if (!r.curvature_ok)
    detail << "f''(0)=" << r.fpp_start << ", f''(delta)=" << r.fpp_end << " (want 1, -1 within " << tol << "); ";
  r.detail = detail.str();
  return r;
}

}  // namespace kop
