#include "kop/flag.hpp"

#include <doctest.h>

#include <algorithm>

using namespace kop;

namespace
{

std::shared_ptr<const RootSystem> system_of(const std::string& name)
{
  return std::make_shared<const RootSystem>(build_root_system(LieAlgebraSpec::parse(name)));
}

Root root(std::vector<int> c)
{
  Root r;
  r.coords = std::move(c);
  return r;
}

CartanVector values(std::vector<Rational> v)
{
  return from_rationals(v);
}

bool same_set(std::vector<Root> a, std::vector<Root> b)
{
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

// every painted subset of every simple type of rank <= 5 (and a few products)
std::vector<std::pair<std::string, std::vector<int>>> paintings_up_to_rank5()
{
  std::vector<std::string> names{"A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "B5", "C3", "C4", "C5",
                                 "D4", "D5", "G2", "F4", "A1xA1", "A2xB2", "A1xG2"};
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (const auto& n : names)
  {
    const int r = LieAlgebraSpec::parse(n).rank();
    for (int mask = 0; mask < (1 << r) - 1; ++mask)  // at least one unpainted node
    {
      std::vector<int> painted;
      for (int i = 0; i < r; ++i)
        if (mask & (1 << i))
          painted.push_back(i);
      out.emplace_back(n, painted);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("build_flag examples")
{
  {
    const FlagData f = build_flag(system_of("A1"), {});
    CHECK(f.r_k().empty());
    CHECK(f.r_m().size() == 2);
    CHECK(f.center_dimension() == 1);
  }
  {
    const FlagData f = build_flag(system_of("A2"), {0});
    CHECK(f.r_k().size() == 2);
    CHECK(f.r_m().size() == 4);
    CHECK(f.center_dimension() == 1);
    for (const auto& b : f.center_basis())
      CHECK(b.values[0].is_zero());
  }
  {
    const FlagData f = build_flag(system_of("A1xA1"), {});
    CHECK(f.r_m().size() == 4);
    CHECK(f.center_dimension() == 2);
  }
  CHECK_THROWS_AS(build_flag(system_of("A2"), {2}), std::invalid_argument);
  // the painted set is a set: repeated indices collapse
  CHECK(build_flag(system_of("A2"), {0, 0}).painted() == std::vector<int>{0});
}

TEST_CASE("default complex structures")
{
  CHECK(same_set(default_complex_structure(build_flag(system_of("A1"), {})).positive(), {root({1})}));
  CHECK(same_set(default_complex_structure(build_flag(system_of("A1xA1"), {})).positive(),
                 {root({1, 0}), root({0, 1})}));
  CHECK(same_set(default_complex_structure(build_flag(system_of("A2"), {})).positive(),
                 {root({1, 0}), root({0, 1}), root({1, 1})}));
}

TEST_CASE("validate_complex_structure")
{
  const FlagData a2 = build_flag(system_of("A2"), {});
  CHECK(validate_complex_structure(a2, InvariantComplexStructure({root({1, 0}), root({0, 1}), root({1, 1})})).ok);
  const auto bad =
      validate_complex_structure(a2, InvariantComplexStructure({root({1, 0}), root({0, 1}), root({-1, -1})}));
  CHECK(!bad.ok);
  CHECK(!bad.detail.empty());
  const FlagData a1a1 = build_flag(system_of("A1xA1"), {});
  CHECK(validate_complex_structure(a1a1, InvariantComplexStructure({root({1, 0}), root({0, -1})})).ok);
  // a set that is not half of R_m
  CHECK(!validate_complex_structure(a1a1, InvariantComplexStructure({root({1, 0})})).ok);
  CHECK(!validate_complex_structure(a1a1, InvariantComplexStructure({root({1, 0}), root({-1, 0})})).ok);
  // A2 with one painted root: R_K + R_m^+ must stay in R_m^+
  const FlagData a2p = build_flag(system_of("A2"), {0});
  CHECK(!validate_complex_structure(a2p, InvariantComplexStructure({root({1, 1}), root({0, -1})})).ok);
  CHECK(validate_complex_structure(a2p, InvariantComplexStructure({root({-1, -1}), root({0, -1})})).ok);
}

TEST_CASE("complex structures from sign lists")
{
  const FlagData a1a1 = build_flag(system_of("A1xA1"), {});
  const auto j = complex_structure_from_signs(a1a1, {1, -1});
  CHECK(same_set(j.positive(), {root({1, 0}), root({0, -1})}));
  CHECK_THROWS_AS(complex_structure_from_signs(a1a1, {1}), std::invalid_argument);
  CHECK_THROWS_AS(complex_structure_from_signs(a1a1, {1, 0}), std::invalid_argument);
}

TEST_CASE("Ricci invariant desk values")
{
  {
    const FlagData f = build_flag(system_of("A1"), {});
    const auto zk = ricci_invariant(f, default_complex_structure(f));
    CHECK(evaluate(root({1}), zk) == Quadratic(Rational(1, 2)));
  }
  {
    const FlagData f = build_flag(system_of("A1xA1"), {});
    const auto zk = ricci_invariant(f, default_complex_structure(f));
    CHECK(evaluate(root({1, 0}), zk) == Quadratic(Rational(1, 2)));
    CHECK(evaluate(root({0, 1}), zk) == Quadratic(Rational(1, 2)));
  }
  {
    const FlagData f = build_flag(system_of("A2"), {});
    const auto zk = ricci_invariant(f, default_complex_structure(f));
    CHECK(evaluate(root({1, 0}), zk) == Quadratic(Rational(1, 3)));
    CHECK(wall_roots(f, zk).empty());
  }
}

TEST_CASE("Ricci invariant is additive across product components")
{
  const FlagData a2 = build_flag(system_of("A2"), {0});
  const FlagData b2 = build_flag(system_of("B2"), {});
  const FlagData prod = build_flag(system_of("A2xB2"), {0});
  const auto za = ricci_invariant(a2, default_complex_structure(a2));
  const auto zb = ricci_invariant(b2, default_complex_structure(b2));
  const auto zp = ricci_invariant(prod, default_complex_structure(prod));
  CHECK(zp.values[0] == za.values[0]);
  CHECK(zp.values[1] == za.values[1]);
  CHECK(zp.values[2] == zb.values[0]);
  CHECK(zp.values[3] == zb.values[1]);
}

TEST_CASE("Z^kappa is interior for every family and painting up to rank 5; reversing J negates it")
{
  for (const auto& [name, painted] : paintings_up_to_rank5())
  {
    CAPTURE(name);
    CAPTURE(painted.size());
    const FlagData f = build_flag(system_of(name), painted);
    const auto j = default_complex_structure(f);
    const auto zk = ricci_invariant(f, j);
    CHECK(chamber_position(f, j, zk).location == ChamberLocation::interior);
    CHECK(chamber_position(f, j, -zk).location == ChamberLocation::outside);
    CHECK(f.in_center(zk));
    const auto rev = j.reversed();
    CHECK(validate_complex_structure(f, rev).ok);
    const auto zr = ricci_invariant(f, rev);
    CHECK(zr == -zk);
    // r_k and r_m partition R, r_k closed under negation
    CHECK(f.r_k().size() + f.r_m().size() == f.roots().roots().size());
    for (const auto& a : f.r_k())
      CHECK(f.in_r_k(-a));
  }
}

TEST_CASE("wall roots and chamber positions")
{
  const FlagData f = build_flag(system_of("A1xA1"), {});
  const auto j = default_complex_structure(f);
  CHECK(same_set(wall_roots(f, values({1, 0})), {root({0, 1}), root({0, -1})}));
  CHECK(wall_roots(f, CartanVector::zero(2)).size() == f.r_m().size());
  const auto pos = chamber_position(f, j, values({1, 0}));
  CHECK(pos.location == ChamberLocation::boundary);
  CHECK(same_set(pos.walls, {root({0, 1}), root({0, -1})}));
  CHECK(chamber_position(f, j, values({1, -1})).location == ChamberLocation::outside);
  // float evaluation with tolerance
  CHECK(wall_roots(f, CartanVectorF{{1.0, 1e-13}}, 1e-12).size() == 2);
  CHECK(wall_roots(f, CartanVectorF{{1.0, 1e-13}}, 0.0).empty());
}
