#include "kop/einstein.hpp"

#include <doctest.h>

#include <cmath>

using namespace kop;

namespace
{

FlagData flag_of(const std::string& group, std::vector<int> painted)
{
  return build_flag(std::make_shared<const RootSystem>(build_root_system(LieAlgebraSpec::parse(group))),
                    std::move(painted));
}

}  // namespace

TEST_CASE("sphere of diameters against the chamber walls")
{
  {
    const FlagData f = flag_of("A1xA1", {});
    const auto h = sphere_in_chamber(f, default_complex_structure(f));
    CHECK(!h.inside);
    CHECK(h.min_distance == Quadratic::sqrt_of(2) / Quadratic(2));
    CHECK(h.min_distance_squared == Rational(1, 2));
    // with tau = 2 the radius shrinks to 1/2 < sqrt(2)/2
    CHECK(sphere_in_chamber(f, default_complex_structure(f), 4).inside);
  }
  {
    const FlagData f = flag_of("A3", {1, 2});
    const auto h = sphere_in_chamber(f, default_complex_structure(f));
    CHECK(h.inside);
    CHECK(h.min_distance == Quadratic::sqrt_of(6) / Quadratic(2));
  }
  {
    const FlagData f = flag_of("A2", {});
    const auto h = sphere_in_chamber(f, default_complex_structure(f));
    CHECK(!h.inside);
    CHECK(h.min_distance == Quadratic::sqrt_of(3) / Quadratic(3));
  }
}

TEST_CASE("sphere distance agrees with a direct float computation")
{
  // distance from Z^kappa to the hyperplane alpha = 0 inside the center, by projection
  for (const auto& [group, painted] : std::vector<std::pair<std::string, std::vector<int>>>{
           {"A3", {1}}, {"A3", {0, 2}}, {"B3", {0}}, {"A2xA1", {}}, {"C3", {1, 2}}})
  {
    CAPTURE(group);
    const FlagData f = flag_of(group, painted);
    const auto j = default_complex_structure(f);
    const auto zk = to_float(ricci_invariant(f, j));
    const auto basis = f.center_basis();
    // Gram matrix of the center basis and its inverse (dimension <= 3)
    const std::size_t d = basis.size();
    std::vector<std::vector<Rational>> g(d, std::vector<Rational>(d));
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        g[a][b] = f.roots().killing(basis[a], basis[b]).as_rational();
    const auto gi = invert(g);
    double best = 1e300;
    for (const auto& alpha : j.positive())
    {
      double norm2 = 0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
          norm2 += gi[a][b].get_d() * evaluate(alpha, basis[a]).to_double() * evaluate(alpha, basis[b]).to_double();
      best = std::min(best, evaluate(alpha, zk) / std::sqrt(norm2));
    }
    CHECK(sphere_in_chamber(f, j).min_distance.to_double() == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("diameter search")
{
  {
    // the unit sphere meets the walls: no search without force
    const FlagData f = flag_of("A1xA1", {});
    const auto s = search_diameters(f, default_complex_structure(f));
    CHECK(!s.searched);
    CHECK(s.candidates.empty());
    CHECK(!s.note.empty());
  }
  {
    const FlagData f = flag_of("A1xA1", {});
    DiameterSearchOptions opt;
    opt.tau_squared = 4;
    const auto s = search_diameters(f, default_complex_structure(f), opt);
    REQUIRE(s.searched);
    REQUIRE(s.candidates.size() == 1);
    const auto& c = s.candidates.front();
    CHECK(c.exact_zero);
    CHECK(c.admissible);
    REQUIRE(c.exact_z.has_value());
    // the antidiagonal direction, unit values +-1/2 scaled by 1/tau
    CHECK(c.exact_z->values[0] == -c.exact_z->values[1]);
    CHECK(std::abs(c.z_scaled.values[0]) == doctest::Approx(0.25).epsilon(1e-12));
  }
  {
    const FlagData f = flag_of("A3xA3", {1, 2, 4, 5});
    const auto s = search_diameters(f, default_complex_structure(f));
    REQUIRE(s.searched);
    REQUIRE(s.candidates.size() == 1);
    const auto& c = s.candidates.front();
    CHECK(c.exact_zero);
    CHECK(c.admissible);
    CHECK(std::abs(c.z_scaled.values[0]) == doctest::Approx(std::sqrt(3.0) / 6).epsilon(1e-10));
    CHECK(c.z_scaled.values[0] == doctest::Approx(-c.z_scaled.values[3]).epsilon(1e-10));
  }
  {
    // one dimensional center: the only diameter has nonzero Futaki invariant
    const FlagData f = flag_of("A2", {0});
    DiameterSearchOptions opt;
    opt.force = true;
    const auto s = search_diameters(f, default_complex_structure(f), opt);
    CHECK(s.searched);
    CHECK(s.candidates.empty());
  }
}

TEST_CASE("walled search")
{
  {
    const FlagData f = flag_of("A1xA1", {});
    const auto s = search_walled(f, default_complex_structure(f), 2, 2);
    CHECK(s.candidates.empty());
  }
  {
    // CP^2 as a cohomogeneity-one SU(2) manifold: fixed point at Z1, CP^1 at Z2
    const FlagData f = flag_of("A1", {});
    const auto s = search_walled(f, default_complex_structure(f), 2, 1, 8);
    REQUIRE(s.candidates.size() == 1);
    const auto& c = s.candidates.front();
    CHECK(c.exact_zero);
    CHECK(c.admissible);
    CHECK(c.m1 == 2);
    CHECK(c.m2 == 1);
    CHECK(c.z.values[0] < 0);
  }
  CHECK_THROWS(search_walled(flag_of("A1", {}), default_complex_structure(flag_of("A1", {})), 0, 1));
}
