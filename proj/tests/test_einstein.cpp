#include "kop/einstein.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

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

KopBase base_of(const std::string& name, std::vector<int> painted, std::vector<Rational> dir)
{
  FlagData f = build_flag(system_of(name), std::move(painted));
  auto j = default_complex_structure(f);
  return make_base(std::move(f), std::move(j), from_rationals(dir));
}

// Composite Simpson rule with n panels, independent of the exact expansion.
double simpson(const std::function<double(double)>& g, double a, double b, long n)
{
  const double h = (b - a) / static_cast<double>(n);
  double s = g(a) + g(b);
  for (long i = 1; i < n; ++i)
    s += g(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double futaki_by_simpson(const KopBase& b, const CartanVector& z, int m1, int m2)
{
  std::vector<double> kap, slope;
  for (const auto& a : b.j.positive())
  {
    kap.push_back(evaluate(a, b.z_kappa).to_double());
    slope.push_back(evaluate(a, z).to_double());
  }
  auto g = [&](double y) {
    double p = y;
    for (std::size_t i = 0; i < kap.size(); ++i)
      p *= kap[i] - y * slope[i];
    return p;
  };
  return simpson(g, -m1, m2, 1000000);
}

// P(v) = prod alpha(Z^kappa + m1 Z - v Z), built here without the library helper
Polynomial<Quadratic> independent_p(const KopBase& b, const CartanVector& z, int m1)
{
  Polynomial<Quadratic> p = Polynomial<Quadratic>::constant(Quadratic(1));
  for (const auto& a : b.j.positive())
  {
    const Quadratic k = evaluate(a, z);
    p *= Polynomial<Quadratic>::linear(evaluate(a, b.z_kappa) + Quadratic(m1) * k, -k);
  }
  return p;
}

struct RandomConfig
{
  KopBase base;
  int m1, m2;
};

RandomConfig random_config(std::mt19937& rng)
{
  static const std::vector<std::string> names{"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "A1xA1", "A2xA1"};
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<int> coef(-5, 5), deg(1, 3);
  for (;;)
  {
    const std::string name = names[pick(rng)];
    const int r = LieAlgebraSpec::parse(name).rank();
    std::vector<int> painted;
    for (int i = 0; i < r; ++i)
      if (rng() % 3 == 0)
        painted.push_back(i);
    if (static_cast<int>(painted.size()) == r)
      painted.pop_back();
    std::vector<Rational> dir(static_cast<std::size_t>(r), Rational(0));
    bool nonzero = false;
    for (int i = 0; i < r; ++i)
      if (std::find(painted.begin(), painted.end(), i) == painted.end())
      {
        dir[static_cast<std::size_t>(i)] = Rational(coef(rng), 1 + static_cast<int>(rng() % 4));
        nonzero = nonzero || dir[static_cast<std::size_t>(i)] != 0;
      }
    if (!nonzero)
      continue;
    return {base_of(name, painted, dir), deg(rng), deg(rng)};
  }
}

}  // namespace

TEST_CASE("ke_endpoints")
{
  const KopBase a1 = base_of("A1", {}, {Rational(1, 2)});
  const auto [z1, z2] = ke_endpoints(a1.z_kappa, a1.z, 1, 1);
  CHECK(evaluate(root({1}), z1) == Quadratic(Rational(1, 2)) + Quadratic::sqrt_of(2) / Quadratic(2));
  CHECK((z1 + z2) * Quadratic(Rational(1, 2)) == a1.z_kappa);
  CHECK(a1.flag.roots().killing(z1 - z2, z1 - z2) == Quadratic(4));

  const KopBase d = base_of("A1xA1", {}, {Rational(1, 2), Rational(-1, 2)});
  const auto ends = ke_endpoints(d.z_kappa, d.z, 1, 1);
  CHECK(evaluate(root({0, 1}), ends.first).is_zero());
  const auto e23 = ke_endpoints(d.z_kappa, d.z, 2, 3);
  CHECK(d.flag.roots().killing(e23.first - e23.second, e23.first - e23.second) == Quadratic(25));
  CHECK_THROWS_AS(ke_endpoints(d.z_kappa, d.z, 0, 1), std::invalid_argument);
}

TEST_CASE("exact Futaki values and the Simpson oracle")
{
  struct Case
  {
    std::string group;
    std::vector<Rational> dir;
    Quadratic expected;
  };
  const std::vector<Case> cases{
      {"A1", {Rational(1, 2)}, -Quadratic::sqrt_of(2) / Quadratic(3)},
      {"A1xA1", {Rational(1, 2), Rational(-1, 2)}, Quadratic(0)},
      {"A1xA1", {Rational(1, 2), Rational(1, 2)}, Quadratic(Rational(-1, 3))},
  };
  for (const auto& c : cases)
  {
    CAPTURE(c.group);
    const KopBase b = base_of(c.group, {}, c.dir);
    const auto r = futaki(b.flag, b.j, b.z, 1, 1);
    REQUIRE(r.exact);
    CHECK(*r.exact == c.expected);
    CHECK(r.vanishes == c.expected.is_zero());
    CHECK(std::abs(futaki_by_simpson(b, b.z, 1, 1) - c.expected.to_double()) < 1e-9);
    const auto f = futaki(b.flag, b.j, to_float(b.z), 1, 1);
    CHECK(std::abs(f.value - c.expected.to_double()) <= std::max(1e-15, f.error_bound));
    CHECK(f.vanishes == c.expected.is_zero());
  }
  const KopBase b = base_of("A1", {}, {1});
  CHECK_THROWS_AS(futaki(b.flag, b.j, b.z, 0, 1), std::invalid_argument);
}

TEST_CASE("segment polynomial examples")
{
  // A1xA1 anti-diagonal: P(0) = 0 so declared m1 = 1 is a degree mismatch
  const KopBase d = base_of("A1xA1", {}, {Rational(1, 2), Rational(-1, 2)});
  CHECK_THROWS_AS(build_segment_polynomial(d.flag, d.j, d.z, 1, 1), DegreeMismatch);
  // ...and its P is (1 - v/2)(v/2) with P' = 1/2 - v/2
  const auto p = independent_p(d, d.z, 1);
  CHECK(p == Polynomial<Quadratic>{Quadratic(0), Quadratic(Rational(1, 2)), Quadratic(Rational(-1, 4))});
  CHECK(p.derivative() == Polynomial<Quadratic>{Quadratic(Rational(1, 2)), Quadratic(Rational(-1, 2))});
  // the diagnostic names the wall root at Z1
  try
  {
    build_segment_polynomial(d.flag, d.j, d.z, 1, 1);
  }
  catch (const DegreeMismatch& e)
  {
    CHECK(std::string(e.what()).find("[0,1]") != std::string::npos);
  }

  // single root: P(v) = a - k v
  const KopBase a1 = base_of("A1", {}, {1});
  const auto sp = build_segment_polynomial(a1.flag, a1.j, a1.z, 1, 1);
  CHECK(sp.p.degree() == 1);
  CHECK(sp.p.coefficient(0) == sp.at_start[0]);
  CHECK(sp.p.coefficient(1) == -sp.slope[0]);
  CHECK(sp.dp == sp.p.derivative());
  CHECK(sp.ddp.is_zero());
  CHECK(sp.p.degree() == static_cast<int>(a1.j.positive().size()));
}

TEST_CASE("u_eval desk value on the A1xA1 polynomial")
{
  const KopBase d = base_of("A1xA1", {}, {Rational(1, 2), Rational(-1, 2)});
  SegmentPolynomial sp;
  sp.m1 = 1;
  sp.m2 = 1;
  sp.p = independent_p(d, d.z, 1);
  sp.first_integral = (sp.p * Polynomial<Quadratic>::linear(Quadratic(-1), Quadratic(1))).antiderivative();
  CHECK(sp.first_integral(Quadratic(1)) == Quadratic(Rational(-1, 16)));
  CHECK(u_eval(sp, Quadratic(1)) == Quadratic(Rational(1, 2)));
  CHECK_THROWS_AS(u_eval(sp, Quadratic(0)), NoEinsteinProfile);
}

TEST_CASE("nonzero Futaki leaves u nonzero at the far end")
{
  const KopBase a1 = base_of("A1", {}, {1});
  const auto sp = build_segment_polynomial(a1.flag, a1.j, a1.z, 1, 1);
  CHECK(futaki_from_segment(sp) == *futaki(a1.flag, a1.j, a1.z, 1, 1).exact);
  CHECK(!futaki_from_segment(sp).is_zero());
  CHECK(!u_positive_exact(sp));
  CHECK_THROWS_AS(profile_t_of_f(sp), NoEinsteinProfile);
}

TEST_CASE("Futaki integral and the v-form integral agree exactly on 50 random configurations")
{
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial)
  {
    const auto c = random_config(rng);
    CAPTURE(c.base.flag.roots().spec().str());
    const auto fut = futaki(c.base.flag, c.base.j, c.base.z, c.m1, c.m2);
    const auto p = independent_p(c.base, c.base.z, c.m1);
    const auto integrand = p * Polynomial<Quadratic>::linear(Quadratic(-c.m1), Quadratic(1));
    CHECK(*fut.exact == integrand.integrate(Quadratic(0), Quadratic(c.m1 + c.m2)));
  }
}

TEST_CASE("u solves the first-order equation as a polynomial identity")
{
  std::mt19937 rng(123);
  int done = 0;
  while (done < 20)
  {
    const auto c = random_config(rng);
    // a segment polynomial needs matching degrees; walls rarely appear for random data so use (1, 1)
    SegmentPolynomial sp;
    try
    {
      sp = build_segment_polynomial(c.base.flag, c.base.j, c.base.z, 1, 1);
    }
    catch (const DegreeMismatch&)
    {
      continue;
    }
    CHECK(first_integral_defect(sp).is_zero());
    // independent form: with N = -2 I, u = N / P, F = -P'/(2P), H = v - m1,
    // P^2 (u'/2 - u F + H) = N' P / 2 + H P^2
    const Polynomial<Quadratic> n = Quadratic(-2) * sp.first_integral;
    const auto h = Polynomial<Quadratic>::linear(Quadratic(-sp.m1), Quadratic(1));
    CHECK((Quadratic(Rational(1, 2)) * n.derivative() * sp.p + h * sp.p * sp.p).is_zero());
    CHECK(sp.f_numerator() == Quadratic(Rational(-1, 2)) * sp.dp);
    ++done;
  }
}

TEST_CASE("root-basis sum identities")
{
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> fdist(0.05, 1.95);
  for (int trial = 0; trial < 20; ++trial)
  {
    const auto c = random_config(rng);
    SegmentPolynomialF sp;
    try
    {
      sp = to_float(build_segment_polynomial(c.base.flag, c.base.j, c.base.z, 1, 1));
    }
    catch (const DegreeMismatch&)
    {
      continue;
    }
    const double f = fdist(rng);
    if (std::abs(sp.p(f)) < 1e-6)
      continue;
    const auto s = root_sum_identities(sp, f);
    CHECK(s.first_lhs == doctest::Approx(s.first_rhs).epsilon(1e-9));
    CHECK(s.second_lhs == doctest::Approx(s.second_rhs).epsilon(1e-9));
  }
}

TEST_CASE("exact positivity of u on a KE configuration")
{
  // A1xA1 anti-diagonal at period scale tau = 2: both endpoints interior, Futaki zero
  const KopBase d = base_of("A1xA1", {}, {Rational(1, 2), Rational(-1, 2)});
  const CartanVector z = scaled_direction(d, 4);
  const auto sp = build_segment_polynomial(d.flag, d.j, z, 1, 1);
  CHECK(futaki_from_segment(sp).is_zero());
  CHECK(u_positive_exact(sp));
  CHECK(u_eval(sp, Quadratic(1)).sign() > 0);
}

TEST_CASE("float segment polynomial matches exact")
{
  const KopBase b = base_of("A3", {1}, {1, 0, -1});
  const auto exact = build_segment_polynomial(b.flag, b.j, b.z, 1, 1);
  const auto approx = build_segment_polynomial(b.flag, b.j, to_float(b.z), 1, 1);
  for (double v : {0.0, 0.3, 1.0, 1.7, 2.0})
    CHECK(approx.p(v) == doctest::Approx(exact.p(Quadratic(parse_rational(std::to_string(v)))).to_double()));
}
