#include "kop/exact.hpp"
#include "kop/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kop;

TEST_CASE("parse_rational accepts integers, fractions and decimals")
{
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational(" 0.25 ") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("sqrt_of extracts square factors")
{
  CHECK(Quadratic::sqrt_of(Rational(9, 4)) == Quadratic(Rational(3, 2)));
  CHECK(Quadratic::sqrt_of(Rational(9, 4)).is_rational());
  const Quadratic r8 = Quadratic::sqrt_of(8);
  CHECK(r8.radicand() == 2);
  CHECK(r8.radical_part() == 2);
  CHECK(Quadratic::sqrt_of(Rational(1, 2)) == Quadratic(0, Rational(1, 2), 2));
  CHECK(Quadratic::sqrt_of(0).is_zero());
  CHECK_THROWS(Quadratic::sqrt_of(-1));
}

TEST_CASE("quadratic field arithmetic is exact")
{
  const Quadratic s2 = Quadratic::sqrt_of(2);
  CHECK(s2 * s2 == Quadratic(2));
  CHECK((s2 * s2).is_rational());
  CHECK((Quadratic(1) + s2) * (Quadratic(1) - s2) == Quadratic(-1));
  CHECK(Quadratic(1) / (Quadratic(1) + s2) == s2 - Quadratic(1));
  CHECK_THROWS_AS(Quadratic::sqrt_of(2) + Quadratic::sqrt_of(3), std::domain_error);
  CHECK_THROWS_AS(Quadratic(1) / Quadratic(0), std::domain_error);
  CHECK_THROWS_AS(s2.as_rational(), std::domain_error);
}

TEST_CASE("sign is decided exactly near cancellation")
{
  const Quadratic s2 = Quadratic::sqrt_of(2);
  // 1.4142135623730950488 < sqrt(2) < 1.4142135623730950489
  CHECK((s2 - Quadratic(parse_rational("1.4142135623730950488"))).sign() == 1);
  CHECK((s2 - Quadratic(parse_rational("1.4142135623730950489"))).sign() == -1);
  CHECK(Quadratic(Rational(3, 2)) > s2);
  CHECK(Quadratic(Rational(7, 5)) < s2);
  CHECK(Quadratic(0).sign() == 0);
}

TEST_CASE("rendering")
{
  CHECK(Quadratic(Rational(-1, 3)).str() == "-1/3");
  CHECK((Quadratic::sqrt_of(2) / Quadratic(3)).str() == "sqrt(2)/3");
  CHECK((-Quadratic::sqrt_of(2) / Quadratic(3)).str() == "-sqrt(2)/3");
  CHECK((Quadratic(1) + Quadratic::sqrt_of(8)).str() == "1 + 2*sqrt(2)");
  CHECK(to_string(Rational(6, 4)) == "3/2");
}

TEST_CASE("to_double is correctly rounded on simple values")
{
  CHECK(Quadratic::sqrt_of(2).to_double() == std::sqrt(2.0));
  CHECK((Quadratic(Rational(1, 3)) * Quadratic::sqrt_of(3)).to_double() == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("random field identities")
{
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-20, 20), k(1, 20);
  for (int i = 0; i < 200; ++i)
  {
    const Quadratic r = Quadratic::sqrt_of(5);
    const Quadratic x = Quadratic(Rational(d(rng), k(rng))) + Quadratic(Rational(d(rng), k(rng))) * r;
    const Quadratic y = Quadratic(Rational(d(rng), k(rng))) + Quadratic(Rational(d(rng), k(rng))) * r;
    CHECK((x + y) - y == x);
    CHECK(x * y == y * x);
    if (!y.is_zero())
      CHECK((x / y) * y == x);
    CHECK((x * y).to_double() == doctest::Approx(x.to_double() * y.to_double()).epsilon(1e-12));
    CHECK((x < y) == (x.to_double() < y.to_double()));
  }
}

TEST_CASE("polynomial calculus")
{
  using P = Polynomial<Quadratic>;
  const P p{Quadratic(1), Quadratic(-3), Quadratic(0), Quadratic(2)};  // 1 - 3x + 2x^3
  CHECK(p.degree() == 3);
  CHECK(p(Quadratic(2)) == Quadratic(11));
  CHECK(p.derivative() == P{Quadratic(-3), Quadratic(0), Quadratic(6)});
  CHECK(p.antiderivative().derivative() == p);
  CHECK(p.integrate(Quadratic(0), Quadratic(1)) == Quadratic(Rational(0)));
  // p(1 + 2x)
  const P c = p.compose_linear(Quadratic(1), Quadratic(2));
  for (int x = -3; x <= 3; ++x)
    CHECK(c(Quadratic(x)) == p(Quadratic(1 + 2 * x)));
  const P sq = P{Quadratic(0), Quadratic(0), Quadratic(5), Quadratic(1)};
  CHECK(sq.zero_order_at_origin() == 2);
  CHECK(sq.divide_by_power(2) == P{Quadratic(5), Quadratic(1)});
  CHECK_THROWS_AS(sq.divide_by_power(3), std::domain_error);
  auto [q, r] = p.divmod(P{Quadratic(-1), Quadratic(1)});
  CHECK(q * P{Quadratic(-1), Quadratic(1)} + r == p);
  CHECK(r.degree() <= 0);
  CHECK_THROWS_AS(p.divmod(P{}), std::domain_error);
}

TEST_CASE("sturm root counts")
{
  using P = Polynomial<Quadratic>;
  // (x - 1)(x - 2)(x - 3)
  const P p = P{Quadratic(-1), Quadratic(1)} * P{Quadratic(-2), Quadratic(1)} * P{Quadratic(-3), Quadratic(1)};
  CHECK(sturm_root_count(p, Quadratic(0), Quadratic(4)) == 3);
  CHECK(sturm_root_count(p, Quadratic(1), Quadratic(2)) == 1);  // (lo, hi]
  CHECK(sturm_root_count(p, Quadratic(Rational(3, 2)), Quadratic(Rational(5, 2))) == 1);
  const P q{Quadratic(1), Quadratic(0), Quadratic(1)};  // x^2 + 1
  CHECK(sturm_root_count(q, Quadratic(-10), Quadratic(10)) == 0);
  // x^2 - 2 has one root in (1, 3/2], sqrt(2) endpoints handled exactly
  const P r{Quadratic(-2), Quadratic(0), Quadratic(1)};
  CHECK(sturm_root_count(r, Quadratic(1), Quadratic(Rational(3, 2))) == 1);
  CHECK(sturm_root_count(r, Quadratic(0), Quadratic::sqrt_of(2)) == 1);
  // repeated roots are counted once
  CHECK(sturm_root_count(P{Quadratic(-1), Quadratic(1)} * P{Quadratic(-1), Quadratic(1)}, Quadratic(0), Quadratic(2)) == 1);
}
