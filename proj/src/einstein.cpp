#include "kop/einstein.hpp"

#include <cmath>
#include <sstream>

namespace kop
{

namespace
{

template <class S, class IsZero>
SegmentPolynomialT<S> build_impl(const FlagData& flag, const InvariantComplexStructure& j, const CartanVec<S>& z,
                                 const CartanVec<S>& z_kappa, int m1, int m2, IsZero zero)
{
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("degrees must be >= 1");
  if (z.size() != static_cast<std::size_t>(flag.roots().rank()))
    throw std::invalid_argument("direction has the wrong length");
  SegmentPolynomialT<S> sp;
  sp.m1 = m1;
  sp.m2 = m2;
  sp.roots = j.positive();
  sp.p = Polynomial<S>::constant(S(1L));
  const S end(static_cast<long>(m1 + m2));
  std::size_t order_start = 0, order_end = 0;
  std::string start_walls, end_walls;
  for (const auto& a : sp.roots)
  {
    const S k = evaluate(a, z);
    const S kap = evaluate(a, z_kappa);
    const S a1 = kap + S(static_cast<long>(m1)) * k;
    sp.slope.push_back(k);
    sp.kappa.push_back(kap);
    sp.at_start.push_back(a1);
    sp.p *= Polynomial<S>::linear(a1, -k);
    if (zero(a1))
    {
      ++order_start;
      start_walls += " " + a.str();
    }
    if (zero(a1 - end * k))
    {
      ++order_end;
      end_walls += " " + a.str();
    }
  }
  if (order_start != static_cast<std::size_t>(m1 - 1) || order_end != static_cast<std::size_t>(m2 - 1))
  {
    std::ostringstream os;
    os << "degree mismatch: P vanishes to order " << order_start << " at v=0";
    if (!start_walls.empty())
      os << " (walls" << start_walls << ")";
    os << " and order " << order_end << " at v=" << (m1 + m2);
    if (!end_walls.empty())
      os << " (walls" << end_walls << ")";
    os << ", declared m1=" << m1 << ", m2=" << m2 << " require orders " << (m1 - 1) << " and " << (m2 - 1);
    throw DegreeMismatch(os.str());
  }
  sp.dp = sp.p.derivative();
  sp.ddp = sp.dp.derivative();
  sp.first_integral = (sp.p * Polynomial<S>::linear(S(static_cast<long>(-m1)), S(1L))).antiderivative();
  return sp;
}

}  // namespace

SegmentPolynomial build_segment_polynomial(const FlagData& flag, const InvariantComplexStructure& j,
                                           const CartanVector& z, int m1, int m2)
{
  return build_impl(flag, j, z, ricci_invariant(flag, j), m1, m2, [](const Quadratic& x) { return x.is_zero(); });
}

SegmentPolynomialF build_segment_polynomial(const FlagData& flag, const InvariantComplexStructure& j,
                                            const CartanVectorF& z, int m1, int m2, double tol)
{
  return build_impl(flag, j, z, to_float(ricci_invariant(flag, j)), m1, m2,
                    [tol](double x) { return std::abs(x) <= tol; });
}

SegmentPolynomialF to_float(const SegmentPolynomial& sp)
{
  auto conv = [](const Quadratic& q) { return q.to_double(); };
  SegmentPolynomialF r;
  r.m1 = sp.m1;
  r.m2 = sp.m2;
  r.roots = sp.roots;
  for (const auto& x : sp.at_start)
    r.at_start.push_back(conv(x));
  for (const auto& x : sp.slope)
    r.slope.push_back(conv(x));
  for (const auto& x : sp.kappa)
    r.kappa.push_back(conv(x));
  r.p = sp.p.map<double>(conv);
  r.dp = sp.dp.map<double>(conv);
  r.ddp = sp.ddp.map<double>(conv);
  r.first_integral = sp.first_integral.map<double>(conv);
  return r;
}

SegmentPolynomialF with_scaled_ricci_invariant(SegmentPolynomialF sp, double factor)
{
  for (auto& k : sp.kappa)
    k *= factor;
  return sp;
}

namespace
{

// y * prod alpha(Z^kappa - y Z) as a polynomial in y
template <class S>
Polynomial<S> futaki_integrand(const InvariantComplexStructure& j, const CartanVec<S>& z,
                               const CartanVec<S>& z_kappa)
{
  Polynomial<S> poly = Polynomial<S>::linear(S(0L), S(1L));
  for (const auto& a : j.positive())
    poly *= Polynomial<S>::linear(evaluate(a, z_kappa), -evaluate(a, z));
  return poly;
}

}  // namespace

FutakiReport futaki(const FlagData& flag, const InvariantComplexStructure& j, const CartanVector& z, int m1, int m2)
{
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("degrees must be >= 1");
  const auto poly = futaki_integrand(j, z, ricci_invariant(flag, j));
  FutakiReport r;
  r.exact = poly.integrate(Quadratic(static_cast<long>(-m1)), Quadratic(static_cast<long>(m2)));
  r.value = r.exact->to_double();
  r.vanishes = r.exact->is_zero();
  return r;
}

FutakiReport futaki(const FlagData& flag, const InvariantComplexStructure& j, const CartanVectorF& z, int m1, int m2,
                    double zero_tol)
{
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("degrees must be >= 1");
  const auto poly = futaki_integrand(j, z, to_float(ricci_invariant(flag, j)));
  FutakiReport r;
  const auto F = poly.antiderivative();
  r.value = F(static_cast<double>(m2)) - F(static_cast<double>(-m1));
  // rounding bound: each antiderivative term evaluated at |y| <= max(m1, m2)
  double mag = 0;
  const double ymax = std::max(m1, m2);
  double pw = 1;
  for (const auto& c : F.coefficients())
  {
    mag += std::abs(c) * pw;
    pw *= ymax;
  }
  r.error_bound = 4.0 * static_cast<double>(F.coefficients().size() + 1) * 2.2e-16 * 2.0 * mag;
  r.vanishes = std::abs(r.value) < std::max(zero_tol, r.error_bound);
  return r;
}

bool u_positive_exact(const SegmentPolynomial& sp)
{
  const Quadratic end = sp.end();
  if (!sp.first_integral(end).is_zero())
    return false;
  // (m1 + m2 - v)^k
  auto right_power = [&](int k) {
    Polynomial<Quadratic> r = Polynomial<Quadratic>::constant(Quadratic(1));
    for (int i = 0; i < k; ++i)
      r *= Polynomial<Quadratic>::linear(end, Quadratic(-1));
    return r;
  };
  auto strip = [&](const Polynomial<Quadratic>& poly, int left, int right) {
    auto q = poly.divide_by_power(static_cast<std::size_t>(left));
    auto [quot, rem] = q.divmod(right_power(right));
    if (!rem.is_zero())
      throw std::logic_error("polynomial not divisible at the right endpoint");
    return quot;
  };
  const auto reduced_p = strip(sp.p, sp.m1 - 1, sp.m2 - 1);
  const auto reduced_i = strip(sp.first_integral, sp.m1, sp.m2);
  const Quadratic mid = end / Quadratic(2);
  // P > 0 and I < 0 strictly inside, with no roots on the closed interval
  const bool p_ok = reduced_p(mid).sign() > 0 && reduced_p(Quadratic(0)).sign() != 0 &&
                    sturm_root_count(reduced_p, Quadratic(0), end) == 0;
  const bool i_ok = reduced_i(mid).sign() < 0 && reduced_i(Quadratic(0)).sign() != 0 &&
                    sturm_root_count(reduced_i, Quadratic(0), end) == 0;
  return p_ok && i_ok;
}

SumIdentities root_sum_identities(const SegmentPolynomialF& sp, double f)
{
  // real basis: each alpha in R_m^+ contributes two vectors with
  // h = c alpha(Z1), k = c alpha(Z); take c = 1/2 to exercise the cancellation
  const double c = 0.5;
  double s1 = 0, s2 = 0;
  for (std::size_t a = 0; a < sp.roots.size(); ++a)
  {
    const double h = c * sp.at_start[a];
    const double k = c * sp.slope[a];
    const double d = h - f * k;
    s1 += 2.0 * k / d;
    s2 += 2.0 * k * k / (d * d);
  }
  const double p = sp.p(f), dp = sp.dp(f), ddp = sp.ddp(f);
  return {s1, -2.0 * dp / p, s2, 2.0 * ((dp / p) * (dp / p) - ddp / p)};
}

}  // namespace kop
