#include "kop/einstein.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace kop
{

namespace
{

using PolyD = Polynomial<double>;

// Divides by x^k, accepting low coefficients that are zero up to rounding.
PolyD drop_low(const PolyD& p, std::size_t k, double rel_tol, const char* what)
{
  double scale = 0;
  for (double c : p.coefficients())
    scale = std::max(scale, std::abs(c));
  std::vector<double> c = p.coefficients();
  for (std::size_t i = 0; i < std::min(k, c.size()); ++i)
  {
    if (std::abs(c[i]) > rel_tol * std::max(scale, 1.0))
    {
      std::ostringstream os;
      os << what << ": coefficient " << i << " = " << c[i] << " should vanish";
      throw NoEinsteinProfile(os.str());
    }
  }
  if (k >= c.size())
    return {};
  return PolyD(std::vector<double>(c.begin() + static_cast<std::ptrdiff_t>(k), c.end()));
}

// U = -2 n/d and its first two derivatives
struct RatioDerivs
{
  double v, d1, d2;
};

// value, first and second derivative in one Horner pass
std::array<double, 3> eval3(const PolyD& p, double x)
{
  double b0 = 0, b1 = 0, b2 = 0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it)
  {
    b2 = b2 * x + b1;
    b1 = b1 * x + b0;
    b0 = b0 * x + *it;
  }
  return {b0, b1, 2.0 * b2};
}

double horner(const PolyD& p, double x)
{
  double b = 0;
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    b = b * x + *it;
  return b;
}

RatioDerivs ratio(const PolyD& num, const PolyD& den, double x)
{
  const auto [n, n1, n2] = eval3(num, x);
  const auto [d, d1, d2] = eval3(den, x);
  const double g = n / d;
  const double g1 = (n1 * d - n * d1) / (d * d);
  const double g2 = ((n2 * d - n * d2) * d - 2.0 * d1 * (n1 * d - n * d1)) / (d * d * d);
  return {-2.0 * g, -2.0 * g1, -2.0 * g2};
}

// integrand of t in the variable x = sqrt(w), w the distance to an endpoint
double t_integrand(const PolyD& num, const PolyD& den, double x)
{
  const double w = x * x;
  const double U = -2.0 * horner(num, w) / horner(den, w);
  if (!(U > 0))
    throw NoEinsteinProfile("u <= 0 near a singular orbit");
  return 2.0 / std::sqrt(U);
}

double integrate(const std::function<double(double)>& g, double a, double b, double tol, double* err)
{
  if (b <= a)
    return 0.0;
  double e = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 10, tol, &e);
  if (err)
    *err = std::max(*err, e);
  return v;
}

}  // namespace

ProfileCurve::ProfileCurve(const SegmentPolynomial& sp, double quad_tol)
{
  m1_ = sp.m1;
  m2_ = sp.m2;
  end_ = static_cast<double>(sp.m1 + sp.m2);
  if (!sp.first_integral(sp.end()).is_zero())
    throw NoEinsteinProfile("the Futaki integral does not vanish: " + sp.first_integral(sp.end()).str());
  if (!u_positive_exact(sp))
    throw NoEinsteinProfile("u(f) is not positive on (0, m1 + m2)");
  auto conv = [](const Quadratic& q) { return q.to_double(); };
  const Quadratic end = sp.end();
  left_den_ = sp.p.divide_by_power(static_cast<std::size_t>(sp.m1 - 1)).map<double>(conv);
  left_num_ = sp.first_integral.divide_by_power(static_cast<std::size_t>(sp.m1)).map<double>(conv);
  right_den_ = sp.p.compose_linear(end, Quadratic(-1)).divide_by_power(static_cast<std::size_t>(sp.m2 - 1)).map<double>(conv);
  right_num_ = sp.first_integral.compose_linear(end, Quadratic(-1)).divide_by_power(static_cast<std::size_t>(sp.m2)).map<double>(conv);
  init(quad_tol);
}

ProfileCurve::ProfileCurve(const SegmentPolynomialF& sp, double quad_tol)
{
  m1_ = sp.m1;
  m2_ = sp.m2;
  end_ = static_cast<double>(sp.m1 + sp.m2);
  const double rel = 1e-9;
  left_den_ = drop_low(sp.p, static_cast<std::size_t>(sp.m1 - 1), rel, "P at v=0");
  left_num_ = drop_low(sp.first_integral, static_cast<std::size_t>(sp.m1), rel, "I at v=0");
  right_den_ = drop_low(sp.p.compose_linear(end_, -1.0), static_cast<std::size_t>(sp.m2 - 1), rel, "P at v=m1+m2");
  right_num_ = drop_low(sp.first_integral.compose_linear(end_, -1.0), static_cast<std::size_t>(sp.m2), rel,
                        "I at v=m1+m2 (Futaki integral)");
  // u must stay positive inside; the exact path uses Sturm sequences instead
  const std::size_t n = 4000;
  for (std::size_t i = 1; i < n; ++i)
  {
    const double f = end_ * static_cast<double>(i) / static_cast<double>(n);
    if (!(u(f) > 0))
    {
      std::ostringstream os;
      os << "u(f) <= 0 at f = " << f;
      throw NoEinsteinProfile(os.str());
    }
  }
  init(quad_tol);
}

void ProfileCurve::init(double quad_tol)
{
  quad_tol_ = quad_tol;
  split_ = end_ / 2.0;
  if (!(left_limit() > 0) || !(right_limit() > 0))
    throw NoEinsteinProfile("u does not vanish linearly at the endpoints");
  quad_error_ = 0;
  left_xmax_ = std::sqrt(split_);
  right_xmax_ = std::sqrt(end_ - split_);
  auto table = [this](const PolyD& num, const PolyD& den, double xmax) {
    std::vector<double> cum{0.0};
    auto g = [&](double x) { return t_integrand(num, den, x); };
    for (std::size_t k = 0; k < panels_; ++k)
    {
      const double a = xmax * static_cast<double>(k) / panels_;
      const double b = xmax * static_cast<double>(k + 1) / panels_;
      cum.push_back(cum.back() + integrate(g, a, b, quad_tol_, &quad_error_));
    }
    return cum;
  };
  left_cum_ = table(left_num_, left_den_, left_xmax_);
  right_cum_ = table(right_num_, right_den_, right_xmax_);
  t_split_ = left_cum_.back();
  delta_ = t_split_ + right_cum_.back();
}

double ProfileCurve::side_integral(bool left, double x) const
{
  const auto& cum = left ? left_cum_ : right_cum_;
  const double xmax = left ? left_xmax_ : right_xmax_;
  const PolyD& num = left ? left_num_ : right_num_;
  const PolyD& den = left ? left_den_ : right_den_;
  if (x >= xmax)
    return cum.back();
  const double h = xmax / panels_;
  const auto k = std::min(panels_ - 1, static_cast<std::size_t>(x / h));
  const double a = h * static_cast<double>(k);
  auto g = [&](double y) { return t_integrand(num, den, y); };
  return cum[k] + integrate(g, a, x, quad_tol_, nullptr);
}

// x in [0, xmax] with side_integral(left, x) = target
double ProfileCurve::side_inverse(bool left, double target) const
{
  const auto& cum = left ? left_cum_ : right_cum_;
  const double xmax = left ? left_xmax_ : right_xmax_;
  const PolyD& num = left ? left_num_ : right_num_;
  const PolyD& den = left ? left_den_ : right_den_;
  if (target <= 0)
    return 0;
  if (target >= cum.back())
    return xmax;
  const double h = xmax / panels_;
  const auto k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
  double lo = h * static_cast<double>(k), hi = k + 1 == panels_ ? xmax : h * static_cast<double>(k + 1);
  const double base = cum[k], a = lo;
  auto g = [&](double y) { return t_integrand(num, den, y); };
  double x = lo + (target - base) / g(lo);
  if (!(x > lo && x < hi))
    x = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it)
  {
    const double r = base + integrate(g, a, x, quad_tol_, nullptr) - target;
    if (r > 0)
      hi = x;
    else
      lo = x;
    double next = x - r / g(x);
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    const bool done = std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
    x = next;
    if (done)
      break;
  }
  return x;
}

double ProfileCurve::left_limit() const
{
  return ratio(left_num_, left_den_, 0.0).v;
}

double ProfileCurve::right_limit() const
{
  return ratio(right_num_, right_den_, 0.0).v;
}

double ProfileCurve::left_slope() const
{
  return ratio(left_num_, left_den_, 0.0).d1;
}

double ProfileCurve::u(double f) const
{
  if (f <= split_)
    return f * ratio(left_num_, left_den_, f).v;
  const double w = end_ - f;
  return w * ratio(right_num_, right_den_, w).v;
}

double ProfileCurve::du(double f) const
{
  if (f <= split_)
  {
    auto r = ratio(left_num_, left_den_, f);
    return r.v + f * r.d1;
  }
  const double w = end_ - f;
  auto r = ratio(right_num_, right_den_, w);
  return -(r.v + w * r.d1);
}

double ProfileCurve::ddu(double f) const
{
  if (f <= split_)
  {
    auto r = ratio(left_num_, left_den_, f);
    return 2.0 * r.d1 + f * r.d2;
  }
  const double w = end_ - f;
  auto r = ratio(right_num_, right_den_, w);
  return 2.0 * r.d1 + w * r.d2;
}

double ProfileCurve::t_of_f(double f) const
{
  if (f <= 0)
    return 0;
  if (f >= end_)
    return delta_;
  if (f <= split_)
    return side_integral(true, std::sqrt(f));
  return delta_ - side_integral(false, std::sqrt(end_ - f));
}

double ProfileCurve::f_of_t(double t) const
{
  if (t <= 0)
    return 0;
  if (t >= delta_)
    return end_;
  if (t <= t_split_)
  {
    const double x = side_inverse(true, t);
    return x * x;
  }
  const double x = side_inverse(false, delta_ - t);
  return end_ - x * x;
}

ProfilePoint ProfileCurve::at(double t) const
{
  ProfilePoint p;
  p.t = t;
  p.f = f_of_t(t);
  const double uu = u(p.f);
  p.fp = uu > 0 ? std::sqrt(uu) : 0.0;
  p.fpp = 0.5 * du(p.f);
  return p;
}

ProfileCurve profile_t_of_f(const SegmentPolynomial& sp)
{
  return ProfileCurve(sp);
}

ProfileCurve profile_t_of_f(const SegmentPolynomialF& sp)
{
  return ProfileCurve(sp);
}

double delta_by_ode(const SegmentPolynomialF& sp, const ProfileCurve& curve)
{
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double m1 = sp.m1;
  const double end = curve.end();
  auto rhs = [&](const State& x, State& dx, double) {
    const double f = x[0], fp = x[1];
    dx[0] = fp;
    dx[1] = -fp * fp * sp.dp(f) / (2.0 * sp.p(f)) - f + m1;
  };
  const double u1 = curve.left_slope();
  const double t0 = 1e-3;
  State x{t0 * t0 / 2.0 + u1 * std::pow(t0, 4) / 24.0, t0 + u1 * std::pow(t0, 3) / 6.0};
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, t0, 1e-4);
  const double t_cap = 1e3;
  while (stepper.current_time() < t_cap)
  {
    auto [ta, tb] = stepper.do_step(rhs);
    const State xb = stepper.current_state();
    if (xb[1] > 0 && xb[0] < end)
      continue;
    // bracket [ta, tb]: find f' = 0 (or f = end if that comes first)
    auto stop = [&](double t) {
      State s;
      stepper.calc_state(t, s);
      return s[1] <= 0 || s[0] >= end;
    };
    double lo = ta, hi = tb;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
    {
      const double mid = 0.5 * (lo + hi);
      (stop(mid) ? hi : lo) = mid;
    }
    // refine by linear interpolation of f' across the bracket
    State sl, sh;
    stepper.calc_state(lo, sl);
    stepper.calc_state(hi, sh);
    if (sl[1] > 0 && sh[1] <= 0)
      return lo + (hi - lo) * sl[1] / (sl[1] - sh[1]);
    return 0.5 * (lo + hi);
  }
  throw NoEinsteinProfile("f' did not return to zero while integrating the profile equation");
}

double ricci_bracket(const SegmentPolynomialF& sp, const ProfilePoint& pt)
{
  return pt.fpp + pt.fp * pt.fp * sp.dp(pt.f) / (2.0 * sp.p(pt.f));
}

TangentialRicci ricci_tangential(const SegmentPolynomialF& sp, const ProfilePoint& pt, std::size_t root)
{
  if (root >= sp.roots.size())
    throw std::out_of_range("root index out of range");
  const double q = ricci_bracket(sp, pt);
  TangentialRicci r;
  r.ricci = sp.kappa[root] + q * sp.slope[root];
  r.metric = sp.at_start[root] - pt.f * sp.slope[root];
  r.residual = r.ricci / r.metric - 1.0;
  return r;
}

NormalRicci ricci_normal(const SegmentPolynomialF& sp, const ProfileCurve& curve, double t, double h)
{
  const double delta = curve.delta();
  if (!(t > 0 && t < delta))
    throw std::out_of_range("r(xi, xi) is evaluated on (0, delta) only");
  const ProfilePoint pt = curve.at(t);
  const double p = sp.p(pt.f), dp = sp.dp(pt.f), ddp = sp.ddp(pt.f);
  const double lp = dp / p;
  const double F = -0.5 * lp;
  const double dF = 0.5 * (lp * lp - ddp / p);
  const double fppp = 2.0 * pt.fp * pt.fpp * F + pt.fp * pt.fp * pt.fp * dF - pt.fp;
  const double sum1 = -2.0 * lp;
  const double sum2 = 2.0 * (lp * lp - ddp / p);
  NormalRicci r;
  r.closed_form = -fppp / pt.fp + 0.5 * pt.fpp * sum1 + 0.25 * pt.fp * pt.fp * sum2;

  const double step = std::min({h * delta, 0.5 * t, 0.5 * (delta - t)});
  const double qp = ricci_bracket(sp, curve.at(t + step));
  const double qm = ricci_bracket(sp, curve.at(t - step));
  r.derivative_form = -(qp - qm) / (2.0 * step) / pt.fp;
  return r;
}

ProfileDiagnostics interior_residuals(const SegmentPolynomialF& sp, const ProfileCurve& curve, std::size_t points)
{
  ProfileDiagnostics d;
  const double delta = curve.delta();
  for (std::size_t j = 1; j <= points; ++j)
  {
    const double t = delta * static_cast<double>(j) / static_cast<double>(points + 1);
    const ProfilePoint pt = curve.at(t);
    const double ode = ricci_bracket(sp, pt) + pt.f - sp.m1;
    d.max_ode_residual = std::max(d.max_ode_residual, std::abs(ode));
    for (std::size_t a = 0; a < sp.roots.size(); ++a)
      d.max_tangential_residual = std::max(d.max_tangential_residual, std::abs(ricci_tangential(sp, pt, a).residual));
    const auto n = ricci_normal(sp, curve, t);
    d.max_normal_residual =
      std::max({d.max_normal_residual, std::abs(n.closed_form - 1.0), std::abs(n.derivative_form - 1.0)});
    d.max_route_gap = std::max(d.max_route_gap, std::abs(n.closed_form - n.derivative_form));
  }
  d.quadrature_error = curve.quadrature_error();
  d.fpp_start = curve.at(0.0).fpp;
  d.fpp_end = curve.at(delta).fpp;
  d.f_end = curve.f_of_t(delta);
  return d;
}

ProfileSolution::ProfileSolution(SegmentPolynomialF sp, std::shared_ptr<const ProfileCurve> curve,
                                 std::vector<ProfileRow> rows, ProfileDiagnostics diag)
  : sp_(std::move(sp)), curve_(std::move(curve)), rows_(std::move(rows)), diag_(diag)
{
}

Parametrization ProfileSolution::parametrization() const
{
  Parametrization p;
  for (const auto& r : rows_)
  {
    p.t.push_back(r.t);
    p.values.push_back(r.f);
    p.second_derivative.push_back(r.fpp);
  }
  return p;
}

namespace
{

ProfileSolution solve_with(SegmentPolynomialF spf, std::shared_ptr<const ProfileCurve> curve, std::size_t grid_size)
{
  if (grid_size < 2)
    throw std::invalid_argument("grid size must be at least 2");
  const double delta = curve->delta();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ProfileRow> rows;
  rows.reserve(grid_size);
  ProfileDiagnostics diag;
  for (std::size_t i = 0; i < grid_size; ++i)
  {
    // endpoints pinned exactly
    const double t = i + 1 == grid_size ? delta : delta * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const ProfilePoint pt = curve->at(t);
    ProfileRow row{t, pt.f, pt.fp, pt.fpp, nan, nan};
    if (i > 0 && i + 1 < grid_size)
    {
      double tan = 0;
      for (std::size_t a = 0; a < spf.roots.size(); ++a)
        tan = std::max(tan, std::abs(ricci_tangential(spf, pt, a).residual));
      const auto n = ricci_normal(spf, *curve, t);
      row.res_tan = tan;
      row.res_norm = std::abs(n.derivative_form - 1.0);
      diag.max_tangential_residual = std::max(diag.max_tangential_residual, tan);
      diag.max_normal_residual =
        std::max({diag.max_normal_residual, row.res_norm, std::abs(n.closed_form - 1.0)});
      diag.max_route_gap = std::max(diag.max_route_gap, std::abs(n.closed_form - n.derivative_form));
      diag.max_ode_residual = std::max(diag.max_ode_residual, std::abs(ricci_bracket(spf, pt) + pt.f - spf.m1));
    }
    rows.push_back(row);
  }
  diag.quadrature_error = curve->quadrature_error();
  diag.fpp_start = rows.front().fpp;
  diag.fpp_end = rows.back().fpp;
  diag.f_end = rows.back().f;
  if (std::abs(diag.fpp_start - 1.0) > 1e-4 || std::abs(diag.fpp_end + 1.0) > 1e-4)
  {
    std::ostringstream os;
    os << "profile does not close smoothly: f''(0)=" << diag.fpp_start << ", f''(delta)=" << diag.fpp_end;
    throw NoEinsteinProfile(os.str());
  }
  return ProfileSolution(std::move(spf), std::move(curve), std::move(rows), diag);
}

}  // namespace

ProfileSolution profile_solve(const SegmentPolynomial& sp, std::size_t grid_size)
{
  auto curve = std::make_shared<const ProfileCurve>(sp);
  return solve_with(to_float(sp), std::move(curve), grid_size);
}

ProfileSolution profile_solve(const SegmentPolynomialF& sp, std::size_t grid_size)
{
  auto curve = std::make_shared<const ProfileCurve>(sp);
  return solve_with(sp, std::move(curve), grid_size);
}

}  // namespace kop
