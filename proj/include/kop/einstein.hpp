#ifndef KOP_EINSTEIN_HPP
#define KOP_EINSTEIN_HPP

#include "kop/model.hpp"
#include "kop/polynomial.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kop
{

/// Thrown when P vanishes to an order that disagrees with the declared degrees.
class DegreeMismatch : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the profile does not exist: u <= 0 inside (0, m1 + m2), or P
/// vanishes in the interior.
class NoEinsteinProfile : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Endpoints forced by the Einstein condition with c = 1:
/// Z1 = Z^kappa + m1 Z, Z2 = Z^kappa - m2 Z.
template <class S>
std::pair<CartanVec<S>, CartanVec<S>> ke_endpoints(const CartanVec<S>& z_kappa, const CartanVec<S>& z, int m1, int m2)
{
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("degrees must be >= 1");
  return {z_kappa + S(static_cast<long>(m1)) * z, z_kappa - S(static_cast<long>(m2)) * z};
}

/// P(v) = prod over R_m^+ of alpha(Z1 - v Z), with Z1 = Z^kappa + m1 Z.
template <class S>
struct SegmentPolynomialT
{
  int m1 = 1;
  int m2 = 1;
  std::vector<Root> roots;  // R_m^+
  std::vector<S> at_start;  // alpha(Z1)
  std::vector<S> slope;     // alpha(Z)
  std::vector<S> kappa;     // alpha(Z^kappa)
  Polynomial<S> p;
  Polynomial<S> dp;
  Polynomial<S> ddp;
  /// I(v) = int_0^v P(s) (s - m1) ds
  Polynomial<S> first_integral;

  S end() const { return S(static_cast<long>(m1 + m2)); }

  /// (1/2) sum_alpha alpha(Z) prod_{beta != alpha} beta(Z1 - v Z): numerator
  /// of F(v) = (1/4) sum_i k_i / (h_i - v k_i) over the denominator P.
  Polynomial<S> f_numerator() const
  {
    Polynomial<S> acc;
    for (std::size_t a = 0; a < roots.size(); ++a)
    {
      Polynomial<S> term = Polynomial<S>::constant(slope[a] / S(2L));
      for (std::size_t b = 0; b < roots.size(); ++b)
        if (b != a)
          term *= Polynomial<S>::linear(at_start[b], -slope[b]);
      acc += term;
    }
    return acc;
  }
};

using SegmentPolynomial = SegmentPolynomialT<Quadratic>;
using SegmentPolynomialF = SegmentPolynomialT<double>;

/// Builds P for the direction z (already scaled; see scaled_direction). The
/// order of vanishing of P at 0 and at m1 + m2 must be m1 - 1 and m2 - 1,
/// otherwise DegreeMismatch. Float input uses tol for the zero tests.
SegmentPolynomial build_segment_polynomial(const FlagData& flag, const InvariantComplexStructure& j,
                                           const CartanVector& z, int m1, int m2);
SegmentPolynomialF build_segment_polynomial(const FlagData& flag, const InvariantComplexStructure& j,
                                            const CartanVectorF& z, int m1, int m2, double tol = 1e-10);
SegmentPolynomialF to_float(const SegmentPolynomial& sp);

/// Copy of sp with every alpha(Z^kappa) multiplied by factor (negative controls).
SegmentPolynomialF with_scaled_ricci_invariant(SegmentPolynomialF sp, double factor);

struct FutakiReport
{
  std::optional<Quadratic> exact;
  double value = 0;
  double error_bound = 0;
  bool vanishes = false;
};

/// int_{-m1}^{m2} y prod_{alpha in R_m^+} alpha(Z^kappa - y Z) dy, by exact
/// expansion in y and termwise integration.
FutakiReport futaki(const FlagData& flag, const InvariantComplexStructure& j, const CartanVector& z, int m1, int m2);
/// Float evaluation; vanishes when |value| < zero_tol.
FutakiReport futaki(const FlagData& flag, const InvariantComplexStructure& j, const CartanVectorF& z, int m1, int m2,
                    double zero_tol = 1e-10);

/// The same integral after y = v - m1: int_0^{m1+m2} P(v)(v - m1) dv = I(m1+m2).
template <class S>
S futaki_from_segment(const SegmentPolynomialT<S>& sp)
{
  return sp.first_integral(sp.end());
}

/// u(f) = -2 I(f) / P(f), the square of f' as a function of f.
template <class S>
S u_eval(const SegmentPolynomialT<S>& sp, const S& f)
{
  const S pf = sp.p(f);
  if (is_zero(pf))
    throw NoEinsteinProfile("P vanishes at f in the interior: singular configuration");
  return S(-2L) * sp.first_integral(f) / pf;
}

/// Numerator of (1/2) u' - u F + H over the common denominator P^2, with
/// u = -2I/P, F = f_numerator/P, H = v - m1. Zero iff u solves the first
/// order equation for p^2 = (f')^2.
template <class S>
Polynomial<S> first_integral_defect(const SegmentPolynomialT<S>& sp)
{
  const Polynomial<S> n = S(-2L) * sp.first_integral;
  const Polynomial<S>& d = sp.p;
  const Polynomial<S> h = Polynomial<S>::linear(S(static_cast<long>(-sp.m1)), S(1L));
  return S(1L) / S(2L) * (n.derivative() * d - n * d.derivative()) - n * sp.f_numerator() + h * d * d;
}

/// Exact test that u > 0 on (0, m1 + m2) (Sturm count of I / (v^m1 (m1+m2-v)^m2)).
bool u_positive_exact(const SegmentPolynomial& sp);

/// Exact identities sum_i k_i/(h_i - f k_i) = -2P'/P and
/// sum_i k_i^2/(h_i - f k_i)^2 = 2[(P'/P)^2 - P''/P], returned as
/// (lhs, rhs) pairs evaluated at f.
struct SumIdentities
{
  double first_lhs, first_rhs, second_lhs, second_rhs;
};
SumIdentities root_sum_identities(const SegmentPolynomialF& sp, double f);

struct ProfilePoint
{
  double t = 0;
  double f = 0;
  double fp = 0;
  double fpp = 0;
};

/// The inverse profile t(f) = int_0^f ds / sqrt(u(s)) and its inverse f(t).
///
/// Near each endpoint u(s) = w U(w) with w the distance to the endpoint and
/// U smooth with U = 2 at the endpoint, so the substitution w = x^2 gives the
/// smooth integrand 2 / sqrt(U(x^2)).
class ProfileCurve
{
public:
  explicit ProfileCurve(const SegmentPolynomial& sp, double quad_tol = 1e-12);
  explicit ProfileCurve(const SegmentPolynomialF& sp, double quad_tol = 1e-12);

  double delta() const { return delta_; }
  double end() const { return end_; }
  int m1() const { return m1_; }

  double t_of_f(double f) const;
  double f_of_t(double t) const;
  /// u(f) and du/df through the endpoint expansions.
  double u(double f) const;
  double du(double f) const;
  double ddu(double f) const;
  /// f, f' = sqrt(u(f)), f'' = u'(f)/2 at time t.
  ProfilePoint at(double t) const;
  /// Largest quadrature error estimate seen while building delta.
  double quadrature_error() const { return quad_error_; }
  /// U(0) at the two ends (both equal 2 on a valid profile) and U'(0) at 0.
  double left_limit() const;
  double right_limit() const;
  double left_slope() const;

private:
  void init(double quad_tol);

  int m1_ = 1;
  int m2_ = 1;
  double end_ = 2;
  double split_ = 1;
  double delta_ = 0;
  double t_split_ = 0;
  double quad_error_ = 0;
  double quad_tol_ = 1e-12;
  // u(end_point -/+ w) = w * (-2) num(w) / den(w)
  Polynomial<double> left_num_, left_den_, right_num_, right_den_;
  // cumulative t at equally spaced nodes of x = sqrt(distance to the endpoint)
  static constexpr std::size_t panels_ = 32;
  std::vector<double> left_cum_, right_cum_;
  double left_xmax_ = 1, right_xmax_ = 1;

  double side_integral(bool left, double x) const;
  double side_inverse(bool left, double target) const;
};

/// Builds t(f); throws NoEinsteinProfile when u <= 0 somewhere inside.
ProfileCurve profile_t_of_f(const SegmentPolynomial& sp);
ProfileCurve profile_t_of_f(const SegmentPolynomialF& sp);

/// delta from integrating the second-order equation
/// f'' = -(f')^2 P'/(2P) - f + m1 from the series f = t^2/2 + U'(0) t^4/24
/// until f' returns to zero.
double delta_by_ode(const SegmentPolynomialF& sp, const ProfileCurve& curve);

struct TangentialRicci
{
  double ricci = 0;   // r_alpha = alpha(Z^kappa) + q alpha(Z)
  double metric = 0;  // g_alpha = alpha(Z1 - f Z)
  double residual = 0;
};

/// q = f'' + (f')^2 P'(f) / (2 P(f)), the bracket multiplying B([Z, J X], Y).
double ricci_bracket(const SegmentPolynomialF& sp, const ProfilePoint& pt);

/// Per-root Ricci and metric eigenvalues on the root space of R_m^+[root].
TangentialRicci ricci_tangential(const SegmentPolynomialF& sp, const ProfilePoint& pt, std::size_t root);

struct NormalRicci
{
  double closed_form = 0;   // with f''' from the differentiated equation
  double derivative_form = 0;  // -(1/f') dq/dt by central differences
};

/// r(xi, xi) at t in (0, delta), both evaluation routes.
NormalRicci ricci_normal(const SegmentPolynomialF& sp, const ProfileCurve& curve, double t, double h = 1e-5);

struct ProfileRow
{
  double t, f, fp, fpp, res_tan, res_norm;
};

struct ProfileDiagnostics
{
  double max_ode_residual = 0;
  double max_tangential_residual = 0;
  double max_normal_residual = 0;
  double max_route_gap = 0;  // closed-form vs derivative-form r(xi, xi)
  double quadrature_error = 0;
  double fpp_start = 0;
  double fpp_end = 0;
  double f_end = 0;
};

/// Profile sampled on a uniform t-grid of grid_size points over [0, delta].
/// Residual columns are evaluated at interior points; the endpoint rows
/// (singular orbits) carry NaN.
class ProfileSolution
{
public:
  ProfileSolution(SegmentPolynomialF sp, std::shared_ptr<const ProfileCurve> curve, std::vector<ProfileRow> rows,
                  ProfileDiagnostics diag);

  double delta() const { return curve_->delta(); }
  double einstein_constant() const { return 1.0; }
  const std::vector<ProfileRow>& rows() const { return rows_; }
  const ProfileDiagnostics& diagnostics() const { return diag_; }
  const ProfileCurve& curve() const { return *curve_; }
  const SegmentPolynomialF& segment() const { return sp_; }
  Parametrization parametrization() const;

private:
  SegmentPolynomialF sp_;
  std::shared_ptr<const ProfileCurve> curve_;
  std::vector<ProfileRow> rows_;
  ProfileDiagnostics diag_;
};

ProfileSolution profile_solve(const SegmentPolynomial& sp, std::size_t grid_size);
ProfileSolution profile_solve(const SegmentPolynomialF& sp, std::size_t grid_size);

/// Residual maxima of the profile equation and of the tangential and normal Einstein equations over
/// `points` interior samples t_j = j delta/(points+1).
ProfileDiagnostics interior_residuals(const SegmentPolynomialF& sp, const ProfileCurve& curve, std::size_t points);

// ---------------------------------------------------------------------------
// searches

/// Wall distance of Z^kappa inside the center of k: min over R_m^+ of
/// alpha(Z^kappa) / |alpha restricted to z(k)|, compared with the radius
/// 1/tau of the sphere of diameters.
struct SphereHypothesis
{
  bool inside = false;
  Rational min_distance_squared;
  Quadratic min_distance;
  Root closest_wall;
  Rational radius_squared;
};

SphereHypothesis sphere_in_chamber(const FlagData& flag, const InvariantComplexStructure& j,
                                   const Rational& tau_squared = Rational(1));

struct KeCandidate
{
  CartanVectorF z;                       // E(z, z) = 1
  CartanVectorF z_scaled;                // z / tau
  std::optional<CartanVector> exact_z;   // exact scaled direction, when confirmed
  int m1 = 1;
  int m2 = 1;
  double futaki = 0;
  bool exact_zero = false;
  bool admissible = false;
  std::string detail;
};

struct DiameterSearchOptions
{
  Rational tau_squared = 1;
  std::size_t samples = 720;       // per great half-circle
  std::size_t meridians = 24;      // for dim z(k) = 3
  bool force = false;              // search even when the sphere leaves the chamber
  double zero_tol = 1e-10;
  long max_denominator = 64;       // exact confirmation by rational snapping
};

struct DiameterSearch
{
  SphereHypothesis hypothesis;
  bool searched = false;
  std::string note;
  std::vector<KeCandidate> candidates;
};

/// Zeros of the Futaki function over unit Z in z(k) (m1 = m2 = 1), by sign
/// changes on a grid of great half-circles refined by bisection.
DiameterSearch search_diameters(const FlagData& flag, const InvariantComplexStructure& j,
                                const DiameterSearchOptions& opt = {});

struct WalledSearch
{
  std::size_t wall_pairs = 0;
  std::size_t skipped_underdetermined = 0;
  std::vector<KeCandidate> candidates;
};

/// Segments with walls: for W1, W2 subsets of R_m^+ of sizes m1-1, m2-1 solve
/// alpha(Z^kappa + m1 Z) = 0 on W1, alpha(Z^kappa - m2 Z) = 0 on W2 with
/// E(Z, Z) = 1/tau^2, keeping admissible Futaki zeros.
WalledSearch search_walled(const FlagData& flag, const InvariantComplexStructure& j, int m1, int m2,
                           const Rational& tau_squared = Rational(1), std::size_t max_pairs = 200000);

}  // namespace kop

#endif
