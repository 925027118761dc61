#ifndef KOP_MODEL_HPP
#define KOP_MODEL_HPP

#include "kop/flag.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kop
{

/// Root data of an ordinary projectable cohomogeneity-one model: the flag
/// G/K, its complex structure and the unit direction Z of the center of k
/// along which the segment of the model runs.
struct KopBase
{
  FlagData flag;
  InvariantComplexStructure j;
  CartanVector direction;  // as supplied, rational
  CartanVector z;          // E(z, z) = 1, same orientation as direction
  CartanVector z_kappa;    // Ricci invariant of (G/K, J)
};

/// Normalizes a nonzero rational direction in the center of k to E(Z, Z) = 1,
/// exactly in Q(sqrt(E(d, d))). Throws std::invalid_argument for the zero
/// vector, a vector outside the center, or an invalid J.
KopBase make_base(FlagData flag, InvariantComplexStructure j, const CartanVector& direction);

/// Z scaled to E = 1/tau^2, i.e. Z/tau. tau^2 must be a positive rational;
/// the result lives in Q(sqrt(tau^2 E(d, d))).
CartanVector scaled_direction(const KopBase& base, const Rational& tau_squared);

/// Degree m = |walls|/2 + 1, the complex codimension of the singular orbit.
int degree_from_walls(std::size_t wall_count);

struct Check
{
  bool ok = true;
  std::string detail;
};

/// The centralizer H of an endpoint satisfies H/K = CP^m with m = |walls|/2:
/// in R_K cup walls exactly one simple component meets the walls, it has type
/// A_m, and R_K cuts out of it the Levi obtained by deleting a terminal node.
Check projective_fiber_check(const FlagData& flag, const InvariantComplexStructure& j, const std::vector<Root>& walls);

/// The projection G/K -> G/H is holomorphic: alpha + beta in R with
/// alpha in R_m^+ \ W, beta in R_K cup W forces alpha + beta in R_m^+ \ W.
Check holomorphic_projection_check(const FlagData& flag, const InvariantComplexStructure& j,
                                   const std::vector<Root>& walls);

struct EndpointReport
{
  std::vector<Root> walls;  // both signs
  int degree = 1;
  Check fiber;
  Check projection;
};

template <class S>
struct AdmissibleSegmentT
{
  CartanVec<S> z1;
  CartanVec<S> z2;
  EndpointReport end1;
  EndpointReport end2;
  Check chamber;
  bool degrees_ok = false;
  bool projection_ok = false;
  bool overall_ok = false;

  int m1() const { return end1.degree; }
  int m2() const { return end2.degree; }
};

using AdmissibleSegment = AdmissibleSegmentT<Quadratic>;
using AdmissibleSegmentF = AdmissibleSegmentT<double>;

/// Verdicts for the segment [z1, z2] (both in the center of k, z1 - z2
/// parallel to Z). Float input compares against tol.
AdmissibleSegment analyze_endpoints(const FlagData& flag, const InvariantComplexStructure& j, const CartanVector& z1,
                                    const CartanVector& z2);
AdmissibleSegmentF analyze_endpoints(const FlagData& flag, const InvariantComplexStructure& j, const CartanVectorF& z1,
                                     const CartanVectorF& z2, double tol);

/// Segment from Z1 of length C along -Z: Z2 = Z1 - C Z.
AdmissibleSegment analyze_segment(const KopBase& base, const CartanVector& z1, const Quadratic& length);

/// A profile f on [0, delta], either closed form or sampled.
struct Parametrization
{
  // closed form
  std::function<double(double)> f;
  std::function<double(double)> fpp;
  // sampled, uniform in t, t.front() == 0 and t.back() == delta
  std::vector<double> t;
  std::vector<double> values;
  std::vector<double> second_derivative;  // optional

  bool is_sampled() const { return !t.empty(); }
};

struct ParametrizationCheck
{
  bool boundary_ok = false;
  bool monotone_ok = false;
  bool even_ok = false;
  bool curvature_ok = false;
  double fpp_start = 0;
  double fpp_end = 0;
  std::string detail;

  bool ok() const { return boundary_ok && monotone_ok && even_ok && curvature_ok; }
};

/// f(0) = 0, f(delta) = C, f increasing, f even about 0 and delta,
/// f''(0) = 1 = -f''(delta). Sampled data needs at least 16 points.
ParametrizationCheck check_parametrization(const Parametrization& p, double delta, double length,
                                           double tol = 1e-4);

}  // namespace kop

#endif
