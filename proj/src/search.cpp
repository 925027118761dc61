#include "kop/einstein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kop
{

namespace
{

std::vector<int> free_indices(const FlagData& flag)
{
  std::vector<int> idx;
  for (int i = 0; i < flag.roots().rank(); ++i)
    if (!flag.is_painted(i))
      idx.push_back(i);
  return idx;
}

// Gram matrix of E restricted to the center basis e_j, j unpainted.
std::vector<std::vector<Rational>> center_gram(const FlagData& flag, const std::vector<int>& idx)
{
  const auto& m = flag.roots().gram();
  std::vector<std::vector<Rational>> g(idx.size(), std::vector<Rational>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      g[a][b] = Rational(m[static_cast<std::size_t>(idx[a])][static_cast<std::size_t>(idx[b])]);
  return g;
}

CartanVector embed(const FlagData& flag, const std::vector<int>& idx, const std::vector<Quadratic>& c)
{
  CartanVector h = CartanVector::zero(static_cast<std::size_t>(flag.roots().rank()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    h.values[static_cast<std::size_t>(idx[a])] = c[a];
  return h;
}

CartanVectorF embed(const FlagData& flag, const std::vector<int>& idx, const std::vector<double>& c)
{
  CartanVectorF h = CartanVectorF::zero(static_cast<std::size_t>(flag.roots().rank()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    h.values[static_cast<std::size_t>(idx[a])] = c[a];
  return h;
}

// Best rational approximation with bounded denominator (continued fractions).
Rational approximate(double x, long max_den)
{
  const bool neg = x < 0;
  x = std::abs(x);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it)
  {
    const double a = std::floor(r);
    if (a > 1e12)
      break;
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den)
      break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - a;
    if (frac < 1e-12)
      break;
    r = 1.0 / frac;
  }
  if (q1 == 0)
    return Rational(0);
  Rational q(p1, q1);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

SphereHypothesis sphere_in_chamber(const FlagData& flag, const InvariantComplexStructure& j,
                                   const Rational& tau_squared)
{
  if (tau_squared <= 0)
    throw std::invalid_argument("tau^2 must be positive");
  const auto idx = free_indices(flag);
  if (idx.empty())
    throw std::invalid_argument("the center of k is trivial");
  const auto ginv = invert(center_gram(flag, idx));
  const CartanVector zk = ricci_invariant(flag, j);

  SphereHypothesis h;
  h.radius_squared = Rational(1) / tau_squared;
  bool first = true;
  for (const auto& a : j.positive())
  {
    // |alpha on z(k)|^2 = a^T G^{-1} a with a_i = alpha(e_i)
    Rational norm(0);
    for (std::size_t x = 0; x < idx.size(); ++x)
      for (std::size_t y = 0; y < idx.size(); ++y)
        norm += Rational(a.coords[static_cast<std::size_t>(idx[x])]) * ginv[x][y] *
                Rational(a.coords[static_cast<std::size_t>(idx[y])]);
    const Rational val = evaluate(a, zk).as_rational();
    const Rational d2 = val * val / norm;
    if (first || d2 < h.min_distance_squared)
    {
      h.min_distance_squared = d2;
      h.closest_wall = a;
      first = false;
    }
  }
  h.min_distance = Quadratic::sqrt_of(h.min_distance_squared);
  h.inside = h.min_distance_squared > h.radius_squared;
  return h;
}

namespace
{

struct SphereFrame
{
  std::vector<int> idx;
  std::vector<std::vector<double>> inv_lt;  // c = L^{-T} y
  double tau = 1;

  std::vector<double> coords(const std::vector<double>& y) const
  {
    std::vector<double> c(idx.size(), 0.0);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        c[a] += inv_lt[a][b] * y[b];
    return c;
  }
};

SphereFrame make_frame(const FlagData& flag, const Rational& tau_squared)
{
  SphereFrame fr;
  fr.idx = free_indices(flag);
  fr.tau = std::sqrt(tau_squared.get_d());
  const std::size_t d = fr.idx.size();
  const auto gq = center_gram(flag, fr.idx);
  std::vector<std::vector<double>> l(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k <= i; ++k)
    {
      double s = gq[i][k].get_d();
      for (std::size_t p = 0; p < k; ++p)
        s -= l[i][p] * l[k][p];
      l[i][k] = i == k ? std::sqrt(s) : s / l[k][k];
    }
  // inverse of lower-triangular L, then transpose
  std::vector<std::vector<double>> li(d, std::vector<double>(d, 0.0));
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t i = c; i < d; ++i)
    {
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t p = c; p < i; ++p)
        s -= l[i][p] * li[p][c];
      li[i][c] = s / l[i][i];
    }
  fr.inv_lt.assign(d, std::vector<double>(d, 0.0));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      fr.inv_lt[a][b] = li[b][a];
  return fr;
}

// Fills a candidate from a unit direction y, confirming exactly when the
// direction snaps to a rational one.
KeCandidate make_candidate(const FlagData& flag, const InvariantComplexStructure& j, const SphereFrame& fr,
                           const std::vector<double>& y, const DiameterSearchOptions& opt)
{
  KeCandidate c;
  const auto coords = fr.coords(y);
  c.z = embed(flag, fr.idx, coords);
  c.z_scaled = c.z;
  c.z_scaled *= 1.0 / fr.tau;
  const auto fut = futaki(flag, j, c.z_scaled, 1, 1, opt.zero_tol);
  c.futaki = fut.value;

  double big = 0;
  for (double v : coords)
    big = std::max(big, std::abs(v));
  std::vector<Rational> snapped(coords.size());
  double snap_gap = 0;
  for (std::size_t a = 0; a < coords.size(); ++a)
  {
    snapped[a] = approximate(coords[a] / big, opt.max_denominator);
    snap_gap = std::max(snap_gap, std::abs(snapped[a].get_d() - coords[a] / big));
  }
  if (snap_gap < 1e-7)
  {
    std::vector<Quadratic> qs(snapped.begin(), snapped.end());
    try
    {
      KopBase base = make_base(flag, j, embed(flag, fr.idx, qs));
      const CartanVector zs = scaled_direction(base, opt.tau_squared);
      const auto exact = futaki(flag, j, zs, 1, 1);
      if (exact.vanishes)
      {
        c.exact_zero = true;
        c.exact_z = zs;
        c.futaki = 0.0;
        auto [z1, z2] = ke_endpoints(base.z_kappa, zs, 1, 1);
        const auto seg = analyze_endpoints(flag, j, z1, z2);
        c.admissible = seg.overall_ok && seg.m1() == 1 && seg.m2() == 1;
        c.detail = c.admissible ? "exact Futaki zero, admissible"
                                : "exact Futaki zero, not admissible: " +
                                    (seg.chamber.ok ? std::string("endpoint on a wall (degree ") +
                                                        std::to_string(seg.m1()) + "," + std::to_string(seg.m2()) + ")"
                                                    : seg.chamber.detail);
        return c;
      }
    }
    catch (const std::domain_error&)
    {
    }
  }
  const CartanVectorF zk = to_float(ricci_invariant(flag, j));
  auto [z1, z2] = ke_endpoints(zk, c.z_scaled, 1, 1);
  const auto seg = analyze_endpoints(flag, j, z1, z2, 1e-9);
  c.admissible = seg.overall_ok && seg.m1() == 1 && seg.m2() == 1;
  c.detail = std::string("numeric zero") + (c.admissible ? ", admissible" : ", not admissible");
  if (!seg.chamber.ok)
    c.detail += ": " + seg.chamber.detail;
  return c;
}

}  // namespace

DiameterSearch search_diameters(const FlagData& flag, const InvariantComplexStructure& j,
                                const DiameterSearchOptions& opt)
{
  DiameterSearch out;
  out.hypothesis = sphere_in_chamber(flag, j, opt.tau_squared);
  if (!out.hypothesis.inside && !opt.force)
  {
    out.note = "sphere of diameters leaves the positive chamber (wall distance " + out.hypothesis.min_distance.str() +
               " at " + out.hypothesis.closest_wall.str() + "); no search";
    return out;
  }
  const std::size_t d = flag.center_dimension();
  if (d > 3)
  {
    out.note = "center of k has dimension " + std::to_string(d) + " > 3; diameter search not supported";
    return out;
  }
  out.searched = true;
  const SphereFrame fr = make_frame(flag, opt.tau_squared);
  auto phi = [&](const std::vector<double>& y) {
    CartanVectorF z = embed(flag, fr.idx, fr.coords(y));
    z *= 1.0 / fr.tau;
    return futaki(flag, j, z, 1, 1, opt.zero_tol).value;
  };

  std::vector<std::vector<double>> zeros;
  // sign changes of phi along a great half-circle y(theta), theta in [0, pi]
  auto scan = [&](auto circle) {
    const std::size_t n = opt.samples;
    double prev_theta = 0;
    double prev = phi(circle(0.0));
    if (std::abs(prev) < opt.zero_tol)
      zeros.push_back(circle(0.0));
    for (std::size_t i = 1; i <= n; ++i)
    {
      const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      const double cur = phi(circle(theta));
      if (std::abs(cur) < opt.zero_tol)
      {
        if (i < n)
          zeros.push_back(circle(theta));
      }
      else if (std::abs(prev) >= opt.zero_tol && (prev < 0) != (cur < 0))
      {
        double lo = prev_theta, hi = theta, flo = prev;
        for (int it = 0; it < 100 && hi - lo > 1e-15; ++it)
        {
          const double mid = 0.5 * (lo + hi);
          const double fm = phi(circle(mid));
          if ((fm < 0) == (flo < 0))
          {
            lo = mid;
            flo = fm;
          }
          else
            hi = mid;
        }
        zeros.push_back(circle(0.5 * (lo + hi)));
      }
      prev = cur;
      prev_theta = theta;
    }
  };

  if (d == 1)
  {
    if (std::abs(phi({1.0})) < opt.zero_tol)
      zeros.push_back({1.0});
  }
  else if (d == 2)
    scan([](double th) { return std::vector<double>{std::cos(th), std::sin(th)}; });
  else
  {
    for (std::size_t k = 0; k < opt.meridians; ++k)
    {
      const double ph = std::numbers::pi * static_cast<double>(k) / static_cast<double>(opt.meridians);
      scan([ph](double th) {
        return std::vector<double>{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      });
    }
  }

  for (const auto& y : zeros)
  {
    KeCandidate c = make_candidate(flag, j, fr, y, opt);
    // diameters are unordered: Z and -Z give the same segment
    bool dup = false;
    for (const auto& o : out.candidates)
    {
      double same = 0, opp = 0;
      for (std::size_t i = 0; i < c.z.size(); ++i)
      {
        same = std::max(same, std::abs(c.z.values[i] - o.z.values[i]));
        opp = std::max(opp, std::abs(c.z.values[i] + o.z.values[i]));
      }
      if (same < 1e-7 || opp < 1e-7)
        dup = true;
    }
    if (!dup)
      out.candidates.push_back(std::move(c));
  }
  return out;
}

namespace
{

// Reduced row echelon solve of A c = b over Q: particular solution and a
// basis of the null space; nullopt when inconsistent.
struct AffineSolution
{
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> directions;
};

std::optional<AffineSolution> solve_affine(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::size_t n)
{
  const std::size_t rows = a.size();
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows; ++c)
  {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0)
      ++p;
    if (p == rows)
      continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    const Rational pv = a[r][c];
    for (auto& x : a[r])
      x /= pv;
    b[r] /= pv;
    for (std::size_t i = 0; i < rows; ++i)
    {
      if (i == r || a[i][c] == 0)
        continue;
      const Rational f = a[i][c];
      for (std::size_t k = 0; k < n; ++k)
        a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0)
      return std::nullopt;
  AffineSolution s;
  s.particular.assign(n, Rational(0));
  for (std::size_t i = 0; i < r; ++i)
    s.particular[static_cast<std::size_t>(pivot_col[i])] = b[i];
  for (std::size_t c = 0; c < n; ++c)
  {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end())
      continue;
    std::vector<Rational> dir(n, Rational(0));
    dir[c] = 1;
    for (std::size_t i = 0; i < r; ++i)
      dir[static_cast<std::size_t>(pivot_col[i])] = -a[i][c];
    s.directions.push_back(std::move(dir));
  }
  return s;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn)
{
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i)
    pick[i] = i;
  if (k > n)
    return;
  while (true)
  {
    fn(pick);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1))
      --i;
    if (i == 0)
      return;
    ++pick[i - 1];
    for (std::size_t q = i; q < k; ++q)
      pick[q] = pick[q - 1] + 1;
  }
}

double binomial(std::size_t n, std::size_t k)
{
  if (k > n)
    return 0;
  double r = 1;
  for (std::size_t i = 0; i < k; ++i)
    r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

}  // namespace

WalledSearch search_walled(const FlagData& flag, const InvariantComplexStructure& j, int m1, int m2,
                           const Rational& tau_squared, std::size_t max_pairs)
{
  if (m1 < 1 || m2 < 1 || m1 + m2 < 3)
    throw std::invalid_argument("walled search needs m1, m2 >= 1 and m1 + m2 >= 3");
  if (tau_squared <= 0)
    throw std::invalid_argument("tau^2 must be positive");
  WalledSearch out;
  const auto& pos = j.positive();
  const std::size_t n = pos.size();
  const std::size_t k1 = static_cast<std::size_t>(m1 - 1), k2 = static_cast<std::size_t>(m2 - 1);
  if (k1 > n || k2 > n)
    return out;
  if (binomial(n, k1) * binomial(n, k2) > static_cast<double>(max_pairs))
    throw std::invalid_argument("too many wall-set pairs to enumerate (" +
                                std::to_string(binomial(n, k1) * binomial(n, k2)) + ")");

  const auto idx = free_indices(flag);
  const std::size_t d = idx.size();
  const auto g = center_gram(flag, idx);
  const CartanVector zk = ricci_invariant(flag, j);
  const Rational target = Rational(1) / tau_squared;

  auto form = [&](const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s(0);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        s += x[a] * g[a][b] * y[b];
    return s;
  };
  auto consider = [&](const CartanVector& zs) {
    for (const auto& c : out.candidates)
      if (c.exact_z && *c.exact_z == zs)
        return;
    auto [z1, z2] = ke_endpoints(zk, zs, m1, m2);
    const auto seg = analyze_endpoints(flag, j, z1, z2);
    if (!seg.overall_ok || seg.m1() != m1 || seg.m2() != m2)
      return;
    const auto fut = futaki(flag, j, zs, m1, m2);
    if (!fut.vanishes)
      return;
    KeCandidate c;
    c.m1 = m1;
    c.m2 = m2;
    c.exact_z = zs;
    c.z_scaled = to_float(zs);
    c.z = c.z_scaled;
    c.z *= std::sqrt(tau_squared.get_d());
    c.exact_zero = true;
    c.admissible = true;
    c.detail = "exact Futaki zero, admissible";
    out.candidates.push_back(std::move(c));
  };

  for_each_subset(n, k1, [&](const std::vector<std::size_t>& w1) {
    for_each_subset(n, k2, [&](const std::vector<std::size_t>& w2) {
      ++out.wall_pairs;
      for (auto a : w1)
        if (std::find(w2.begin(), w2.end(), a) != w2.end())
          return;  // alpha(Z^kappa) > 0 rules out a root vanishing at both ends
      std::vector<std::vector<Rational>> rows;
      std::vector<Rational> rhs;
      auto add_row = [&](const Root& a, long scale, const Rational& value) {
        std::vector<Rational> row(d);
        for (std::size_t x = 0; x < d; ++x)
          row[x] = Rational(scale * a.coords[static_cast<std::size_t>(idx[x])]);
        rows.push_back(std::move(row));
        rhs.push_back(value);
      };
      for (auto a : w1)
        add_row(pos[a], m1, -evaluate(pos[a], zk).as_rational());
      for (auto a : w2)
        add_row(pos[a], m2, evaluate(pos[a], zk).as_rational());
      auto sol = solve_affine(rows, rhs, d);
      if (!sol)
        return;
      if (sol->directions.empty())
      {
        if (form(sol->particular, sol->particular) == target)
        {
          std::vector<Quadratic> q(sol->particular.begin(), sol->particular.end());
          consider(embed(flag, idx, q));
        }
        return;
      }
      if (sol->directions.size() > 1)
      {
        ++out.skipped_underdetermined;
        return;
      }
      // E(p + s q) = target: quadratic in s
      const auto& p = sol->particular;
      const auto& q = sol->directions.front();
      const Rational qq = form(q, q), pq = form(p, q), pp = form(p, p);
      const Rational disc = pq * pq - qq * (pp - target);
      if (disc < 0)
        return;
      const Quadratic root = Quadratic::sqrt_of(disc);
      for (int sgn : {1, -1})
      {
        const Quadratic s = (Quadratic(-pq) + Quadratic(static_cast<long>(sgn)) * root) / Quadratic(qq);
        std::vector<Quadratic> c(d);
        for (std::size_t x = 0; x < d; ++x)
          c[x] = Quadratic(p[x]) + s * Quadratic(q[x]);
        consider(embed(flag, idx, c));
        if (disc == 0)
          break;
      }
    });
  });
  return out;
}

}  // namespace kop
