#include "kop/job.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace kop
{

namespace
{

// Default thresholds for the self-checks attached to solve and verify.
constexpr double kEndpointTol = 1e-8;
constexpr double kCurvatureTol = 1e-4;
constexpr double kOdeTol = 1e-8;
constexpr double kFutakiZeroTol = 1e-10;
constexpr double kFloatWallTol = 1e-10;

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Rational json_rational(const Json& v, const std::string& what)
{
  if (v.is_number_integer())
    return Rational(v.get<long>());
  if (v.is_string())
    return parse_rational(v.get<std::string>());
  if (v.is_number_float())
    return parse_rational(v.dump());
  throw std::invalid_argument(what + ": expected an integer, a decimal or a \"p/q\" string");
}

int json_int(const Json& v, const std::string& what)
{
  if (!v.is_number_integer())
    throw std::invalid_argument(what + ": expected an integer");
  return v.get<int>();
}

std::vector<int> json_int_list(const Json& v, const std::string& what)
{
  if (!v.is_array())
    throw std::invalid_argument(what + ": expected a list of integers");
  std::vector<int> out;
  for (const auto& e : v)
    out.push_back(json_int(e, what));
  return out;
}

LieAlgebraSpec json_group(const Json& v)
{
  if (v.is_string())
    return LieAlgebraSpec::parse(v.get<std::string>());
  if (!v.is_array() || v.empty())
    throw std::invalid_argument("group: expected a string such as \"A1xA1\" or a non-empty list");
  std::string text;
  for (const auto& c : v)
  {
    std::string part;
    if (c.is_string())
      part = c.get<std::string>();
    else if (c.is_object() && c.contains("family") && c.contains("rank"))
      part = c.at("family").get<std::string>() + std::to_string(json_int(c.at("rank"), "group.rank"));
    else
      throw std::invalid_argument("group: each entry must be a string or {family, rank}");
    text += (text.empty() ? "" : "x") + part;
  }
  return LieAlgebraSpec::parse(text);
}

Json rational_matrix(const std::vector<std::vector<Rational>>& m)
{
  Json out = Json::array();
  for (const auto& row : m)
  {
    Json r = Json::array();
    for (const auto& x : row)
      r.push_back(to_string(x));
    out.push_back(r);
  }
  return out;
}

Json vector_json(const CartanVector& h)
{
  Json exact = Json::array(), approx = Json::array();
  for (const auto& x : h.values)
  {
    exact.push_back(x.str());
    approx.push_back(x.to_double());
  }
  return Json{{"exact", exact}, {"float", approx}};
}

Json vector_json(const CartanVectorF& h)
{
  Json approx = Json::array();
  for (double x : h.values)
    approx.push_back(x);
  return Json{{"float", approx}};
}

Json roots_json(const std::vector<Root>& roots)
{
  Json out = Json::array();
  for (const auto& r : roots)
    out.push_back(r.str());
  return out;
}

// A float together with the tolerance it is judged against.
Json measured(double value, double tol, bool pass)
{
  Json j;
  if (std::isfinite(value))
    j["value"] = value;
  else
    j["value"] = nullptr;
  j["tol"] = tol;
  j["pass"] = pass;
  return j;
}

Json below(double value, double tol)
{
  return measured(value, tol, std::isfinite(value) && std::abs(value) < tol);
}

struct Context
{
  std::shared_ptr<const RootSystem> rs;
  FlagData flag;
  InvariantComplexStructure j;
};

Context make_context(const JobSpec& job)
{
  auto rs = std::make_shared<const RootSystem>(build_root_system(job.group));
  FlagData flag = build_flag(rs, job.painted);
  InvariantComplexStructure j;
  if (job.complex_structure)
  {
    j = complex_structure_from_signs(flag, *job.complex_structure);
    const auto v = validate_complex_structure(flag, j);
    if (!v.ok)
      throw std::invalid_argument("complex_structure: " + v.detail);
  }
  else
    j = default_complex_structure(flag);
  return {rs, std::move(flag), std::move(j)};
}

Json flag_config(const JobSpec& job, const Context& ctx)
{
  Json c;
  c["group"] = job.group.str();
  c["rank"] = ctx.rs->rank();
  c["painted"] = job.painted;
  c["complex_structure"] = job.complex_structure ? "explicit" : "default";
  c["r_m_positive"] = roots_json(ctx.j.positive());
  c["z_kappa"] = vector_json(ricci_invariant(ctx.flag, ctx.j));
  c["tau"] = job.tau_text;
  c["tau_squared"] = to_string(job.tau_squared);
  c["arithmetic"] = job.exact ? "exact" : "float";
  return c;
}

struct Direction
{
  KopBase base;
  CartanVector scaled;
  int m1 = 1;
  int m2 = 1;
};

Direction make_direction(const JobSpec& job, const Context& ctx, Json& config)
{
  if (!job.z)
    throw std::invalid_argument("z: mode " + to_string(job.mode) + " needs an explicit direction");
  KopBase base = make_base(ctx.flag, ctx.j, from_rationals(*job.z));
  Direction d{base, scaled_direction(base, job.tau_squared), job.m1.value_or(1), job.m2.value_or(1)};
  config["direction"] = vector_json(base.direction);
  config["z_normalized"] = vector_json(base.z);
  config["z_scaled"] = vector_json(d.scaled);
  config["m1"] = d.m1;
  config["m2"] = d.m2;
  config["degrees_source"] = (job.m1 || job.m2) ? "declared" : "default (1, 1)";
  return d;
}

Json endpoint_json(const EndpointReport& e)
{
  Json j;
  j["walls"] = roots_json(e.walls);
  j["degree"] = e.degree;
  j["projective_fiber"] = Json{{"ok", e.fiber.ok}, {"detail", e.fiber.detail}};
  j["holomorphic_projection"] = Json{{"ok", e.projection.ok}, {"detail", e.projection.detail}};
  return j;
}

template <class S>
Json segment_json(const AdmissibleSegmentT<S>& seg, int m1, int m2, bool& ok_out)
{
  Json j;
  j["z1"] = vector_json(seg.z1);
  j["z2"] = vector_json(seg.z2);
  j["end1"] = endpoint_json(seg.end1);
  j["end2"] = endpoint_json(seg.end2);
  j["chamber"] = Json{{"ok", seg.chamber.ok}, {"detail", seg.chamber.detail}};
  std::string mismatch;
  if (seg.m1() != m1)
    mismatch += "degree mismatch at Z1: walls give m=" + std::to_string(seg.m1()) + " but declared m1=" +
                std::to_string(m1) + "; ";
  if (seg.m2() != m2)
    mismatch += "degree mismatch at Z2: walls give m=" + std::to_string(seg.m2()) + " but declared m2=" +
                std::to_string(m2) + "; ";
  const bool declared_ok = mismatch.empty();
  j["declared_degrees"] = Json{{"ok", declared_ok}, {"detail", mismatch}};
  j["degrees_ok"] = seg.degrees_ok;
  j["projection_ok"] = seg.projection_ok;
  ok_out = seg.overall_ok && declared_ok;
  j["overall_ok"] = ok_out;
  return j;
}

Json futaki_json(const FutakiReport& f, bool exact)
{
  Json j;
  if (f.exact)
    j["exact"] = f.exact->str();
  j["value"] = f.value;
  j["vanishes"] = f.vanishes;
  if (!exact)
  {
    j["tol"] = std::max(kFutakiZeroTol, f.error_bound);
    j["error_bound"] = f.error_bound;
  }
  else
    j["tol"] = 0.0;
  return j;
}

Json diagnostics_json(const ProfileDiagnostics& d, double length, double tol)
{
  Json j;
  j["f_end_error"] = below(d.f_end - length, kEndpointTol);
  j["fpp_start_error"] = below(d.fpp_start - 1.0, kCurvatureTol);
  j["fpp_end_error"] = below(d.fpp_end + 1.0, kCurvatureTol);
  j["max_ode_residual"] = below(d.max_ode_residual, kOdeTol);
  j["max_tangential_residual"] = below(d.max_tangential_residual, tol);
  j["max_normal_residual"] = below(d.max_normal_residual, tol);
  j["max_route_gap"] = below(d.max_route_gap, tol);
  j["quadrature_error"] = d.quadrature_error;
  return j;
}

bool diagnostics_pass(const Json& d)
{
  for (const auto& [k, v] : d.items())
    if (v.is_object() && v.contains("pass") && !v["pass"].get<bool>())
      return false;
  return true;
}

Json candidate_json(const KeCandidate& c)
{
  Json j;
  j["z"] = vector_json(c.z);
  j["z_scaled"] = vector_json(c.z_scaled);
  if (c.exact_z)
    j["z_scaled_exact"] = vector_json(*c.exact_z);
  j["m1"] = c.m1;
  j["m2"] = c.m2;
  j["futaki"] = measured(c.futaki, kFutakiZeroTol, c.exact_zero || std::abs(c.futaki) < kFutakiZeroTol);
  j["futaki_zero"] = c.exact_zero ? "exact" : "numeric";
  j["admissible"] = c.admissible;
  j["detail"] = c.detail;
  return j;
}

// Outcome of the solve pipeline, shared by solve and verify.
struct SolveOutcome
{
  Json body;
  bool ke = false;
  std::optional<ProfileSolution> solution;
  std::optional<SegmentPolynomialF> segment_float;
};

SolveOutcome solve_pipeline(const JobSpec& job, const Context& ctx, const Direction& d)
{
  SolveOutcome out;
  auto no_ke = [&](const std::string& reason) {
    out.body["verdict"] = "no-KE";
    out.body["reason"] = reason;
  };

  bool seg_ok = false;
  if (job.exact)
  {
    const auto [z1, z2] = ke_endpoints(d.base.z_kappa, d.scaled, d.m1, d.m2);
    out.body["segment"] = segment_json(analyze_endpoints(ctx.flag, ctx.j, z1, z2), d.m1, d.m2, seg_ok);
    const auto fut = futaki(ctx.flag, ctx.j, d.scaled, d.m1, d.m2);
    out.body["futaki"] = futaki_json(fut, true);
    if (!seg_ok)
      return no_ke("segment is not admissible"), std::move(out);
    if (!fut.vanishes)
      return no_ke("Futaki invariant does not vanish"), std::move(out);
    try
    {
      const auto sp = build_segment_polynomial(ctx.flag, ctx.j, d.scaled, d.m1, d.m2);
      out.segment_float = to_float(sp);
      out.solution = profile_solve(sp, job.grid);
    }
    catch (const DegreeMismatch& e)
    {
      return no_ke(e.what()), std::move(out);
    }
    catch (const NoEinsteinProfile& e)
    {
      return no_ke(e.what()), std::move(out);
    }
  }
  else
  {
    const CartanVectorF zf = to_float(d.scaled);
    const auto [z1, z2] = ke_endpoints(to_float(d.base.z_kappa), zf, d.m1, d.m2);
    out.body["segment"] =
        segment_json(analyze_endpoints(ctx.flag, ctx.j, z1, z2, kFloatWallTol), d.m1, d.m2, seg_ok);
    const auto fut = futaki(ctx.flag, ctx.j, zf, d.m1, d.m2, kFutakiZeroTol);
    out.body["futaki"] = futaki_json(fut, false);
    if (!seg_ok)
      return no_ke("segment is not admissible"), std::move(out);
    if (!fut.vanishes)
      return no_ke("Futaki invariant does not vanish"), std::move(out);
    try
    {
      out.segment_float = build_segment_polynomial(ctx.flag, ctx.j, zf, d.m1, d.m2, kFloatWallTol);
      out.solution = profile_solve(*out.segment_float, job.grid);
    }
    catch (const DegreeMismatch& e)
    {
      return no_ke(e.what()), std::move(out);
    }
    catch (const NoEinsteinProfile& e)
    {
      return no_ke(e.what()), std::move(out);
    }
  }
  out.ke = true;
  out.body["verdict"] = "KE";
  out.body["delta"] = out.solution->delta();
  out.body["einstein_constant"] = out.solution->einstein_constant();
  out.body["grid"] = job.grid;
  out.body["diagnostics"] = diagnostics_json(out.solution->diagnostics(), d.m1 + d.m2, job.tol);
  return out;
}

Json roots_report(const Context& ctx)
{
  const auto& rs = *ctx.rs;
  Json r;
  r["rank"] = rs.rank();
  r["root_count"] = rs.roots().size();
  Json comps = Json::array();
  for (const auto& c : rs.spec().components)
  {
    LieAlgebraSpec one{{c}};
    comps.push_back(Json{{"type", one.str()},
                         {"expected_root_count", expected_root_count(c)},
                         {"cartan_matrix", cartan_matrix(c)}});
  }
  r["components"] = comps;
  r["positive_roots"] = roots_json(rs.positive_roots());
  Json gram = Json::array();
  for (const auto& row : rs.gram())
    gram.push_back(row);
  r["gram"] = gram;
  r["gram_inverse"] = rational_matrix(rs.gram_inverse());
  return r;
}

Json flag_report(const JobSpec& job, const Context& ctx)
{
  Json r;
  r["r_k_count"] = ctx.flag.r_k().size();
  r["r_m_count"] = ctx.flag.r_m().size();
  r["complex_dimension"] = ctx.flag.r_m().size() / 2;
  r["center_dimension"] = ctx.flag.center_dimension();
  Json basis = Json::array();
  for (const auto& b : ctx.flag.center_basis())
    basis.push_back(vector_json(b)["exact"]);
  r["center_basis"] = basis;
  const auto v = validate_complex_structure(ctx.flag, ctx.j);
  r["complex_structure_valid"] = Json{{"ok", v.ok}, {"detail", v.detail}};
  const auto zk = ricci_invariant(ctx.flag, ctx.j);
  const auto pos = chamber_position(ctx.flag, ctx.j, zk);
  r["z_kappa_position"] = Json{{"location", to_string(pos.location)}, {"walls", roots_json(pos.walls)}};
  if (ctx.flag.center_dimension() > 0)
  {
    const auto h = sphere_in_chamber(ctx.flag, ctx.j, job.tau_squared);
    r["sphere_in_chamber"] = Json{{"inside", h.inside},
                                  {"min_distance_squared", to_string(h.min_distance_squared)},
                                  {"min_distance", h.min_distance.str()},
                                  {"min_distance_float", h.min_distance.to_double()},
                                  {"closest_wall", h.closest_wall.str()},
                                  {"radius_squared", to_string(h.radius_squared)}};
  }
  return r;
}

Json verify_report(const JobSpec& job, SolveOutcome& s, bool& consistent)
{
  Json v;
  consistent = true;
  if (!s.ke)
    return v;
  const auto& sol = *s.solution;
  const double length = static_cast<double>(sol.segment().m1 + sol.segment().m2);
  const auto pc = check_parametrization(sol.parametrization(), sol.delta(), length, kCurvatureTol);
  v["parametrization"] = Json{{"boundary_ok", pc.boundary_ok},
                              {"monotone_ok", pc.monotone_ok},
                              {"even_ok", pc.even_ok},
                              {"curvature_ok", pc.curvature_ok},
                              {"fpp_start", measured(pc.fpp_start, kCurvatureTol, pc.curvature_ok)},
                              {"fpp_end", measured(pc.fpp_end, kCurvatureTol, pc.curvature_ok)},
                              {"detail", pc.detail}};
  // independent curvature route: f is even at each endpoint, so 2 (f(h) - f(0)) / h^2 -> f''(0)
  const double h = 1e-3 * sol.delta();
  const double fd_start = 2.0 * sol.curve().f_of_t(h) / (h * h);
  const double fd_end = 2.0 * (sol.curve().f_of_t(sol.delta() - h) - length) / (h * h);
  v["fpp_start_difference"] = below(fd_start - 1.0, kCurvatureTol);
  v["fpp_end_difference"] = below(fd_end + 1.0, kCurvatureTol);
  const double delta_ode = delta_by_ode(sol.segment(), sol.curve());
  v["delta_quadrature"] = sol.delta();
  v["delta_ode"] = delta_ode;
  v["delta_gap"] = below(delta_ode - sol.delta(), job.tol);
  const auto interior = interior_residuals(sol.segment(), sol.curve(), 512);
  v["interior_512"] = diagnostics_json(interior, length, job.tol);
  const bool ok = pc.ok() && v["delta_gap"]["pass"].get<bool>() && v["fpp_start_difference"]["pass"].get<bool>() &&
                  v["fpp_end_difference"]["pass"].get<bool>() && diagnostics_pass(v["interior_512"]) &&
                  diagnostics_pass(s.body["diagnostics"]);
  v["verified"] = ok;
  consistent = ok;
  return v;
}

Json search_report(const JobSpec& job, const Context& ctx)
{
  Json r;
  const int m1 = job.m1.value_or(1), m2 = job.m2.value_or(1);
  if (m1 == 1 && m2 == 1)
  {
    DiameterSearchOptions opt;
    opt.tau_squared = job.tau_squared;
    opt.force = job.force;
    const auto s = search_diameters(ctx.flag, ctx.j, opt);
    r["kind"] = "diameters";
    r["sphere_in_chamber"] = Json{{"inside", s.hypothesis.inside},
                                  {"min_distance", s.hypothesis.min_distance.str()},
                                  {"min_distance_float", s.hypothesis.min_distance.to_double()},
                                  {"radius_squared", to_string(s.hypothesis.radius_squared)}};
    r["searched"] = s.searched;
    r["note"] = s.note;
    Json c = Json::array();
    for (const auto& k : s.candidates)
      c.push_back(candidate_json(k));
    r["candidates"] = c;
  }
  else
  {
    const auto s = search_walled(ctx.flag, ctx.j, m1, m2, job.tau_squared);
    r["kind"] = "walled";
    r["m1"] = m1;
    r["m2"] = m2;
    r["wall_pairs"] = s.wall_pairs;
    r["skipped_underdetermined"] = s.skipped_underdetermined;
    Json c = Json::array();
    for (const auto& k : s.candidates)
      c.push_back(candidate_json(k));
    r["candidates"] = c;
  }
  std::size_t ke = 0;
  for (const auto& c : r["candidates"])
    if (c["admissible"].get<bool>() && c["futaki"]["pass"].get<bool>())
      ++ke;
  r["ke_candidates"] = ke;
  return r;
}

std::string format_number(double x)
{
  if (std::isnan(x))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Mode parse_mode(const std::string& name)
{
  const std::string n = lower(trim(name));
  if (n == "roots")
    return Mode::roots;
  if (n == "flag-info" || n == "info")
    return Mode::flag_info;
  if (n == "futaki")
    return Mode::futaki;
  if (n == "check-segment")
    return Mode::check_segment;
  if (n == "solve")
    return Mode::solve;
  if (n == "verify")
    return Mode::verify;
  if (n == "search")
    return Mode::search;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string to_string(Mode m)
{
  switch (m)
  {
  case Mode::roots: return "roots";
  case Mode::flag_info: return "flag-info";
  case Mode::futaki: return "futaki";
  case Mode::check_segment: return "check-segment";
  case Mode::solve: return "solve";
  case Mode::verify: return "verify";
  case Mode::search: return "search";
  }
  return "?";
}

std::vector<Rational> parse_vector(const std::string& text)
{
  std::string s = trim(text);
  if (!s.empty() && (s.front() == '(' || s.front() == '['))
  {
    const char close = s.front() == '(' ? ')' : ']';
    if (s.back() != close)
      throw std::invalid_argument("vector '" + text + "': unbalanced brackets");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("vector '" + text + "': empty entry");
    out.push_back(parse_rational(item));
  }
  if (out.empty())
    throw std::invalid_argument("vector '" + text + "' is empty");
  return out;
}

Rational parse_tau_squared(const std::string& text)
{
  const std::string s = lower(trim(text));
  Rational sq;
  if (s.rfind("sqrt(", 0) == 0 && s.back() == ')')
    sq = parse_rational(s.substr(5, s.size() - 6));
  else
  {
    const Rational t = parse_rational(s);
    if (t <= 0)
      throw std::invalid_argument("tau must be positive");
    sq = t * t;
  }
  if (sq <= 0)
    throw std::invalid_argument("tau must be positive");
  return sq;
}

void JobSpec::validate() const
{
  const int rank = group.rank();
  std::set<int> seen;
  for (int i : painted)
  {
    if (i < 0 || i >= rank)
      throw std::invalid_argument("painted: index " + std::to_string(i) + " out of range [0, " +
                                  std::to_string(rank) + ")");
    if (!seen.insert(i).second)
      throw std::invalid_argument("painted: duplicate index " + std::to_string(i));
  }
  if (z && z->size() != static_cast<std::size_t>(rank))
    throw std::invalid_argument("z: expected " + std::to_string(rank) + " coordinates, got " +
                                std::to_string(z->size()));
  const bool needs_z =
      mode == Mode::futaki || mode == Mode::check_segment || mode == Mode::solve || mode == Mode::verify;
  if (needs_z && !z)
    throw std::invalid_argument("z: mode " + to_string(mode) + " requires an explicit direction");
  if ((m1 && *m1 < 1) || (m2 && *m2 < 1))
    throw std::invalid_argument("m1, m2: degrees must be >= 1");
  if (!(tol > 0) || !std::isfinite(tol))
    throw std::invalid_argument("tol must be positive");
  if (grid < 3)
    throw std::invalid_argument("grid must be at least 3");
  if (tau_squared <= 0)
    throw std::invalid_argument("tau must be positive");
}

JobSpec parse_job(const Json& doc)
{
  if (!doc.is_object())
    throw std::invalid_argument("job document must be a JSON object");
  static const std::set<std::string> known{"group", "painted", "complex_structure", "z", "z_direction", "mode",
                                           "m1",    "m2",      "tau",               "tol", "grid",        "exact",
                                           "force", "out"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k))
      throw std::invalid_argument("unknown field '" + k + "'");
  JobSpec job;
  if (!doc.contains("group"))
    throw std::invalid_argument("group: required");
  job.group = json_group(doc.at("group"));
  if (doc.contains("painted"))
    job.painted = json_int_list(doc.at("painted"), "painted");
  if (doc.contains("complex_structure"))
  {
    const auto& cs = doc.at("complex_structure");
    if (cs.is_string())
    {
      if (cs.get<std::string>() != "default")
        throw std::invalid_argument("complex_structure: expected \"default\" or a sign list");
    }
    else
      job.complex_structure = json_int_list(cs, "complex_structure");
  }
  const Json* z = doc.contains("z") ? &doc.at("z") : doc.contains("z_direction") ? &doc.at("z_direction") : nullptr;
  if (z)
  {
    if (z->is_string())
    {
      const auto s = trim(z->get<std::string>());
      if (s != "search")
        job.z = parse_vector(s);
    }
    else if (z->is_array())
    {
      std::vector<Rational> v;
      for (const auto& e : *z)
        v.push_back(json_rational(e, "z"));
      job.z = v;
    }
    else
      throw std::invalid_argument("z: expected a coordinate vector or \"search\"");
  }
  if (doc.contains("mode"))
    job.mode = parse_mode(doc.at("mode").get<std::string>());
  if (doc.contains("m1"))
    job.m1 = json_int(doc.at("m1"), "m1");
  if (doc.contains("m2"))
    job.m2 = json_int(doc.at("m2"), "m2");
  if (doc.contains("tau"))
  {
    const auto& t = doc.at("tau");
    job.tau_text = t.is_string() ? t.get<std::string>() : t.dump();
    job.tau_squared = parse_tau_squared(job.tau_text);
  }
  if (doc.contains("tol"))
  {
    if (!doc.at("tol").is_number())
      throw std::invalid_argument("tol: expected a number");
    job.tol = doc.at("tol").get<double>();
  }
  if (doc.contains("grid"))
  {
    const int g = json_int(doc.at("grid"), "grid");
    if (g < 3)
      throw std::invalid_argument("grid must be at least 3");
    job.grid = static_cast<std::size_t>(g);
  }
  if (doc.contains("exact"))
    job.exact = doc.at("exact").get<bool>();
  if (doc.contains("force"))
    job.force = doc.at("force").get<bool>();
  if (doc.contains("out"))
    job.out = doc.at("out").get<std::string>();
  return job;
}

RunResult run(const JobSpec& job)
{
  RunResult result;
  Json& report = result.report;
  report["mode"] = to_string(job.mode);
  try
  {
    job.validate();
    const Context ctx = make_context(job);
    Json config = flag_config(job, ctx);
    switch (job.mode)
    {
    case Mode::roots:
      report["config"] = config;
      report["result"] = roots_report(ctx);
      break;
    case Mode::flag_info:
      report["config"] = config;
      report["result"] = flag_report(job, ctx);
      break;
    case Mode::futaki:
    {
      const auto d = make_direction(job, ctx, config);
      report["config"] = config;
      report["result"] = job.exact ? futaki_json(futaki(ctx.flag, ctx.j, d.scaled, d.m1, d.m2), true)
                                   : futaki_json(futaki(ctx.flag, ctx.j, to_float(d.scaled), d.m1, d.m2,
                                                        kFutakiZeroTol),
                                                 false);
      break;
    }
    case Mode::check_segment:
    {
      const auto d = make_direction(job, ctx, config);
      report["config"] = config;
      bool ok = false;
      if (job.exact)
      {
        const auto [z1, z2] = ke_endpoints(d.base.z_kappa, d.scaled, d.m1, d.m2);
        report["result"] = segment_json(analyze_endpoints(ctx.flag, ctx.j, z1, z2), d.m1, d.m2, ok);
      }
      else
      {
        const auto [z1, z2] = ke_endpoints(to_float(d.base.z_kappa), to_float(d.scaled), d.m1, d.m2);
        report["result"] =
            segment_json(analyze_endpoints(ctx.flag, ctx.j, z1, z2, kFloatWallTol), d.m1, d.m2, ok);
      }
      break;
    }
    case Mode::solve:
    case Mode::verify:
    {
      const auto d = make_direction(job, ctx, config);
      report["config"] = config;
      auto s = solve_pipeline(job, ctx, d);
      report["result"] = s.body;
      if (job.mode == Mode::verify && s.ke)
      {
        bool consistent = true;
        report["result"]["verification"] = verify_report(job, s, consistent);
        if (!consistent)
        {
          report["error"] = "internal inconsistency: solved profile failed verification";
          result.exit_code = 3;
        }
      }
      if (s.ke && !job.out.empty())
        report["result"]["files"] = Json{{"profile", job.out}, {"diagnostics", export_profile(*s.solution, job.out, config)}};
      result.profile = std::move(s.solution);
      break;
    }
    case Mode::search:
      report["config"] = config;
      report["result"] = search_report(job, ctx);
      break;
    }
  }
  catch (const std::invalid_argument& e)
  {
    report["error"] = std::string("invalid input: ") + e.what();
    result.exit_code = 2;
  }
  catch (const std::domain_error& e)
  {
    report["error"] = std::string("invalid input: ") + e.what();
    result.exit_code = 2;
  }
  catch (const std::exception& e)
  {
    report["error"] = std::string("internal error: ") + e.what();
    result.exit_code = 3;
  }
  return result;
}

std::string export_profile(const ProfileSolution& solution, const std::string& path, const Json& config)
{
  std::ofstream csv(path);
  if (!csv)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  csv << "t,f,fp,fpp,res_tan,res_norm\n";
  for (const auto& r : solution.rows())
    csv << format_number(r.t) << ',' << format_number(r.f) << ',' << format_number(r.fp) << ','
        << format_number(r.fpp) << ',' << format_number(r.res_tan) << ',' << format_number(r.res_norm) << '\n';
  csv.close();
  if (!csv)
    throw std::runtime_error("write failure on '" + path + "'");

  std::filesystem::path side(path);
  side.replace_extension(".diagnostics.json");
  const auto& d = solution.diagnostics();
  Json j;
  j["profile"] = path;
  j["format"] = "CSV, comma separated, header line, 17 significant digits, nan at singular endpoints";
  j["rows"] = solution.rows().size();
  j["delta"] = solution.delta();
  j["einstein_constant"] = solution.einstein_constant();
  j["m1"] = solution.segment().m1;
  j["m2"] = solution.segment().m2;
  j["max_ode_residual"] = d.max_ode_residual;
  j["max_tangential_residual"] = d.max_tangential_residual;
  j["max_normal_residual"] = d.max_normal_residual;
  j["max_route_gap"] = d.max_route_gap;
  j["quadrature_error"] = d.quadrature_error;
  j["fpp_start"] = d.fpp_start;
  j["fpp_end"] = d.fpp_end;
  j["f_end"] = d.f_end;
  j["f_end_error"] = d.f_end - solution.curve().end();
  if (!config.empty())
    j["config"] = config;
  std::ofstream js(side);
  if (!js)
    throw std::runtime_error("cannot open '" + side.string() + "' for writing");
  js << j.dump(2) << '\n';
  if (!js)
    throw std::runtime_error("write failure on '" + side.string() + "'");
  return side.string();
}

ProfileTable read_profile(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  ProfileTable t;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "' is empty");
  {
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ','))
      t.header.push_back(h);
  }
  if (t.header.size() != 6)
    throw std::runtime_error("'" + path + "': expected 6 columns");
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string cell;
    double v[6];
    for (double& x : v)
    {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("'" + path + "': short row");
      x = cell == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell);
    }
    t.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return t;
}

}  // namespace kop
