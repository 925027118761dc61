// Command-line front end. Each subcommand reads an optional JSON job file;
// command-line flags override the fields of that file. The report is printed
// to stdout as JSON.

#include "kop/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

struct Overrides
{
  std::string job_file;
  std::string group;
  std::string painted;
  std::string complex_structure;
  std::string z;
  std::optional<int> m1;
  std::optional<int> m2;
  std::string tau;
  std::optional<double> tol;
  std::optional<int> grid;
  bool exact = false;
  bool floating = false;
  bool force = false;
  std::string out;
};

std::vector<int> int_list(const std::string& text)
{
  std::vector<int> out;
  for (const auto& q : kop::parse_vector(text))
  {
    if (q.get_den() != 1 || !q.get_num().fits_sint_p())
      throw std::invalid_argument("expected integers in '" + text + "'");
    out.push_back(static_cast<int>(q.get_num().get_si()));
  }
  return out;
}

void add_common(CLI::App* sub, Overrides& o)
{
  sub->add_option("job,--job", o.job_file, "JSON job file");
  sub->add_option("--group", o.group, "Lie algebra, e.g. A1xA1 or G2");
  sub->add_option("--painted", o.painted, "painted simple-root indices, e.g. \"0,2\" (use \"\" for none)");
  sub->add_option("--cs", o.complex_structure, "complex structure: default or signs over R_m^+");
  sub->add_option("--z", o.z, "direction in simple-root value coordinates, e.g. \"(1,-1)\", or search");
  sub->add_option("--m1", o.m1, "degree at the first singular orbit");
  sub->add_option("--m2", o.m2, "degree at the second singular orbit");
  sub->add_option("--tau", o.tau, "period scale: rational or sqrt(p/q); default 1");
  sub->add_option("--tol", o.tol, "residual tolerance (default 1e-6)");
  sub->add_option("--grid", o.grid, "profile grid size (default 513)");
  auto* ex = sub->add_flag("--exact", o.exact, "exact arithmetic (default)");
  auto* fl = sub->add_flag("--float", o.floating, "floating-point arithmetic");
  ex->excludes(fl);
  sub->add_flag("--force", o.force, "search even when the sphere leaves the chamber");
  sub->add_option("--out", o.out, "profile CSV path (solve, verify)");
}

kop::JobSpec build_job(const std::string& mode, const Overrides& o)
{
  kop::Json doc = kop::Json::object();
  if (!o.job_file.empty())
  {
    std::ifstream in(o.job_file);
    if (!in)
      throw std::invalid_argument("cannot open job file '" + o.job_file + "'");
    try
    {
      doc = kop::Json::parse(in);
    }
    catch (const kop::Json::parse_error& e)
    {
      throw std::invalid_argument(std::string("job file is not valid JSON: ") + e.what());
    }
  }
  if (!o.group.empty())
    doc["group"] = o.group;
  if (doc.is_object() && !doc.contains("group"))
    throw std::invalid_argument("group: required (--group or job file)");
  doc["mode"] = mode;
  kop::JobSpec job = kop::parse_job(doc);
  if (!o.painted.empty())
    job.painted = (o.painted == "none" || o.painted == "()") ? std::vector<int>{} : int_list(o.painted);
  if (!o.complex_structure.empty())
  {
    if (o.complex_structure == "default")
      job.complex_structure.reset();
    else
      job.complex_structure = int_list(o.complex_structure);
  }
  if (!o.z.empty())
  {
    if (o.z == "search")
      job.z.reset();
    else
      job.z = kop::parse_vector(o.z);
  }
  if (o.m1)
    job.m1 = *o.m1;
  if (o.m2)
    job.m2 = *o.m2;
  if (!o.tau.empty())
  {
    job.tau_text = o.tau;
    job.tau_squared = kop::parse_tau_squared(o.tau);
  }
  if (o.tol)
    job.tol = *o.tol;
  if (o.grid)
  {
    if (*o.grid < 3)
      throw std::invalid_argument("grid must be at least 3");
    job.grid = static_cast<std::size_t>(*o.grid);
  }
  if (o.exact)
    job.exact = true;
  if (o.floating)
    job.exact = false;
  if (o.force)
    job.force = true;
  if (!o.out.empty())
    job.out = o.out;
  return job;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Kahler-Einstein metrics on cohomogeneity-one KOP models"};
  app.require_subcommand(1);
  Overrides o;
  const char* modes[][2] = {{"roots", "root system data"},
                            {"flag-info", "flag manifold data and Ricci invariant"},
                            {"futaki", "Futaki invariant of a direction"},
                            {"check-segment", "admissibility of the candidate segment"},
                            {"solve", "solve for the Kahler-Einstein profile"},
                            {"verify", "solve and independently verify the profile"},
                            {"search", "search for directions with vanishing Futaki invariant"}};
  for (const auto& m : modes)
    add_common(app.add_subcommand(m[0], m[1]), o);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string mode = app.get_subcommands().front()->get_name();
  kop::RunResult result;
  try
  {
    result = kop::run(build_job(mode, o));
  }
  catch (const std::exception& e)
  {
    result.report = kop::Json{{"mode", mode}, {"error", std::string("invalid input: ") + e.what()}};
    result.exit_code = 2;
  }
  std::cout << result.report.dump(2) << '\n';
  if (result.exit_code != 0)
    std::cerr << "kop: " << result.report.value("error", std::string("failure")) << '\n';
  return result.exit_code;
}
