#ifndef KOP_JOB_HPP
#define KOP_JOB_HPP

#include "kop/einstein.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kop
{

using Json = nlohmann::ordered_json;

enum class Mode
{
  roots,
  flag_info,
  futaki,
  check_segment,
  solve,
  verify,
  search
};

Mode parse_mode(const std::string& name);
std::string to_string(Mode m);

/// One invocation of the tool, as read from a JSON job document.
struct JobSpec
{
  LieAlgebraSpec group;
  std::vector<int> painted;
  std::optional<std::vector<int>> complex_structure;  // signs; nullopt = default
  std::optional<std::vector<Rational>> z;             // nullopt = "search"
  Mode mode = Mode::solve;
  std::optional<int> m1;
  std::optional<int> m2;
  Rational tau_squared = 1;
  std::string tau_text = "1";
  double tol = 1e-6;
  std::size_t grid = 513;
  bool exact = true;
  bool force = false;
  std::string out;

  /// Throws std::invalid_argument on out-of-range indices or missing fields.
  void validate() const;
};

/// Reads a JSON job document. Unknown keys are rejected.
JobSpec parse_job(const Json& doc);

/// "(1,-1)", "1,-1" or "[1/2, 0]" into rationals.
std::vector<Rational> parse_vector(const std::string& text);
/// "2", "1/2", "sqrt(8)" into tau^2.
Rational parse_tau_squared(const std::string& text);

struct RunResult
{
  Json report;
  std::optional<ProfileSolution> profile;
  int exit_code = 0;
};

/// Dispatches the job. Mathematical negatives (no Kahler-Einstein metric) are
/// reported with exit code 0; malformed input gives 2, internal
/// inconsistencies 3.
RunResult run(const JobSpec& job);

/// Writes the profile table (CSV, header t,f,fp,fpp,res_tan,res_norm, 17
/// significant digits) and a JSON sidecar of diagnostics next to it
/// (<path without extension>.diagnostics.json). Returns the sidecar path.
std::string export_profile(const ProfileSolution& solution, const std::string& path, const Json& config = Json::object());

struct ProfileTable
{
  std::vector<std::string> header;
  std::vector<ProfileRow> rows;
};

ProfileTable read_profile(const std::string& path);

}  // namespace kop

#endif
