#pragma once

// Scenario files and the runner behind the CLI.
//
// A scenario file is one JSON document: either a single job object or
// {"output_dir": ..., "jobs": [job, ...]}. Every job has "kind" and an
// optional "name"; the remaining keys depend on the kind. Unknown keys are
// errors at every level.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gevlab/cjs.hpp"
#include "gevlab/io.hpp"
#include "gevlab/suites.hpp"
#include "gevlab/system.hpp"

namespace gevlab {

enum class ScenarioKind {
  energy_estimate,
  symbol_audit,
  metric_audit,
  quantizer_audit,
  cjs_sweep,
  constraint_table
};

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// Exit codes of the runner.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitValidation = 2;

struct EnergyJob {
  RunConfig run;
  bool calibrate = true;  // taudot: "calibrate" (default) or a number
  double calibration_factor = 2.0;
  std::optional<double> max_ratio_cap = 1.1;  // null disables the assertion
};

struct CjsJob {
  std::string coefficient = "t";  // t | (t-1/2)^2 | t^2 | const:<value>
  int k = 2;
  double T = 1.0;
  std::vector<double> xi;
};

struct ConstraintJob {
  std::string sigma_min = "0.001";
  std::string sigma_max = "0.999";
  std::string step = "0.001";
  int nu = 4;
  bool f21_zero = false;
};

using JobParams = std::variant<EnergyJob, SymbolSuiteParams, MetricSuiteParams,
                               QuantizerSuiteParams, CjsJob, ConstraintJob>;

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::energy_estimate;
  Json config;  // the job object as written
  JobParams params;
};

struct ScenarioFile {
  std::optional<std::string> output_dir;
  bool multi = false;  // "jobs" form: each job writes to output_dir/<name>
  std::vector<Scenario> jobs;
};

/// Throws ValidationError on malformed input or unknown keys.
Scenario parse_job(const Json& job, const std::string& default_name = "job");
ScenarioFile parse_scenario(const Json& doc);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Full resolved parameters, for the metadata echo.
Json resolved_json(const Scenario& s);

TimeCoefficient make_time_coefficient(const std::string& name, double T, int k);

struct RunOptions {
  bool dump_matrices = false;
  std::size_t workers = 0;  // 0: GEVLAB_WORKERS or hardware concurrency
};

struct JobOutcome {
  std::string name;
  int exit_code = kExitPass;
  std::string message;
};

/// Runs one job into `dir` (created if needed): trace.csv, summary.json,
/// failures.json, metadata.json. Never throws for failures inside the job.
JobOutcome run_job(const Scenario& s, const std::filesystem::path& dir,
                   const RunOptions& opts = {});

/// Runs all jobs concurrently. Returns the worst exit code (2 over 1 over 0).
int run_scenario(const ScenarioFile& f, const std::filesystem::path& output_dir,
                 const RunOptions& opts = {}, std::vector<JobOutcome>* outcomes = nullptr);

}  // namespace gevlab
