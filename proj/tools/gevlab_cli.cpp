// gevlab: run scenario files and the canned audits from the shell.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>

#include "gevlab/error.hpp"
#include "gevlab/parallel.hpp"
#include "gevlab/scenario.hpp"

namespace fs = std::filesystem;
using namespace gevlab;

namespace {

void report(const JobOutcome& o, const fs::path& dir) {
  const char* status = o.exit_code == kExitPass ? "pass" : o.exit_code == kExitAssertion ? "FAIL" : "INVALID";
  std::cout << fmt::format("{}: {} -> {}", o.name, status, dir.string());
  if (!o.message.empty()) std::cout << " (" << o.message << ")";
  std::cout << '\n';
}

int run_single(const Json& job, const fs::path& out, const RunOptions& opts) {
  const Scenario s = parse_job(job);
  const JobOutcome o = run_job(s, out, opts);
  report(o, out);
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gevlab: weakly hyperbolic Gevrey energy laboratory"};
  app.require_subcommand(1);

  std::string output_dir;
  bool dump = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output-dir", output_dir, "directory for trace.csv, summary.json, ...");
    sub->add_flag("--dump-matrices", dump,
                  "also write operator matrices (row-major complex doubles, little-endian)");
  };

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scenario_file;
  run->add_option("scenario-file", scenario_file, "JSON scenario")->required();
  add_common(run);

  auto* table = app.add_subcommand("table", "constraint table over a sigma grid");
  std::string smin = "0.001", smax = "0.999", step = "0.001";
  int nu = 4;
  bool f21_zero = false;
  table->add_option("--sigma-min", smin, "exact decimal or a/b")->capture_default_str();
  table->add_option("--sigma-max", smax)->capture_default_str();
  table->add_option("--step", step)->capture_default_str();
  table->add_option("--nu", nu)->capture_default_str();
  table->add_flag("--f21-zero", f21_zero, "drop the nonlinear constraint (F21 == 0)");
  add_common(table);

  auto* audit = app.add_subcommand("audit", "symbol, metric or quantizer audits");
  std::string which;
  audit->add_option("target", which, "symbols | metric | quantizer")
      ->required()
      ->check(CLI::IsMember({"symbols", "metric", "quantizer"}));
  double c = 0.0;
  audit->add_option("--c", c, "regularization exponent (default depends on the audit)");
  add_common(audit);

  auto* cjs = app.add_subcommand("cjs", "growth exponent of the frequency-wise energy");
  int k = 2;
  std::string ladder = "4:10";
  std::string coefficient = "t";
  double T = 1.0;
  cjs->add_option("--k", k, "C^k class in the exponent 2/(k+2)")->capture_default_str();
  cjs->add_option("--xi-ladder", ladder, "lo:hi (powers of two) or a comma list")
      ->capture_default_str();
  cjs->add_option("--coefficient", coefficient, "t | (t-1/2)^2 | t^2 | const:<v>")
      ->capture_default_str();
  cjs->add_option("--T", T, "time horizon")->capture_default_str();
  add_common(cjs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    RunOptions opts;
    opts.dump_matrices = dump;
    opts.workers = worker_count();
    if (*run) {
      const ScenarioFile f = load_scenario(scenario_file);
      const fs::path out = !output_dir.empty() ? fs::path(output_dir)
                           : f.output_dir    ? fs::path(*f.output_dir)
                                             : fs::path("gevlab_out");
      std::vector<JobOutcome> outcomes;
      const int code = run_scenario(f, out, opts, &outcomes);
      for (const auto& o : outcomes) report(o, f.multi ? out / o.name : out);
      return code;
    }
    const fs::path out = output_dir.empty() ? fs::path("gevlab_out") : fs::path(output_dir);
    if (*table) {
      return run_single(Json{{"name", "table"},
                             {"kind", "constraint_table"},
                             {"sigma_min", smin},
                             {"sigma_max", smax},
                             {"step", step},
                             {"nu", nu},
                             {"f21_zero", f21_zero}},
                        out, opts);
    }
    if (*audit) {
      const std::string kind = which == "symbols" ? "symbol_audit"
                               : which == "metric" ? "metric_audit"
                                                   : "quantizer_audit";
      Json job{{"name", which}, {"kind", kind}};
      if (c > 0.0) job["c"] = c;
      return run_single(job, out, opts);
    }
    if (*cjs) {
      return run_single(Json{{"name", "cjs"},
                             {"kind", "cjs_sweep"},
                             {"coefficient", coefficient},
                             {"k", k},
                             {"T", T},
                             {"xi", ladder}},
                        out, opts);
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
  return kExitPass;
}
