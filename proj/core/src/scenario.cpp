#include "gevlab/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "gevlab/constraints.hpp"
#include "gevlab/error.hpp"
#include "gevlab/parallel.hpp"

namespace gevlab {

namespace fs = std::filesystem;

namespace {

// Object reader that remembers which keys were consumed; finish() rejects
// the rest.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(fmt::format("{} must be an object", where()));
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(j_.at(key), key);
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    return convert<T>(j_.at(key), key);
  }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), qualified(key));
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ValidationError(fmt::format("unknown key '{}'", qualified(k)));
    }
  }

 private:
  std::string where() const { return path_.empty() ? "scenario" : "'" + path_ + "'"; }

  template <class T>
  T convert(const Json& v, const std::string& key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ValidationError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ValidationError("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ValidationError(
          fmt::format("key '{}' has the wrong type ({})", qualified(key), v.dump()));
    }
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Complex parse_complex(const Json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ValidationError(fmt::format("'{}' must be a number or [re, im]", where));
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

// A number written in the file, kept exact for the rational engine.
std::string exact_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt::format("{}", v.get<double>());
  throw ValidationError(fmt::format("'{}' must be a number or a string", where));
}

CoefficientParams parse_coefficient(Section s, bool geometry) {
  CoefficientParams p;
  p.profile = profile_from_string(s.get<std::string>("profile", to_string(p.profile)));
  p.T = s.get("T", p.T);
  p.T_prime = s.get("T_prime", p.T_prime);
  p.r = s.get("r", p.r);
  p.r_prime = s.get("r_prime", p.r_prime);
  p.plateau = s.get("plateau", p.plateau);
  p.modulation = s.get("modulation", p.modulation);
  p.modulation_wavenumber = s.get("modulation_wavenumber", p.modulation_wavenumber);
  p.sharpness = s.get("sharpness", p.sharpness);
  p.R = s.get("R", p.R);
  p.sigma_coeff = s.get("sigma_coeff", p.sigma_coeff);
  if (geometry) {
    p.x0 = s.get("x0", p.x0);
    p.domain_length = s.get("domain_length", p.domain_length);
  }
  s.finish();
  return p;
}

Json coefficient_json(const CoefficientParams& p) {
  return Json{{"profile", to_string(p.profile)},
              {"T", p.T},
              {"T_prime", p.T_prime},
              {"r", p.r},
              {"r_prime", p.r_prime},
              {"x0", p.x0},
              {"domain_length", p.domain_length},
              {"plateau", p.plateau},
              {"modulation", p.modulation},
              {"modulation_wavenumber", p.modulation_wavenumber},
              {"sharpness", p.sharpness},
              {"R", p.R},
              {"sigma_coeff", p.sigma_coeff}};
}

CoefficientParams optional_coefficient(Section& s) {
  if (!s.has("coefficient")) return {};
  return parse_coefficient(s.sub("coefficient"), true);
}

NonlinearityF parse_nonlinearity(Section s) {
  const std::string preset = s.get<std::string>("preset", "wave");
  NonlinearityF f;
  if (preset == "wave") {
    f = NonlinearityF::wave_default();
  } else if (preset != "none") {
    throw ValidationError(fmt::format("unknown nonlinearity preset '{}'", preset));
  }
  if (s.has("terms")) {
    const Json& terms = s.raw("terms");
    if (!terms.is_array()) throw ValidationError("'nonlinearity.terms' must be an array");
    f.terms.clear();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Section t(terms[i], fmt::format("nonlinearity.terms[{}]", i));
      FTerm term;
      term.k1 = t.get("k1", 0);
      term.k2 = t.get("k2", 0);
      term.row = t.get("row", 1);
      term.col = t.get("col", 0);
      if (t.has("amplitude")) term.amplitude = parse_complex(t.raw("amplitude"), "amplitude");
      t.finish();
      f.terms.push_back(term);
    }
  }
  f.k_max = s.get("k_max", std::max(f.k_max, 1));
  f.u_radius = s.get("u_radius", f.u_radius);
  s.finish();
  return f;
}

Json nonlinearity_json(const NonlinearityF& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms) {
    terms.push_back(Json{{"k1", t.k1},
                         {"k2", t.k2},
                         {"row", t.row},
                         {"col", t.col},
                         {"amplitude", complex_json(t.amplitude)}});
  }
  return Json{{"terms", terms}, {"k_max", f.k_max}, {"u_radius", f.u_radius}};
}

InitialData parse_data(Section s) {
  InitialData d;
  d.center_offset = s.get("center_offset", d.center_offset);
  d.width = s.get("width", d.width);
  d.xi0 = s.get("xi0", d.xi0);
  if (s.has("amp1")) d.amp1 = parse_complex(s.raw("amp1"), "data.amp1");
  if (s.has("amp2")) d.amp2 = parse_complex(s.raw("amp2"), "data.amp2");
  d.noise = s.get("noise", d.noise);
  d.noise_scale = s.get("noise_scale", d.noise_scale);
  d.truncation = s.get("truncation", d.truncation);
  d.energy = s.get("energy", d.energy);
  s.finish();
  return d;
}

Json data_json(const InitialData& d) {
  return Json{{"center_offset", d.center_offset}, {"width", d.width},
              {"xi0", d.xi0},                     {"amp1", complex_json(d.amp1)},
              {"amp2", complex_json(d.amp2)},     {"noise", d.noise},
              {"noise_scale", d.noise_scale},     {"truncation", d.truncation},
              {"energy", d.energy}};
}

EnergyJob parse_energy(Section& s) {
  EnergyJob job;
  RunConfig& cfg = job.run;
  std::size_t n = 256;
  double length = 2.0, x0 = 1.0;
  if (s.has("grid")) {
    Section g = s.sub("grid");
    const auto nn = g.get<std::int64_t>("n", 256);
    if (nn < 4) throw ValidationError("grid.n must be a power of two >= 4");
    n = static_cast<std::size_t>(nn);
    length = g.get("length", length);
    x0 = g.get("x0", x0);
    g.finish();
  }
  cfg.grid = GridSpec(n, length, x0);
  if (s.has("coefficient")) cfg.coeff = parse_coefficient(s.sub("coefficient"), false);
  cfg.coeff.x0 = x0;
  cfg.coeff.domain_length = length;
  cfg.sigma = s.get("sigma", cfg.sigma);
  cfg.c = s.optional<double>("c");
  cfg.tau0 = s.get("tau0", cfg.tau0);
  if (s.has("taudot")) {
    const Json& v = s.raw("taudot");
    if (v.is_string() && v.get<std::string>() == "calibrate") {
      job.calibrate = true;
    } else if (v.is_number()) {
      job.calibrate = false;
      cfg.taudot = v.get<double>();
    } else {
      throw ValidationError("'taudot' must be a number or \"calibrate\"");
    }
  }
  job.calibration_factor = s.get("calibration_factor", job.calibration_factor);
  if (!(job.calibration_factor > 0.0)) throw ValidationError("calibration_factor must be > 0");
  cfg.dt = s.get("dt", cfg.dt);
  cfg.cfl = s.get("cfl", cfg.cfl);
  cfg.horizon = s.optional<double>("horizon");
  if (s.has("nonlinearity")) {
    cfg.F = parse_nonlinearity(s.sub("nonlinearity"));
  } else {
    cfg.F = NonlinearityF::wave_default();
  }
  cfg.f21_zero = s.get("f21_zero", cfg.f21_zero);
  if (s.has("data")) cfg.data = parse_data(s.sub("data"));
  cfg.seed = s.get<std::uint64_t>("seed", cfg.seed);
  cfg.sample_stride = s.get("sample_stride", cfg.sample_stride);
  cfg.max_exponent = s.get("max_exponent", cfg.max_exponent);
  if (s.has("max_ratio_cap")) job.max_ratio_cap = s.optional<double>("max_ratio_cap");
  cfg.validate();
  // resolves tau0, horizon and dt; throws on inconsistent values
  plan_run(cfg, CoefficientField(cfg.coeff));
  return job;
}

Json energy_json(const EnergyJob& job) {
  const RunConfig& c = job.run;
  Json j;
  j["grid"] = {{"n", c.grid.size()}, {"length", c.grid.length()}, {"x0", c.grid.x0()}};
  j["coefficient"] = coefficient_json(c.coeff);
  j["sigma"] = c.sigma;
  j["c"] = c.c_value();
  j["tau0"] = c.tau0;
  j["taudot"] = job.calibrate ? Json("calibrate") : Json(c.taudot);
  j["calibration_factor"] = job.calibration_factor;
  j["dt"] = c.dt;
  j["cfl"] = c.cfl;
  j["horizon"] = c.horizon ? Json(*c.horizon) : Json(nullptr);
  j["nonlinearity"] = nonlinearity_json(c.F);
  j["f21_zero"] = c.f21_zero;
  j["data"] = data_json(c.data);
  j["seed"] = c.seed;
  j["sample_stride"] = c.sample_stride;
  j["max_exponent"] = c.max_exponent;
  j["max_ratio_cap"] = job.max_ratio_cap ? Json(*job.max_ratio_cap) : Json(nullptr);
  return j;
}

SymbolSuiteParams parse_symbol(Section& s) {
  SymbolSuiteParams p;
  p.coeff = optional_coefficient(s);
  p.c = s.get("c", p.c);
  p.n = s.get<std::size_t>("n", p.n);
  p.nt = s.get("nt", p.nt);
  p.nx = s.get("nx", p.nx);
  p.stability = s.get("stability", p.stability);
  if (!(p.c > 0.0 && p.c <= 2.0)) throw ValidationError("c must lie in (0, 2]");
  if (p.nt < 2 || p.nx < 3) throw ValidationError("nt >= 2 and nx >= 3 are required");
  CoefficientField check(p.coeff);
  GridSpec g(p.n, p.coeff.domain_length, p.coeff.x0);
  return p;
}

MetricSuiteParams parse_metric(Section& s) {
  MetricSuiteParams p;
  p.coeff = optional_coefficient(s);
  p.c = s.get("c", p.c);
  p.pairs = s.get<std::size_t>("pairs", p.pairs);
  p.xi_max = s.get("xi_max", p.xi_max);
  p.r = s.get("r", p.r);
  p.seed = s.get<std::uint64_t>("seed", p.seed);
  if (!(p.c > 0.0 && p.c <= 2.0)) throw ValidationError("c must lie in (0, 2]");
  if (p.pairs < 10) throw ValidationError("pairs must be >= 10");
  if (!(p.xi_max > 1.0) || !(p.r > 0.0)) throw ValidationError("xi_max > 1 and r > 0 required");
  CoefficientField check(p.coeff);
  return p;
}

QuantizerSuiteParams parse_quantizer(Section& s) {
  QuantizerSuiteParams p;
  p.coeff = optional_coefficient(s);
  p.c = s.get("c", p.c);
  p.ladder = s.get("ladder", p.ladder);
  p.t = s.get("t", p.t);
  p.c_invert = s.get("c_invert", p.c_invert);
  p.n_invert = s.get<std::size_t>("n_invert", p.n_invert);
  p.nu = s.get("nu", p.nu);
  p.seed = s.get<std::uint64_t>("seed", p.seed);
  for (double c : {p.c, p.c_invert}) {
    if (!(c > 0.0 && c <= 2.0)) throw ValidationError("c must lie in (0, 2]");
  }
  if (p.ladder.size() < 2) throw ValidationError("ladder needs at least two grid sizes");
  for (std::size_t n : p.ladder) GridSpec(n, p.coeff.domain_length, p.coeff.x0);
  GridSpec(p.n_invert, p.coeff.domain_length, p.coeff.x0);
  if (p.nu < 0 || p.nu > 6) throw ValidationError("nu must lie in [0, 6]");
  CoefficientField check(p.coeff);
  return p;
}

std::vector<double> parse_ladder_text(const std::string& text) {
  static const std::regex range(R"(^\s*(-?\d+)\s*:\s*(-?\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, range)) {
    return dyadic_ladder(std::stoi(m[1]), std::stoi(m[2]));
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::exception();
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("bad xi ladder entry '{}'", item));
    }
  }
  return out;
}

CjsJob parse_cjs(Section& s) {
  CjsJob p;
  p.coefficient = s.get("coefficient", p.coefficient);
  p.k = s.get("k", p.k);
  p.T = s.get("T", p.T);
  if (s.has("xi")) {
    const Json& v = s.raw("xi");
    if (v.is_string()) {
      p.xi = parse_ladder_text(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) throw ValidationError("'xi' entries must be numbers");
        p.xi.push_back(e.get<double>());
      }
    } else {
      throw ValidationError("'xi' must be \"lo:hi\" or an array");
    }
  } else {
    p.xi = dyadic_ladder();
  }
  if (p.k < 1) throw ValidationError("k must be >= 1");
  if (!(p.T > 0.0)) throw ValidationError("T must be positive");
  make_time_coefficient(p.coefficient, p.T, p.k);
  if (p.xi.size() < 6) throw ValidationError("the xi ladder needs at least 6 frequencies");
  for (double x : p.xi) {
    if (!(x > 0.0)) throw ValidationError("xi values must be positive");
  }
  return p;
}

ConstraintJob parse_constraints(Section& s) {
  ConstraintJob p;
  if (s.has("sigma_min")) p.sigma_min = exact_text(s.raw("sigma_min"), "sigma_min");
  if (s.has("sigma_max")) p.sigma_max = exact_text(s.raw("sigma_max"), "sigma_max");
  if (s.has("step")) p.step = exact_text(s.raw("step"), "step");
  p.nu = s.get("nu", p.nu);
  p.f21_zero = s.get("f21_zero", p.f21_zero);
  // validates ranges without keeping the table
  constraint_table(parse_rational(p.sigma_min), parse_rational(p.sigma_max),
                   parse_rational(p.step), p.nu, p.f21_zero);
  return p;
}

bool valid_name(const std::string& n) {
  static const std::regex re("^[A-Za-z0-9_.-]+$");
  return std::regex_match(n, re) && n != "." && n != "..";
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::energy_estimate: return "energy_estimate";
    case ScenarioKind::symbol_audit: return "symbol_audit";
    case ScenarioKind::metric_audit: return "metric_audit";
    case ScenarioKind::quantizer_audit: return "quantizer_audit";
    case ScenarioKind::cjs_sweep: return "cjs_sweep";
    case ScenarioKind::constraint_table: return "constraint_table";
  }
  return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (auto k : {ScenarioKind::energy_estimate, ScenarioKind::symbol_audit,
                 ScenarioKind::metric_audit, ScenarioKind::quantizer_audit,
                 ScenarioKind::cjs_sweep, ScenarioKind::constraint_table}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError(fmt::format("unknown scenario kind '{}'", s));
}

TimeCoefficient make_time_coefficient(const std::string& name, double T, int k) {
  if (name == "t") return TimeCoefficient::linear(T, k);
  if (name == "(t-1/2)^2") return TimeCoefficient::interior_square(T, k);
  if (name == "t^2") return TimeCoefficient::square(T, k);
  if (name.rfind("const:", 0) == 0) {
    try {
      return TimeCoefficient::constant(std::stod(name.substr(6)), T, k);
    } catch (const std::invalid_argument&) {
    }
  }
  throw ValidationError(
      fmt::format("unknown time coefficient '{}' (t, (t-1/2)^2, t^2, const:<v>)", name));
}

Scenario parse_job(const Json& job, const std::string& default_name) {
  Section s(job, "");
  Scenario sc;
  sc.config = job;
  sc.name = s.get<std::string>("name", default_name);
  if (!valid_name(sc.name)) throw ValidationError(fmt::format("invalid job name '{}'", sc.name));
  if (!s.has("kind")) throw ValidationError("job is missing 'kind'");
  sc.kind = scenario_kind_from_string(s.get<std::string>("kind", ""));
  switch (sc.kind) {
    case ScenarioKind::energy_estimate: sc.params = parse_energy(s); break;
    case ScenarioKind::symbol_audit: sc.params = parse_symbol(s); break;
    case ScenarioKind::metric_audit: sc.params = parse_metric(s); break;
    case ScenarioKind::quantizer_audit: sc.params = parse_quantizer(s); break;
    case ScenarioKind::cjs_sweep: sc.params = parse_cjs(s); break;
    case ScenarioKind::constraint_table: sc.params = parse_constraints(s); break;
  }
  s.finish();
  return sc;
}

ScenarioFile parse_scenario(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  ScenarioFile f;
  if (!doc.contains("jobs")) {
    Json job = doc;
    if (job.contains("output_dir")) {
      if (!job["output_dir"].is_string()) throw ValidationError("'output_dir' must be a string");
      f.output_dir = job["output_dir"].get<std::string>();
      job.erase("output_dir");
    }
    f.jobs.push_back(parse_job(job));
    return f;
  }
  Section s(doc, "");
  f.multi = true;
  f.output_dir = s.optional<std::string>("output_dir");
  const Json& jobs = s.raw("jobs");
  s.finish();
  if (!jobs.is_array() || jobs.empty()) throw ValidationError("'jobs' must be a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    Scenario sc;
    try {
      sc = parse_job(jobs[i], fmt::format("job{}", i));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("jobs[{}]: {}", i, e.what()));
    }
    if (!names.insert(sc.name).second) {
      throw ValidationError(fmt::format("duplicate job name '{}'", sc.name));
    }
    f.jobs.push_back(std::move(sc));
  }
  return f;
}

ScenarioFile load_scenario(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError(fmt::format("cannot read scenario file {}", path.string()));
  std::stringstream buf;
  buf << is.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return parse_scenario(doc);
}

Json resolved_json(const Scenario& s) {
  Json j = std::visit(
      [](const auto& p) -> Json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, EnergyJob>) {
          return energy_json(p);
        } else if constexpr (std::is_same_v<P, SymbolSuiteParams>) {
          return Json{{"coefficient", coefficient_json(p.coeff)}, {"c", p.c}, {"n", p.n},
                      {"nt", p.nt}, {"nx", p.nx}, {"stability", p.stability}};
        } else if constexpr (std::is_same_v<P, MetricSuiteParams>) {
          return Json{{"coefficient", coefficient_json(p.coeff)}, {"c", p.c},
                      {"pairs", p.pairs}, {"xi_max", p.xi_max}, {"r", p.r}, {"seed", p.seed}};
        } else if constexpr (std::is_same_v<P, QuantizerSuiteParams>) {
          return Json{{"coefficient", coefficient_json(p.coeff)}, {"c", p.c},
                      {"ladder", p.ladder}, {"t", p.t}, {"c_invert", p.c_invert},
                      {"n_invert", p.n_invert}, {"nu", p.nu}, {"seed", p.seed}};
        } else if constexpr (std::is_same_v<P, CjsJob>) {
          return Json{{"coefficient", p.coefficient}, {"k", p.k}, {"T", p.T}, {"xi", p.xi}};
        } else {
          return Json{{"sigma_min", p.sigma_min}, {"sigma_max", p.sigma_max},
                      {"step", p.step}, {"nu", p.nu}, {"f21_zero", p.f21_zero}};
        }
      },
      s.params);
  Json out;
  out["name"] = s.name;
  out["kind"] = to_string(s.kind);
  for (auto& [k, v] : j.items()) out[k] = v;
  return out;
}

namespace {

struct JobResult {
  std::string trace;
  Json summary;
  Json failures = Json::array();
};

void add_failure(JobResult& r, const std::string& check, const std::string& message) {
  r.failures.push_back(Json{{"check", check}, {"message", message}});
}

JobResult run_energy(const EnergyJob& job, const fs::path& dir, const RunOptions& opts) {
  JobResult r;
  RunResult rr;
  Json history = Json::array();
  if (job.calibrate) {
    Calibration cal = calibrate_taudot(job.run, job.calibration_factor);
    for (double h : cal.history) history.push_back(h);
    rr = std::move(cal.result);
  } else {
    rr = run_with_energy(job.run);
  }
  if (opts.dump_matrices) {
    const CoefficientField coeff(job.run.coeff);
    const Symmetrizer sym = make_symmetrizer(SymbolB(coeff, rr.plan.c), job.run.grid, 0.0);
    write_matrix_dump(dir / "op_b.bin", sym.op_b);
  }
  const EnergyTrace& tr = rr.trace;
  r.trace = energy_csv(tr.rows);
  const bool capped = job.max_ratio_cap.has_value();
  const bool pass = !capped || tr.max_ratio <= *job.max_ratio_cap;
  r.summary = Json{{"max_ratio", tr.max_ratio},
                   {"max_ratio_cap", capped ? Json(*job.max_ratio_cap) : Json(nullptr)},
                   {"pass", pass},
                   {"E0", tr.E0},
                   {"max_r2", tr.max_r2},
                   {"max_r3", tr.max_r3},
                   {"max_r4", tr.max_r4},
                   {"constant_sum", tr.constant_sum()},
                   {"taudot", rr.plan.taudot},
                   {"taudot_history", history},
                   {"tau0", rr.plan.tau0},
                   {"c", rr.plan.c},
                   {"horizon", rr.plan.horizon},
                   {"dt", rr.plan.dt},
                   {"steps", rr.plan.steps},
                   {"rows", tr.rows.size()}};
  if (!pass) {
    add_failure(r, "max_ratio",
                fmt::format("max E/E0 = {} exceeds the cap {}", format_double(tr.max_ratio),
                            format_double(*job.max_ratio_cap)));
  }
  return r;
}

JobResult audit_result(const std::vector<AuditRecord>& records) {
  JobResult r;
  r.trace = audit_csv(records);
  r.summary = Json{{"pass", all_pass(records)}, {"records", to_json(records)}};
  for (const auto& rec : records) {
    if (!rec.pass) {
      add_failure(r, rec.check, fmt::format("check failed, constant = {}", format_double(rec.constant)));
    }
  }
  return r;
}

JobResult run_cjs(const CjsJob& job, const RunOptions& opts) {
  JobResult r;
  const TimeCoefficient tc = make_time_coefficient(job.coefficient, job.T, job.k);
  const GrowthFit fit = growth_exponent_fit(tc, job.xi, opts.workers);
  r.trace = growth_csv(fit);
  r.summary = to_json(fit);
  r.summary["no_growth"] = fit.no_growth;
  r.summary["bound"] = 2.0 / (job.k + 2.0) + kGrowthSlack;
  r.summary["coefficient"] = tc.label;
  if (!fit.pass) {
    add_failure(r, "growth_exponent",
                fmt::format("slope {} exceeds 2/(k+2) + {} = {}", format_double(fit.slope),
                            kGrowthSlack, format_double(2.0 / (job.k + 2.0) + kGrowthSlack)));
  }
  return r;
}

JobResult run_constraints(const ConstraintJob& job) {
  JobResult r;
  const auto table = constraint_table(parse_rational(job.sigma_min), parse_rational(job.sigma_max),
                                      parse_rational(job.step), job.nu, job.f21_zero);
  r.trace = constraint_csv(table);
  const auto best = minimal_feasible_sigma(table);
  r.summary = Json{{"nu", job.nu},
                   {"f21_zero", job.f21_zero},
                   {"rows", table.size()},
                   {"minimal_feasible_sigma", best ? Json(to_double(*best)) : Json(nullptr)},
                   {"minimal_feasible_sigma_exact",
                    best ? Json(fmt::format("{}/{}", best->numerator(), best->denominator()))
                         : Json(nullptr)}};
  return r;
}

}  // namespace

JobOutcome run_job(const Scenario& s, const fs::path& dir, const RunOptions& opts) {
  JobOutcome out{s.name, kExitPass, {}};
  JobResult r;
  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    out.exit_code = kExitValidation;
    out.message = e.what();
    return out;
  }
  try {
    switch (s.kind) {
      case ScenarioKind::energy_estimate:
        r = run_energy(std::get<EnergyJob>(s.params), dir, opts);
        break;
      case ScenarioKind::symbol_audit:
        r = audit_result(symbol_audit_suite(std::get<SymbolSuiteParams>(s.params)));
        break;
      case ScenarioKind::metric_audit:
        r = audit_result(metric_audit_suite(std::get<MetricSuiteParams>(s.params)));
        break;
      case ScenarioKind::quantizer_audit:
        r = audit_result(quantizer_audit_suite(
            std::get<QuantizerSuiteParams>(s.params),
            opts.dump_matrices ? std::optional<fs::path>(dir) : std::nullopt));
        break;
      case ScenarioKind::cjs_sweep:
        r = run_cjs(std::get<CjsJob>(s.params), opts);
        break;
      case ScenarioKind::constraint_table:
        r = run_constraints(std::get<ConstraintJob>(s.params));
        break;
    }
    if (!r.failures.empty()) {
      out.exit_code = kExitAssertion;
      out.message = r.failures.front().at("message").get<std::string>();
    }
  } catch (const ValidationError& e) {
    out.exit_code = kExitValidation;
    out.message = e.what();
    add_failure(r, "validation", e.what());
  } catch (const std::exception& e) {
    out.exit_code = kExitAssertion;
    out.message = e.what();
    add_failure(r, "runtime", e.what());
  }

  const std::string config_text = s.config.dump();
  Json meta;
  meta["config"] = s.config;
  meta["resolved"] = resolved_json(s);
  meta["config_hash"] = git_blob_hash(config_text);
  meta["exit_code"] = out.exit_code;
  try {
    write_text(dir / "trace.csv", r.trace);
    write_json(dir / "summary.json", r.summary.is_null() ? Json::object() : r.summary);
    write_json(dir / "failures.json", r.failures);
    write_json(dir / "metadata.json", meta);
  } catch (const std::exception& e) {
    out.exit_code = kExitAssertion;
    out.message = e.what();
  }
  return out;
}

int run_scenario(const ScenarioFile& f, const fs::path& output_dir, const RunOptions& opts,
                 std::vector<JobOutcome>* outcomes) {
  std::vector<JobOutcome> results(f.jobs.size());
  parallel_for(
      f.jobs.size(),
      [&](std::size_t i) {
        const fs::path dir = f.multi ? output_dir / f.jobs[i].name : output_dir;
        results[i] = run_job(f.jobs[i], dir, opts);
      },
      opts.workers);
  int code = kExitPass;
  for (const auto& r : results) {
    if (r.exit_code == kExitValidation) code = kExitValidation;
    if (r.exit_code == kExitAssertion && code == kExitPass) code = kExitAssertion;
  }
  if (f.multi) {
    Json jobs = Json::array();
    for (const auto& r : results) {
      jobs.push_back(Json{{"name", r.name}, {"exit_code", r.exit_code}, {"message", r.message}});
    }
    write_json(output_dir / "jobs.json", Json{{"exit_code", code}, {"jobs", jobs}});
  }
  if (outcomes) *outcomes = std::move(results);
  return code;
}

}  // namespace gevlab
