#include "parastep/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "parastep/errors.hpp"
#include "parastep/spec_file.hpp"

namespace parastep {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitDisagree = 3;

// Flags shared by every subcommand; unset flags fall back to the spec file.
struct Flags {
  std::string spec;
  std::optional<std::string> beta;
  std::optional<std::vector<double>> z0;
  std::optional<long long> n;
  std::optional<double> tol;
  std::optional<double> eps_beta;
  std::optional<double> zero_threshold;
  std::optional<long long> window;
  std::optional<std::string> output;
  std::optional<std::string> csv;
  std::vector<double> grid{10.0, 1e6, 6.0};
  std::string kind;
  std::vector<double> z{0.0, 2.0};
};

struct Resolved {
  ParabolicMap map;
  RunConfig run;
  NumericOptions numeric;
};

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("spec", f.spec, "Map spec JSON file")->required();
  sub.add_option("--beta", f.beta, "Override beta (number or constant expression such as pi/4)");
  sub.add_option("--z0", f.z0, "Starting point x,y")->delimiter(',')->expected(2);
  sub.add_option("--n", f.n, "Number of orbit steps");
  sub.add_option("--tol", f.tol, "Accumulated evaluation tolerance of an orbit");
  sub.add_option("--eps-beta", f.eps_beta, "Band around 0 in which beta_tilde counts as zero");
  sub.add_option("--zero-threshold", f.zero_threshold, "Step size below which the orbit counts as zero step");
  sub.add_option("--window", f.window, "Plateau window in steps (0 = n/10)");
  sub.add_option("--output", f.output, "Prefix for output files");
}

NumericOptions numeric_from_env() {
  NumericOptions o;
  if (const char* env = std::getenv("PARASTEP_EVAL_BUDGET")) {
    const std::string_view s(env);
    std::size_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v == 0) {
      throw SpecError("PARASTEP_EVAL_BUDGET", "expected a positive integer, got '" + std::string(s) + "'");
    }
    o.max_evals = v;
  }
  return o;
}

Resolved resolve(const Flags& f) {
  const NumericOptions numeric = numeric_from_env();
  MapSpecFile spec = load_map_spec(f.spec, numeric);
  RunConfig& run = spec.run;
  if (f.beta) spec.beta = real_field(json(*f.beta), "--beta");
  if (f.z0) {
    if (!((*f.z0)[1] > 0.0)) throw SpecError("--z0", "the starting point must lie in the upper half-plane");
    run.z0 = HPoint((*f.z0)[0], (*f.z0)[1]);
  }
  if (f.n) {
    if (*f.n < 1) throw SpecError("--n", "the orbit needs at least one step");
    run.n = static_cast<std::size_t>(*f.n);
  }
  if (f.window) {
    if (*f.window < 0) throw SpecError("--window", "must be non-negative");
    run.window = static_cast<std::size_t>(*f.window);
  }
  if (f.tol) run.tol = *f.tol;
  if (f.eps_beta) run.eps_beta = *f.eps_beta;
  if (f.zero_threshold) run.zero_threshold = *f.zero_threshold;
  if (f.output) run.output = *f.output;
  check_run_config(run);
  return {ParabolicMap(spec.beta, spec.measure), run, numeric};
}

json config_json(const Resolved& r, const Flags& f) {
  json c = to_json(r.run);
  c["beta"] = r.map.beta();
  c["spec"] = f.spec;
  c["eval_budget"] = r.numeric.max_evals;
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SpecError("--output", "cannot write " + path);
  os << text;
}

std::string csv_number(double v) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

int cmd_classify(const Flags& f, std::ostream& out) {
  const Resolved r = resolve(f);
  const Classification c = classify(r.map, r.run.eps_beta, r.numeric);
  json j = to_json(c);
  j["config"] = config_json(r, f);
  out << j.dump(2) << '\n';
  return c.verdict == Verdict::Unknown ? kExitUnknown : kExitOk;
}

int cmd_orbit(const Flags& f, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(f);
  const OrbitTrace t = orbit(r.map, r.run.z0, r.run.n, r.run.tol, r.numeric);
  const std::string csv_path = f.csv.value_or(r.run.output + ".csv");
  {
    std::ofstream os(csv_path, std::ios::binary);
    if (!os) throw SpecError("--csv", "cannot write " + csv_path);
    write_csv(os, t);
  }
  json j = {{"config", config_json(r, f)},
            {"csv", csv_path},
            {"status", to_string(t.status)},
            {"steps", t.length()}};
  if (!t.valid()) {
    j["message"] = t.message;
    out << j.dump(2) << '\n';
    err << "orbit stopped early: " << t.message << '\n';
    return kExitError;
  }
  StepOptions so;
  so.zero_threshold = r.run.zero_threshold;
  so.plateau_window = r.run.window;
  so.require_bounded_y = integrability_profile(r.map.mu(), r.numeric).t_L1;
  j["empirical"] = to_json(empirical_step(t, so));
  j["pommerenke"] = t.length() >= 100 ? to_json(pommerenke_b(t)) : json(nullptr);
  if (f.output) write_file(r.run.output + ".json", j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_probe(const Flags& f, std::ostream& out) {
  const Resolved r = resolve(f);
  std::string csv;
  if (f.kind == "abel") {
    const auto res = abel_residual(r.map, HPoint(f.z[0], f.z[1]), r.run.z0, r.run.n, r.run.tol, r.numeric);
    csv = "k,residual\n";
    for (std::size_t k = 0; k < res.size(); ++k) csv += std::to_string(k) + "," + csv_number(res[k]) + "\n";
  } else {
    const double lo = f.grid[0];
    const double hi = f.grid[1];
    const double pts = f.grid[2];
    if (!(lo > 0.0) || !(hi >= lo) || pts < 1 || pts != std::floor(pts)) {
      throw SpecError("--grid", "expected ymin,ymax,points with 0 < ymin <= ymax and points >= 1");
    }
    std::vector<double> ys;
    const auto count = static_cast<std::size_t>(pts);
    for (std::size_t i = 0; i < count; ++i) {
      const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      ys.push_back(std::pow(10.0, std::log10(lo) + s * (std::log10(hi) - std::log10(lo))));
    }
    const auto vals = f.kind == "angular" ? angular_probe(r.map, ys, r.run.tol, r.numeric)
                                          : drift_probe(r.map, ys, r.run.tol, r.numeric);
    csv = "y,re,im\n";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      csv += csv_number(ys[i]) + "," + csv_number(vals[i].real()) + "," + csv_number(vals[i].imag()) + "\n";
    }
  }
  if (f.csv) {
    write_file(*f.csv, csv);
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_validate(const Flags& f, std::ostream& out) {
  const Resolved r = resolve(f);
  ValidateOptions vo;
  vo.eps_beta = r.run.eps_beta;
  vo.tol = r.run.tol;
  vo.zero_threshold = r.run.zero_threshold;
  vo.plateau_window = r.run.window;
  vo.numeric = r.numeric;
  const OrbitTrace t = orbit(r.map, r.run.z0, r.run.n, r.run.tol, r.numeric);
  if (!t.valid()) throw InvalidTrace("orbit stopped early: " + t.message);
  const ValidationReport rep = cross_validate(r.map, t, vo);
  json j = to_json(rep);
  j["config"] = config_json(r, f);
  if (f.output) write_file(r.run.output + ".json", j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  switch (rep.agree) {
    case Agreement::Yes:
      return kExitOk;
    case Agreement::No:
      return kExitDisagree;
    case Agreement::NotComparable:
      break;
  }
  return kExitUnknown;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic-step classifier for parabolic self-maps of the upper half-plane", "parastep"};
  app.require_subcommand(1, 1);
  Flags f;
  CLI::App* classify_cmd = app.add_subcommand("classify", "Analytic verdict as JSON");
  CLI::App* orbit_cmd = app.add_subcommand("orbit", "Orbit trace as CSV plus an empirical summary");
  CLI::App* probe_cmd = app.add_subcommand("probe", "Angular, drift or Abel-residual probe as CSV");
  CLI::App* validate_cmd = app.add_subcommand("validate", "Compare the analytic and empirical verdicts");
  for (CLI::App* sub : {classify_cmd, orbit_cmd, probe_cmd, validate_cmd}) add_common(*sub, f);
  orbit_cmd->add_option("--csv", f.csv, "Trace CSV path (default <output>.csv)");
  probe_cmd->add_option("--csv", f.csv, "Write the probe CSV here instead of stdout");
  probe_cmd->add_option("--grid", f.grid, "Heights ymin,ymax,points (log-spaced)")
      ->delimiter(',')
      ->expected(3);
  probe_cmd->add_option("--kind", f.kind, "angular, drift or abel")
      ->required()
      ->check(CLI::IsMember({"angular", "drift", "abel"}));
  probe_cmd->add_option("--z", f.z, "Second point x,y of the Abel residual")->delimiter(',')->expected(2);

  std::vector<std::string> argv_store{"parastep"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(f, out);
    if (orbit_cmd->parsed()) return cmd_orbit(f, out, err);
    if (probe_cmd->parsed()) return cmd_probe(f, out);
    return cmd_validate(f, out);
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace parastep
