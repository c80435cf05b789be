#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "manifest.hpp"
#include "nhscat/born.hpp"
#include "nhscat/designer.hpp"
#include "nhscat/errors.hpp"
#include "nhscat/kernel_io.hpp"
#include "nhscat/solver.hpp"
#include "nhscat/symmetry.hpp"

namespace nhscat::cli {

namespace {

using nlohmann::json;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::vector<double> points() const { return n == 1 ? std::vector<double>{lo} : linspace(lo, hi, n); }
};

// "kmin:kmax:n"
Range parse_range(const std::string& text, const std::string& flag) {
  Range r;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  long long n = 0;
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof())
    throw InputError(flag + " expects kmin:kmax:n, got '" + text + "'");
  if (!(r.lo > 0.0) || !(r.hi >= r.lo) || n < 1 || (n > 1 && !(r.hi > r.lo)))
    throw InputError(flag + " needs 0 < kmin < kmax and n >= 1, got '" + text + "'");
  r.n = static_cast<std::size_t>(n);
  return r;
}

struct SolverFlags {
  std::size_t n_grid;
  std::string quadrature;
  double tolerance;
  double graded_finest;
  double graded_max_panel;

  explicit SolverFlags(const SolverConfig& c)
      : n_grid(c.n_grid),
        quadrature(c.quadrature == QuadratureRule::simpson ? "simpson" : "trapezoid"),
        tolerance(c.tolerance),
        graded_finest(c.graded_finest),
        graded_max_panel(c.graded_max_panel) {}

  SolverConfig config() const {
    SolverConfig c;
    c.n_grid = n_grid;
    c.quadrature = quadrature == "simpson" ? QuadratureRule::simpson : QuadratureRule::trapezoid;
    c.tolerance = tolerance;
    c.graded_finest = graded_finest;
    c.graded_max_panel = graded_max_panel;
    c.validate();
    return c;
  }

  json grid() const {
    return {{"n_grid", n_grid},
            {"quadrature", quadrature},
            {"tolerance", tolerance},
            {"graded_finest", graded_finest},
            {"graded_max_panel", graded_max_panel}};
  }
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--n-grid", f.n_grid, "Quadrature points for polynomial kernels");
  app->add_option("--quadrature", f.quadrature, "Nystrom rule")
      ->check(CLI::IsMember({"trapezoid", "simpson"}));
  app->add_option("--tolerance", f.tolerance, "Relative residual allowed in the linear solve");
  app->add_option("--graded-finest", f.graded_finest, "Innermost panel of the inverse-square mesh, in epsilon");
  app->add_option("--graded-max-panel", f.graded_max_panel, "Largest panel of the inverse-square mesh");
}

json cjson(cplx z) { return complex_to_json(z); }

json quad_json(const AmplitudeQuad& q) {
  return {{"Tl", cjson(q.Tl)}, {"Tr", cjson(q.Tr)}, {"Rl", cjson(q.Rl)}, {"Rr", cjson(q.Rr)}};
}

json abs2_json(const AmplitudeQuad& q) {
  return {{"Tl", std::norm(q.Tl)}, {"Tr", std::norm(q.Tr)}, {"Rl", std::norm(q.Rl)}, {"Rr", std::norm(q.Rr)}};
}

json amplitudes_json(const ScatteringAmplitudes& a) {
  json j = {{"k", a.k}, {"amplitudes", quad_json(a.quad())}, {"abs2", abs2_json(a.quad())}};
  if (a.hatted) {
    j["hatted"] = quad_json(*a.hatted);
    j["unitarity_residuals"] = generalized_unitarity_residuals(a);
  }
  return j;
}

json vector_json(const Eigen::VectorXcd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(cjson(v(i)));
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// State shared by all subcommands of one invocation.
struct Run {
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;
  std::string stdout_text;

  void print(const std::string& text) { stdout_text += text; }

  PotentialKernel read_kernel(const std::string& path) {
    manifest.inputs[path] = sha256_file(path);
    return read_kernel_file(path);
  }

  void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << content;
    f.close();
    if (!f) throw InputError("failed writing " + path);
    manifest.outputs[path] = sha256_hex(content);
  }
};

// --- subcommands -----------------------------------------------------------

struct SolveArgs {
  std::string kernel;
  double k = 1.0;
  bool adjoint = false;
  std::string out;
  SolverFlags solver{SolverConfig{}};
};

int cmd_solve(Run& run, const SolveArgs& a) {
  const PotentialKernel kernel = run.read_kernel(a.kernel);
  const ScatteringAmplitudes amps = scatter_all(kernel, a.k, a.solver.config(), a.adjoint);
  const std::string text = dump(amplitudes_json(amps));
  if (a.out.empty())
    run.print(text);
  else
    run.write_file(a.out, text);
  return ok;
}

struct SweepArgs {
  std::string kernel;
  std::string grid;
  std::string out;
  SolverFlags solver{SolverConfig{}};
};

int cmd_sweep(Run& run, const SweepArgs& a) {
  const PotentialKernel kernel = run.read_kernel(a.kernel);
  const std::vector<double> ks = parse_range(a.grid, "--grid").points();
  const SweepTable table = k_sweep(kernel, ks, a.solver.config());
  const std::string text = sweep_csv(table);
  if (a.out.empty())
    run.print(text);
  else
    run.write_file(a.out, text);
  for (const SweepRow& row : table.rows) {
    if (!row.amplitudes) {
      run.err << "solver failed at k = " << format_double(row.k) << ": " << row.error << '\n';
      return numerical_error;
    }
  }
  return ok;
}

struct ClassifyArgs {
  std::string kernel;
  double tol = 1e-9;
  std::string out;
};

int cmd_classify(Run& run, const ClassifyArgs& a) {
  const PotentialKernel kernel = run.read_kernel(a.kernel);
  const SymmetryReport report = check_symmetries(kernel, a.tol);
  json residuals = json::object(), verdicts = json::object();
  for (Symmetry s : all_symmetries) {
    residuals[std::string(to_string(s))] = report.residual(s);
    verdicts[std::string(to_string(s))] = report.holds(s);
  }
  json allowed = json::array(), forbidden = json::object();
  for (const DeviceVerdict& v : allowed_devices(report)) {
    if (v.allowed) allowed.push_back(to_string(v.code));
    json by = json::array();
    for (Symmetry s : v.forbidden_by) by.push_back(std::string(to_string(s)));
    forbidden[to_string(v.code)] = by;
  }
  json relations = json::array();
  for (const AmplitudeRelation& r : predicted_amplitude_relations(report))
    relations.push_back({{"symmetry", std::string(to_string(r.source))},
                         {"relation", r.text},
                         {"needs_adjoint", r.needs_adjoint}});
  const json j = {{"tol", a.tol},
                  {"residuals", residuals},
                  {"verdicts", verdicts},
                  {"allowed_devices", allowed},
                  {"forbidden_by", forbidden},
                  {"predicted_relations", relations}};
  if (a.out.empty())
    run.print(dump(j));
  else
    run.write_file(a.out, dump(j));
  return ok;
}

struct DesignArgs {
  std::string device;
  double k0 = 1.0;
  std::string constraint;
  unsigned long long seed = 1;
  std::string out;
  std::string csv;
  std::string sweep = "0.8:1.2:41";
  SolverFlags solver{design_solver_config()};
};

int cmd_design(Run& run, const DesignArgs& a) {
  DeviceSpec spec;
  const DeviceCode code = parse_device(a.device);
  spec.code = code;
  spec.k0 = a.k0;
  spec.targets = default_targets(code);
  spec.constraint = a.constraint.empty() ? default_constraint(code) : parse_constraint(a.constraint);
  spec.seed = a.seed;
  const Range range = parse_range(a.sweep, "--sweep");
  const SolverConfig config = a.solver.config();

  const DesignResult result = design_device(spec);
  const DesignVerification check =
      verify_design(result, spec.targets, spec.k0, range.lo, range.hi, range.n, config);

  const json j = {{"device", to_string(code)},
                  {"constraint", to_string(spec.constraint)},
                  {"k0", spec.k0},
                  {"seed", spec.seed},
                  {"targets", quad_json(spec.targets)},
                  {"kernel", kernel_to_json(result.kernel)},
                  {"wave_left", vector_json(result.wave_left)},
                  {"wave_right", vector_json(result.wave_right)},
                  {"verification", amplitudes_json(result.verification)},
                  {"residual", result.residual},
                  {"equation_residual", result.equation_residual},
                  {"iterations", result.iterations},
                  {"restarts", result.restarts},
                  {"sweep",
                   {{"k0_error", check.k0_error},
                    {"max_step", check.max_step},
                    {"passed", check.passed},
                    {"message", check.message}}}};
  run.print(dump(j));
  if (!a.out.empty()) run.write_file(a.out, dump(kernel_to_json(result.kernel)));
  std::string csv_path = a.csv;
  if (csv_path.empty() && !a.out.empty())
    csv_path = std::filesystem::path(a.out).replace_extension(".csv").string();
  if (!csv_path.empty()) run.write_file(csv_path, sweep_csv(check.table));
  if (!check.passed) {
    run.err << "design verification failed: " << check.message << '\n';
    return verification_failed;
  }
  return ok;
}

struct BornArgs {
  std::optional<double> alpha;
  bool tune = false;
  double epsilon = 1e-4;
  double kref = 1.0;
  double target = 1.0;
  double window = 1.0;
  std::string sweep = "0.5:5:40";
  std::string out;
  std::string csv;
  SolverFlags solver{SolverConfig{}};
};

int cmd_born(Run& run, const BornArgs& a) {
  if (a.tune == a.alpha.has_value()) throw InputError("born-design needs exactly one of --alpha and --tune");
  const SolverConfig config = a.solver.config();
  const Range range = parse_range(a.sweep, "--sweep");

  double alpha = a.alpha.value_or(0.0);
  if (a.tune) {
    TuneOptions options;
    options.d = a.window;
    alpha = tune_alpha(a.epsilon, a.kref, a.target, config, options);
  }
  const RegularizedInverseSquare potential = design_broadband_reflector(alpha, a.epsilon, a.window);
  const SweepTable table = k_sweep(potential, range.points(), config);

  json band = json::object();
  const auto extent = [&](const char* name, auto get) {
    double lo = INFINITY, hi = -INFINITY;
    for (const SweepRow& row : table.rows) {
      if (!row.amplitudes) continue;
      const double v = get(*row.amplitudes);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    band[name] = json::array({lo, hi});
  };
  extent("abs2_Tl", [](const ScatteringAmplitudes& s) { return std::norm(s.Tl); });
  extent("abs2_Tr", [](const ScatteringAmplitudes& s) { return std::norm(s.Tr); });
  extent("abs2_Rl", [](const ScatteringAmplitudes& s) { return std::norm(s.Rl); });
  extent("abs2_Rr", [](const ScatteringAmplitudes& s) { return std::norm(s.Rr); });

  const BornPrediction born = born_reflections(potential, a.kref);
  const ScatteringAmplitudes exact = scatter_all(potential, a.kref, config);
  const json j = {{"potential", kernel_to_json(potential)},
                  {"alpha", alpha},
                  {"alpha_times_4pi", alpha * 4.0 * std::numbers::pi},
                  {"tuned", a.tune},
                  {"kref", a.kref},
                  {"reference",
                   {{"exact", amplitudes_json(exact)},
                    {"born", {{"Rl", cjson(born.Rl)}, {"Rr", cjson(born.Rr)}, {"abs2_T", born.T_abs2}}}}},
                  {"sweep_extent", band}};
  run.print(dump(j));
  if (!a.out.empty()) run.write_file(a.out, dump(kernel_to_json(potential)));
  if (!a.csv.empty()) run.write_file(a.csv, sweep_csv(table));
  for (const SweepRow& row : table.rows) {
    if (!row.amplitudes) {
      run.err << "solver failed at k = " << format_double(row.k) << ": " << row.error << '\n';
      return numerical_error;
    }
  }
  return ok;
}

struct VerifyArgs {
  std::string kernel;
  std::string grid = "0.5:2:16";
  std::vector<std::string> claims;
  double tol = 1e-7;
  double symmetry_tol = 1e-9;
  std::string out;
  SolverFlags solver{design_solver_config()};
};

int cmd_verify(Run& run, const VerifyArgs& a) {
  const PotentialKernel kernel = run.read_kernel(a.kernel);
  std::vector<Symmetry> claimed;
  for (const std::string& c : a.claims) {
    const auto s = parse_symmetry(c);
    if (!s) throw InputError("unknown symmetry '" + c + "' in --claim");
    claimed.push_back(*s);
  }
  const SolverConfig config = a.solver.config();
  const SymmetryReport report = check_symmetries(kernel, a.symmetry_tol);
  const std::vector<AmplitudeRelation> relations = predicted_amplitude_relations(report);

  struct Predicate {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    std::optional<double> worst_k;
  };
  std::vector<Predicate> predicates;
  for (Symmetry s : claimed)
    predicates.push_back({"claimed symmetry " + std::string(to_string(s)), report.residual(s), a.symmetry_tol, {}});
  const std::size_t first_k = predicates.size();
  const char* unitarity_names[4] = {"unitarity left", "unitarity right", "unitarity cross 1", "unitarity cross 2"};
  for (const char* name : unitarity_names) predicates.push_back({name, 0.0, a.tol, {}});
  for (const AmplitudeRelation& r : relations)
    predicates.push_back({std::string(to_string(r.source)) + ": " + r.text, 0.0, a.tol, {}});

  const auto record = [](Predicate& p, double value, double k) {
    if (!p.worst_k || value > p.value) {
      p.value = value;
      p.worst_k = k;
    }
  };
  for (double k : parse_range(a.grid, "--grid").points()) {
    const ScatteringAmplitudes amps = scatter_all(kernel, k, config, true);
    const auto u = generalized_unitarity_residuals(amps);
    for (std::size_t i = 0; i < 4; ++i) record(predicates[first_k + i], u[i], k);
    for (std::size_t i = 0; i < relations.size(); ++i) record(predicates[first_k + 4 + i], relations[i].defect(amps), k);
  }

  json checks = json::array(), failed = json::array();
  for (const Predicate& p : predicates) {
    const bool pass = p.value < p.limit;
    json c = {{"predicate", p.name}, {"value", p.value}, {"limit", p.limit}, {"passed", pass}};
    if (p.worst_k) c["worst_k"] = *p.worst_k;
    checks.push_back(c);
    if (!pass) failed.push_back(p.name);
  }
  const json j = {{"checks", checks}, {"failed", failed}, {"passed", failed.empty()}};
  if (a.out.empty())
    run.print(dump(j));
  else
    run.write_file(a.out, dump(j));
  if (!failed.empty()) {
    run.err << "verification failed:\n";
    for (const auto& name : failed) run.err << "  " << name.get<std::string>() << '\n';
    return verification_failed;
  }
  return ok;
}

// --- dispatch ----------------------------------------------------------------

void record_flags(RunManifest& m, const CLI::App* sub) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt == sub->get_help_ptr() || opt->get_lnames().empty()) continue;
    const std::string name = "--" + opt->get_lnames().front();
    if (name == "--manifest") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    m.flags[name] = value;
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DomainError*>(&e)) return input_error;
  if (dynamic_cast<const NumericalError*>(&e)) return numerical_error;
  return input_error;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering amplitudes, symmetry classification and inverse design for nonlocal potentials",
               "nhscat"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file; options go under a [subcommand] table");
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", NHSCAT_VERSION);

  std::string manifest_path;
  const auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest_path, "Write a run manifest (JSON) here");
    sub->configurable();
  };

  SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Amplitudes of one kernel at one k");
  s->add_option("--kernel", solve.kernel, "Kernel JSON file")->required();
  s->add_option("--k", solve.k, "Wavenumber k d")->required();
  s->add_flag("--adjoint", solve.adjoint, "Also solve H^dagger and report unitarity residuals");
  s->add_option("--out", solve.out, "Write the JSON here instead of stdout");
  add_solver_flags(s, solve.solver);
  add_manifest(s);

  SweepArgs sweep;
  CLI::App* sw = app.add_subcommand("sweep", "Amplitude table over a k grid (CSV)");
  sw->add_option("--kernel", sweep.kernel, "Kernel JSON file")->required();
  sw->add_option("--grid", sweep.grid, "kmin:kmax:n")->required();
  sw->add_option("--out", sweep.out, "Write the CSV here instead of stdout");
  add_solver_flags(sw, sweep.solver);
  add_manifest(sw);

  ClassifyArgs classify;
  CLI::App* c = app.add_subcommand("classify", "Symmetry residuals and allowed devices");
  c->add_option("--kernel", classify.kernel, "Kernel JSON file")->required();
  c->add_option("--tol", classify.tol, "Symmetry verdict threshold");
  c->add_option("--out", classify.out, "Write the JSON here instead of stdout");
  add_manifest(c);

  DesignArgs design;
  CLI::App* d = app.add_subcommand("design", "Polynomial kernel for an asymmetric device");
  d->add_option("--device", design.device, "tra, tr, ta, trr or trt")
      ->required()
      ->check(CLI::IsMember({"tra", "tr", "ta", "trr", "trt"}));
  d->add_option("--k0", design.k0, "Design wavenumber k0 d");
  d->add_option("--constraint", design.constraint, "none, viii or pt (default depends on the device)")
      ->check(CLI::IsMember({"none", "viii", "pt"}));
  d->add_option("--seed", design.seed, "Seed for optimizer restarts");
  d->add_option("--out", design.out, "Kernel JSON output");
  d->add_option("--csv", design.csv, "Verification sweep CSV (default: --out with .csv)");
  d->add_option("--sweep", design.sweep, "Verification grid kmin:kmax:n");
  add_solver_flags(d, design.solver);
  add_manifest(d);

  BornArgs born;
  CLI::App* b = app.add_subcommand("born-design", "Broadband one-way reflector alpha/(x - i eps)^2");
  b->add_option("--alpha", born.alpha, "Strength alpha (hbar^2/m units)");
  b->add_flag("--tune", born.tune, "Tune alpha so that |R^l(kref)|^2 = target");
  b->add_option("--epsilon", born.epsilon, "Regularization eps/d");
  b->add_option("--kref", born.kref, "Reference k d for tuning");
  b->add_option("--target", born.target, "Target |R^l|^2 for tuning");
  b->add_option("--window", born.window, "Truncation half-width of the potential");
  b->add_option("--sweep", born.sweep, "Sweep grid kmin:kmax:n");
  b->add_option("--out", born.out, "Potential JSON output");
  b->add_option("--csv", born.csv, "Sweep CSV output");
  add_solver_flags(b, born.solver);
  add_manifest(b);

  VerifyArgs verify;
  CLI::App* v = app.add_subcommand("verify", "Check unitarity, claimed symmetries and predicted relations");
  v->add_option("--kernel", verify.kernel, "Kernel JSON file")->required();
  v->add_option("--grid", verify.grid, "kmin:kmax:n");
  v->add_option("--claim", verify.claims, "Symmetry codes the kernel is claimed to satisfy")->delimiter(',');
  v->add_option("--tol", verify.tol, "Limit for unitarity and relation defects");
  v->add_option("--symmetry-tol", verify.symmetry_tol, "Limit for symmetry residuals");
  v->add_option("--out", verify.out, "Write the JSON report here instead of stdout");
  add_solver_flags(v, verify.solver);
  add_manifest(v);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : input_error;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run{out, err, {}, {}};
  run.manifest.command = sub->get_name();
  run.manifest.library_version = NHSCAT_VERSION;
  record_flags(run.manifest, sub);

  int code = ok;
  try {
    if (sub == s) {
      run.manifest.grid = solve.solver.grid();
      code = cmd_solve(run, solve);
    } else if (sub == sw) {
      run.manifest.grid = sweep.solver.grid();
      code = cmd_sweep(run, sweep);
    } else if (sub == c) {
      code = cmd_classify(run, classify);
    } else if (sub == d) {
      run.manifest.seed = design.seed;
      run.manifest.grid = design.solver.grid();
      code = cmd_design(run, design);
    } else if (sub == b) {
      run.manifest.grid = born.solver.grid();
      code = cmd_born(run, born);
    } else {
      run.manifest.grid = verify.solver.grid();
      code = cmd_verify(run, verify);
    }
  } catch (const std::exception& e) {
    out << run.stdout_text;
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  out << run.stdout_text;
  if (!manifest_path.empty()) {
    if (!run.stdout_text.empty()) run.manifest.outputs["-"] = sha256_hex(run.stdout_text);
    try {
      std::ofstream f(manifest_path, std::ios::binary);
      f << dump(run.manifest.to_json());
      if (!f) throw InputError("cannot write " + manifest_path);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return input_error;
    }
  }
  return code;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace nhscat::cli
