// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--cli PATH_TO_NHSCAT] [--scratch DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

#include "generators.hpp"
#include "nhscat/born.hpp"
#include "nhscat/designer.hpp"
#include "nhscat/errors.hpp"
#include "nhscat/kernel_io.hpp"
#include "nhscat/oracle.hpp"
#include "nhscat/solver.hpp"
#include "nhscat/symmetry.hpp"
#include "square_well.hpp"

using namespace nhscat;
using nhscat::testing::Gen;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

SolverConfig simpson(std::size_t n) {
  SolverConfig c;
  c.n_grid = n;
  c.quadrature = QuadratureRule::simpson;
  return c;
}

double quad_distance(const AmplitudeQuad& a, const AmplitudeQuad& b) {
  return std::max({std::abs(a.Tl - b.Tl), std::abs(a.Tr - b.Tr), std::abs(a.Rl - b.Rl), std::abs(a.Rr - b.Rr)});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome free_space() {
  Gen g(101);
  const PolynomialKernel zero(1.0, Eigen::MatrixXcd::Zero(1, 1));
  const auto t0 = std::chrono::steady_clock::now();
  double err_t = 0.0, err_r = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = 5.0 * (1.0 - g.uniform(0.0, 1.0));  // (0, 5]
    const ScatteringAmplitudes a = scatter_all(zero, k);
    err_t = std::max({err_t, std::abs(a.Tl - 1.0), std::abs(a.Tr - 1.0)});
    err_r = std::max({err_r, std::abs(a.Rl), std::abs(a.Rr)});
  }
  const double t = seconds_since(t0);
  return {err_t < 1e-12 && err_r < 1e-12 && t < 1.0,
          fmt("max|T-1| = %.2e, max|R| = %.2e, %.3f s", err_t, err_r, t)};
}

Outcome oracle_equivalence() {
  Gen g(202);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const SampledKernel v = testing::random_smooth_sampled(g, 801, 1.0);
    const double k = g.uniform(0.2, 5.0);
    const ScatteringAmplitudes a = scatter_all(v, k, simpson(801));
    const OracleResult l = scatter_oracle(v, k, Side::left), r = scatter_oracle(v, k, Side::right);
    const cplx got[4] = {a.Tl, a.Rl, a.Tr, a.Rr};
    const cplx want[4] = {l.T, l.R, r.T, r.R};
    for (int c = 0; c < 4; ++c) {
      // Real and imaginary parts, each relative to the amplitude's modulus.
      const double scale = std::abs(want[c]);
      worst = std::max({worst, std::abs(got[c].real() - want[c].real()) / scale,
                        std::abs(got[c].imag() - want[c].imag()) / scale});
    }
  }
  const double t = seconds_since(t0);
  return {worst < 1e-6 && t < 60.0, fmt("worst relative difference %.2e, %.1f s", worst, t)};
}

Outcome square_well() {
  double worst = 0.0;
  for (double v : {-1.0, 0.5}) {
    const SampledKernel well =
        SampledKernel::local_from_function(1.0, 1601, [v](double) { return cplx(v, 0.0); });
    for (int i = 0; i < 5; ++i) {
      const double k = 0.3 + 0.9 * i;
      const auto exact = testing::square_well(v, 1.0, k);
      const ScatteringAmplitudes a = scatter_all(well, k, simpson(1601));
      worst = std::max({worst, std::abs(a.Tl - exact.T), std::abs(a.Tr - exact.T), std::abs(a.Rl - exact.R),
                        std::abs(a.Rr - exact.R)});
    }
  }
  return {worst < 1e-8, fmt("10 k values, wells V = -1 and 0.5, N = 1601: max error %.2e", worst)};
}

Outcome generalized_unitarity() {
  Gen g(303);
  double worst_unitarity = 0.0, worst_recon = 0.0;
  int reconstructed = 0;
  for (int i = 0; i < 50; ++i) {
    const PotentialKernel v = i % 2 ? PotentialKernel(testing::random_polynomial(g, 3, 3, 0.8))
                                    : PotentialKernel(testing::random_smooth_sampled(g, 201, 1.5));
    const double k = g.uniform(0.2, 4.0);
    const ScatteringAmplitudes a = scatter_all(v, k, simpson(401), true);
    for (double r : generalized_unitarity_residuals(a)) worst_unitarity = std::max(worst_unitarity, r);
    const double det = std::abs(a.Tl * a.Tr - a.Rl * a.Rr);
    if (det > 1e-6) {
      ++reconstructed;
      worst_recon = std::max(worst_recon, quad_distance(hatted_from_unhatted(a.quad()), *a.hatted));
    }
  }
  return {worst_unitarity < 1e-8 && worst_recon < 1e-8,
          fmt("max residual %.2e; hatted_from_unhatted vs adjoint solve %.2e over %d kernels", worst_unitarity,
              worst_recon, reconstructed)};
}

Outcome equivariance() {
  Gen g(404);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PotentialKernel v = testing::random_polynomial(g, 3, 3, 0.5);
    const double k = g.uniform(0.2, 4.0);
    const ScatteringAmplitudes a = scatter_all(v, k, simpson(801), true);
    for (Symmetry s : all_symmetries) {
      const ScatteringAmplitudes t = scatter_all(transform(v, s), k, simpson(801));
      worst = std::max(worst, quad_distance(t.quad(), equivariant_amplitudes(a, s)));
    }
  }
  return {worst < 1e-8, fmt("20 kernels x 8 transforms, Simpson N = 801: max deviation %.2e", worst)};
}

Outcome symmetry_consequences() {
  Gen g(505);
  double worst = 0.0;
  for (Symmetry s : {Symmetry::II, Symmetry::III, Symmetry::V, Symmetry::VII}) {
    for (int i = 0; i < 5; ++i) {
      const PotentialKernel v = symmetrize(testing::random_polynomial(g, 3, 3, 0.6), s);
      const ScatteringAmplitudes a = scatter_all(v, g.uniform(0.2, 4.0), simpson(401));
      double d = 0.0;
      if (s == Symmetry::II || s == Symmetry::III || s == Symmetry::VII)
        d = std::max(d, std::abs(std::abs(a.Tl) - std::abs(a.Tr)));
      if (s == Symmetry::II || s == Symmetry::III || s == Symmetry::V)
        d = std::max(d, std::abs(std::abs(a.Rl) - std::abs(a.Rr)));
      worst = std::max(worst, d);
    }
  }
  double worst_sweep = 0.0;
  for (int i = 0; i < 2; ++i) {
    const PotentialKernel v = symmetrize(testing::random_polynomial(g, 3, 3, 0.6), Symmetry::V);
    for (const SweepRow& row : k_sweep(v, linspace(0.1, 5.0, 50), simpson(401)).rows) {
      if (!row.amplitudes) return {false, "class V sweep failed at k = " + std::to_string(row.k) + ": " + row.error};
      worst_sweep = std::max(worst_sweep, std::abs(std::abs(row.amplitudes->Rl) - std::abs(row.amplitudes->Rr)));
    }
  }
  return {worst < 1e-8 && worst_sweep < 1e-8,
          fmt("classes II, III, V, VII: max modulus defect %.2e; class V 50-point sweeps: %.2e", worst, worst_sweep)};
}

Outcome equivalence_table() {
  Gen g(606);
  constexpr double machine = 4.0 * std::numeric_limits<double>::epsilon();
  double worst = 0.0;
  int disagreements = 0, pairs_true = 0, pairs_false = 0;
  for (Symmetry first : all_symmetries) {
    if (first == Symmetry::I) continue;
    const auto row = equivalence_pairs(first);
    for (int i = 0; i < 10; ++i) {
      PotentialKernel v = symmetrize(testing::random_polynomial(g, 4, 4, 0.5), first);
      // Odd kernels also get one pair's first member, so both sides of that pair hold.
      if (i % 2) v = symmetrize(v, row[static_cast<std::size_t>(i / 2 % 3)].first);
      const SymmetryReport r = check_symmetries(v);
      for (const EquivalenceCheck& c : equivalence_table_check(v, first)) {
        if (!c.agree) ++disagreements;
        const double rx = r.residual(c.pair.first), ry = r.residual(c.pair.second);
        worst = std::max(worst, std::abs(rx - ry));
        (r.holds(c.pair.first) ? pairs_true : pairs_false)++;
      }
    }
  }
  return {disagreements == 0 && worst <= machine,
          fmt("70 kernels: %d verdict disagreements, max |residual difference| %.1e (%d true, %d false pairs)",
              disagreements, worst, pairs_true, pairs_false)};
}

std::map<DeviceCode, DesignResult> designs;

Outcome device_designs() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  for (DeviceCode code : {DeviceCode::TR_A, DeviceCode::T_R, DeviceCode::T_A, DeviceCode::TR_R, DeviceCode::TR_T}) {
    DeviceSpec spec;
    spec.code = code;
    spec.targets = default_targets(code);
    spec.constraint = default_constraint(code);
    const DesignResult& r = designs.emplace(code, design_device(spec)).first->second;
    const double forward = quad_distance(r.verification.quad(), spec.targets);
    const DesignVerification v = verify_design(r, spec.targets, 1.0, 0.8, 1.2, 41, design_solver_config());
    ok = ok && forward < 1e-6 && v.passed;
    detail += fmt("%s %.1e/%.2f ", to_string(code).c_str(), std::max(forward, v.k0_error), v.max_step);
  }
  const double t = seconds_since(t0);
  return {ok && t < 300.0, "error at k0 / largest sweep step: " + detail + fmt("; %.1f s", t)};
}

Outcome adjoint_divergence() {
  if (designs.size() != 5) return {false, "designs unavailable"};
  std::string detail;
  bool ok = true;
  for (DeviceCode code : {DeviceCode::TR_A, DeviceCode::T_R, DeviceCode::T_A}) {
    try {
      hatted_from_unhatted(designs.at(code).verification.quad());
      ok = false;
      detail += to_string(code) + " did not diverge; ";
    } catch (const DivergenceError&) {
      detail += to_string(code) + " diverges; ";
    }
  }
  const double err =
      quad_distance(hatted_from_unhatted(designs.at(DeviceCode::TR_R).verification.quad()), {0.0, -1.0, -1.0, -1.0});
  return {ok && err < 1e-6, detail + fmt("TR/R hatted error %.2e", err)};
}

Outcome broadband_reflector() {
  const auto t0 = std::chrono::steady_clock::now();
  const double eps = 1e-4;
  SolverConfig c;
  c.graded_max_panel = 0.5;
  TuneOptions opt;
  opt.d = 4.0;
  const double alpha = tune_alpha(eps, 1.0, 1.0, c, opt);
  const double expected = 1.225 / (4.0 * pi);
  const RegularizedInverseSquare v = design_broadband_reflector(alpha, eps, opt.d);
  double rl_lo = INFINITY, rl_hi = -INFINITY, rr_hi = 0.0, t_lo = INFINITY, t_hi = -INFINITY;
  for (const SweepRow& row : k_sweep(v, linspace(0.5, 5.0, 40), c).rows) {
    if (!row.amplitudes) return {false, "sweep failed at k = " + std::to_string(row.k) + ": " + row.error};
    const ScatteringAmplitudes& a = *row.amplitudes;
    rl_lo = std::min(rl_lo, std::norm(a.Rl));
    rl_hi = std::max(rl_hi, std::norm(a.Rl));
    rr_hi = std::max(rr_hi, std::norm(a.Rr));
    t_lo = std::min({t_lo, std::norm(a.Tl), std::norm(a.Tr)});
    t_hi = std::max({t_hi, std::norm(a.Tl), std::norm(a.Tr)});
  }
  // Truncation monitor: the same tuning with the window doubled.
  TuneOptions wide = opt;
  wide.d = 2.0 * opt.d;
  const double alpha_wide = tune_alpha(eps, 1.0, 1.0, c, wide);
  const double t = seconds_since(t0);
  const bool ok = std::abs(alpha / expected - 1.0) <= 0.05 && rl_lo >= 0.9 && rl_hi <= 1.1 && rr_hi < 0.05 &&
                  t_lo >= 0.95 && t_hi <= 1.05 && t < 300.0;
  return {ok, fmt("4 pi alpha = %.4f (window 4; window 8 gives %.4f); |Rl|^2 in [%.3f, %.3f], max |Rr|^2 = %.1e, "
                  "|T|^2 in [%.3f, %.3f]; %.1f s",
                  4.0 * pi * alpha, 4.0 * pi * alpha_wide, rl_lo, rl_hi, rr_hi, t_lo, t_hi, t)};
}

Outcome born_scaling() {
  // Exact and Born amplitudes of the same truncated potential on the same mesh.
  const auto rel_error = [](double alpha) {
    const RegularizedInverseSquare v{alpha, 1e-4, 1.0, false};
    const ScatteringAmplitudes exact = scatter_all(v, 1.0);
    const BornPrediction born = born_reflections(PotentialKernel(v), 1.0);
    return std::abs(exact.Rl - born.Rl) / std::abs(exact.Rl);
  };
  const double e1 = rel_error(0.02), e2 = rel_error(0.01), e3 = rel_error(0.005);
  const double r1 = e1 / e2, r2 = e2 / e3;
  const bool ok = std::abs(r1 - 2.0) <= 0.4 && std::abs(r2 - 2.0) <= 0.4;
  return {ok, fmt("relative errors %.3e, %.3e, %.3e for alpha = 0.02, 0.01, 0.005; ratios %.3f, %.3f", e1, e2, e3,
                  r1, r2)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome cli_determinism(const std::string& cli, const fs::path& dir) {
  if (cli.empty()) return {false, "no --cli executable given"};
  fs::create_directories(dir);
  const auto at = [&](const std::string& name) { return (dir / name).string(); };

  Gen g(707);
  write_kernel_file(at("smooth.json"), testing::random_smooth_sampled(g, 101, 1.0));
  write_kernel_file(at("real.json"), symmetrize(testing::random_polynomial(g, 3, 3, 0.5), Symmetry::V));

  // Each command: arguments and the files it writes besides stdout.
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"solve --kernel " + at("smooth.json") + " --k 1.3 --adjoint --quadrature simpson --out " + at("solve.json"),
       {"solve.json"}},
      {"sweep --kernel " + at("smooth.json") + " --grid 0.5:3:8 --quadrature simpson --out " + at("sweep.csv"),
       {"sweep.csv"}},
      {"classify --kernel " + at("real.json") + " --out " + at("classify.json"), {"classify.json"}},
      {"design --device trr --seed 7 --sweep 0.9:1.1:3 --out " + at("trr.json"), {"trr.json", "trr.csv"}},
      {"born-design --tune --sweep 0.5:5:6 --out " + at("born.json") + " --csv " + at("born.csv"),
       {"born.json", "born.csv"}},
      {"verify --kernel " + at("real.json") + " --claim V --grid 0.5:2:4 --out " + at("verify.json"),
       {"verify.json"}},
  };

  std::string detail;
  bool ok = true;
  for (const auto& [args, files] : commands) {
    const std::string name = args.substr(0, args.find(' '));
    std::vector<std::string> runs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::string out = at(name + ".stdout");
      const std::string line = "'" + cli + "' " + args + " --manifest " + at(name + ".manifest.json") + " > '" +
                               out + "' 2> '" + at(name + ".stderr") + "'";
      codes[rep] = std::system(line.c_str());
      runs[rep].push_back(slurp(out));
      runs[rep].push_back(slurp(at(name + ".manifest.json")));
      for (const std::string& f : files) runs[rep].push_back(slurp(at(f)));
    }
    // Files written by the command must exist and be non-empty; stdout may be empty when --out is given.
    const bool written = std::all_of(runs[0].begin() + 2, runs[0].end(), [](const std::string& b) { return !b.empty(); });
    const bool same = codes[0] == 0 && codes[1] == 0 && written && runs[0] == runs[1];
    ok = ok && same;
    detail += name + (same ? " ok; " : codes[0] ? " exit " + std::to_string(codes[0]) + "; " : " differs; ");
  }
  return {ok, detail.substr(0, detail.size() - 2)};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path scratch = fs::temp_directory_path() / ("nhscat_acceptance_" + std::to_string(::getpid()));
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli")
      cli = argv[i + 1];
    else if (flag == "--scratch")
      scratch = argv[i + 1];
    else {
      std::fprintf(stderr, "usage: %s [--cli PATH] [--scratch DIR]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"free space", free_space},
      {"oracle equivalence", oracle_equivalence},
      {"square well", square_well},
      {"generalized unitarity", generalized_unitarity},
      {"equivariance", equivariance},
      {"symmetry consequences", symmetry_consequences},
      {"equivalence table", equivalence_table},
      {"device designs", device_designs},
      {"adjoint divergence", adjoint_divergence},
      {"broadband reflector", broadband_reflector},
      {"Born scaling", born_scaling},
      {"CLI determinism", [&] { return cli_determinism(cli, scratch); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s %2zu %-22s %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
