#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "csv.hpp"
#include "generators.hpp"
#include "manifest.hpp"
#include "nhscat/kernel_io.hpp"
#include "nhscat/symmetry.hpp"

using namespace nhscat;
using nhscat::testing::Gen;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path p = fs::temp_directory_path() / ("nhscat_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string zero_kernel_file() {
  const std::string p = path("zero.json");
  write_kernel_file(p, PolynomialKernel(1.0, Eigen::MatrixXcd::Zero(1, 1)));
  return p;
}

cplx amp(const nlohmann::json& j, const char* name) { return complex_from_json(j["amplitudes"][name], name); }

}  // namespace

TEST_CASE("solve: zero kernel gives T = 1, R = 0") {
  const Result r = run({"solve", "--kernel", zero_kernel_file(), "--k", "1", "--adjoint"});
  REQUIRE(r.code == cli::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(amp(j, "Tl") == cplx(1.0, 0.0));
  CHECK(amp(j, "Tr") == cplx(1.0, 0.0));
  CHECK(amp(j, "Rl") == cplx(0.0, 0.0));
  CHECK(amp(j, "Rr") == cplx(0.0, 0.0));
  CHECK(j.contains("hatted"));
  CHECK(j["unitarity_residuals"].size() == 4);
}

TEST_CASE("exit codes for input and numerical failures") {
  const std::string bad = path("bad.json");
  std::ofstream(bad) << R"({"type": "polynomial", "d": 1, "imax": 0, "jmax": 0})";
  Result r = run({"solve", "--kernel", bad, "--k", "1"});
  CHECK(r.code == cli::input_error);
  CHECK(r.err.find("'coeffs'") != std::string::npos);

  const std::string broken = path("broken.json");
  std::ofstream(broken) << "{\n  \"type\": \"sampled\",\n  \"d\": ]\n}";
  r = run({"solve", "--kernel", broken, "--k", "1"});
  CHECK(r.code == cli::input_error);
  CHECK(r.err.find("line 3") != std::string::npos);

  CHECK(run({"solve", "--kernel", zero_kernel_file(), "--k", "-1"}).code == cli::input_error);
  CHECK(run({"solve", "--kernel", path("missing.json"), "--k", "1"}).code == cli::input_error);
  CHECK(run({"solve", "--kernel", zero_kernel_file(), "--k", "1", "--bogus"}).code == cli::input_error);
  CHECK(run({"sweep", "--kernel", zero_kernel_file(), "--grid", "1:2"}).code == cli::input_error);
  CHECK(run({}).code == cli::input_error);
  CHECK(run({"--help"}).code == cli::ok);

  Gen g(3);
  const std::string k = path("rough.json");
  write_kernel_file(k, testing::random_rough_sampled(g, 21));
  r = run({"solve", "--kernel", k, "--k", "1", "--tolerance", "1e-300"});
  CHECK(r.code == cli::numerical_error);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("sweep: CSV header, ascending k, 17 significant digits") {
  const Result r = run({"sweep", "--kernel", zero_kernel_file(), "--grid", "0.5:1.5:3"});
  REQUIRE(r.code == cli::ok);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == cli::sweep_csv_header);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("0.5,1,1,0,0,", 0) == 0);
  CHECK(rows[2].rfind("1.5,", 0) == 0);
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("sweep CSV keeps failed rows with their error") {
  SweepTable t;
  t.rows.push_back({1.0, std::nullopt, "scattering system non-invertible at this k"});
  const std::string csv = cli::sweep_csv(t);
  CHECK(csv.find("1,,,,,,,,,,,,,\"scattering system non-invertible at this k\"") != std::string::npos);
}

TEST_CASE("classify: keys and verdicts") {
  Gen g(5);
  const std::string p = path("local.json");
  write_kernel_file(p, testing::random_local(g, 31));
  const Result r = run({"classify", "--kernel", p});
  REQUIRE(r.code == cli::ok);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"residuals", "verdicts", "allowed_devices", "forbidden_by", "predicted_relations"})
    CHECK(j.contains(key));
  CHECK(j["verdicts"]["VI"] == true);
  CHECK(j["verdicts"]["II"] == false);
  CHECK(j["allowed_devices"] == nlohmann::json::array({"R/A", "TR/T"}));
}

TEST_CASE("verify: hermitian passes, V kernel checks |Rl| = |Rr|, false claims fail with exit 3") {
  Gen g(7);
  const Eigen::MatrixXcd c = g.complex_matrix(3, 3, 0.5);
  const std::string herm = path("herm.json");
  write_kernel_file(herm, PolynomialKernel(1.0, c + c.adjoint()));
  Result r = run({"verify", "--kernel", herm, "--grid", "0.5:2:4", "--claim", "II"});
  CHECK(r.code == cli::ok);

  const std::string real = path("real.json");
  write_kernel_file(real, symmetrize(testing::random_smooth_sampled(g, 201), Symmetry::V));
  r = run({"verify", "--kernel", real, "--grid", "0.5:2:4", "--claim", "V"});
  CHECK(r.code == cli::ok);
  const auto j = nlohmann::json::parse(r.out);
  bool found = false;
  for (const auto& check : j["checks"])
    if (check["predicate"] == "V: |Rl| = |Rr|") found = check["passed"].get<bool>();
  CHECK(found);

  r = run({"verify", "--kernel", real, "--grid", "0.5:2:2", "--claim", "V,VIII"});
  CHECK(r.code == cli::verification_failed);
  CHECK(r.err.find("claimed symmetry VIII") != std::string::npos);
  CHECK(r.err.find("claimed symmetry V\n") == std::string::npos);
  CHECK(run({"verify", "--kernel", real, "--claim", "IX"}).code == cli::input_error);
}

TEST_CASE("design writes a kernel that reproduces the targets; manifest digests match") {
  const std::string kernel = path("tra.json"), manifest = path("tra.manifest.json");
  const Result r = run({"design", "--device", "tra", "--sweep", "0.9:1.1:3", "--out", kernel, "--manifest", manifest});
  REQUIRE(r.code == cli::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["residual"].get<double>() < 1e-6);
  CHECK(j["sweep"]["passed"] == true);
  CHECK(fs::exists(path("tra.csv")));

  const auto m = nlohmann::json::parse(slurp(manifest));
  CHECK(m["command"] == "design");
  CHECK(m["seed"] == 1);
  CHECK(m["flags"]["--device"] == "tra");
  CHECK(m["outputs"][kernel] == cli::sha256_file(kernel));
  CHECK(m["outputs"]["-"] == cli::sha256_hex(r.out));

  const Result s = run({"solve", "--kernel", kernel, "--k", "1", "--quadrature", "simpson", "--n-grid", "801"});
  REQUIRE(s.code == cli::ok);
  const auto a = nlohmann::json::parse(s.out);
  CHECK(std::abs(amp(a, "Tl") - 1.0) < 1e-6);
  CHECK(std::abs(amp(a, "Tr")) < 1e-6);
  CHECK(std::abs(amp(a, "Rl") + 1.0) < 1e-6);
  CHECK(std::abs(amp(a, "Rr")) < 1e-6);

  CHECK(run({"design", "--device", "tra", "--constraint", "viii"}).code == cli::input_error);
  CHECK(run({"design", "--device", "ra"}).code == cli::input_error);
}

TEST_CASE("born-design: exactly one of --alpha and --tune") {
  CHECK(run({"born-design"}).code == cli::input_error);
  CHECK(run({"born-design", "--alpha", "0.1", "--tune"}).code == cli::input_error);
  const std::string csv = path("born.csv");
  const Result r = run({"born-design", "--alpha", "0.0975", "--sweep", "0.5:1:2", "--csv", csv});
  REQUIRE(r.code == cli::ok);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["potential"]["type"] == "inverse_square");
  CHECK(j["tuned"] == false);
  CHECK(slurp(csv).rfind(cli::sweep_csv_header, 0) == 0);
}

TEST_CASE("options from a TOML config file; command line wins") {
  const std::string cfg = path("solve.toml");
  std::ofstream(cfg) << "[solve]\nk = 2.5\nquadrature = \"simpson\"\nn-grid = 101\n";
  Result r = run({"solve", "--kernel", zero_kernel_file(), "--config", cfg});
  REQUIRE(r.code == cli::ok);
  CHECK(nlohmann::json::parse(r.out)["k"] == 2.5);
  r = run({"solve", "--kernel", zero_kernel_file(), "--config", cfg, "--k", "3"});
  REQUIRE(r.code == cli::ok);
  CHECK(nlohmann::json::parse(r.out)["k"] == 3.0);
}

TEST_CASE("identical invocations give identical bytes") {
  Gen g(11);
  const std::string p = path("det.json");
  write_kernel_file(p, testing::random_smooth_sampled(g, 101));
  const std::vector<std::string> args{"sweep", "--kernel", p, "--grid", "0.5:3:6", "--quadrature", "simpson"};
  CHECK(run(args).out == run(args).out);
}
