#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nhscat/born.hpp"
#include "nhscat/errors.hpp"

using namespace nhscat;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

}  // namespace

TEST_CASE("zero strength gives no reflection") {
  const BornPrediction p = born_reflections(RegularizedInverseSquare{0.0, 1e-4, 1.0, false}, 1.0);
  CHECK(p.Rl == cplx(0.0, 0.0));
  CHECK(p.Rr == cplx(0.0, 0.0));
  CHECK(p.T_abs2 == 1.0);
}

TEST_CASE("closed-form Born amplitude of the inverse square") {
  // Vt(-2k) = -sqrt(2 pi) alpha 2k e^{-2k eps} into R^l = -(sqrt(2 pi) i / k) Vt(-2k).
  const double alpha = 1.0 / (4.0 * pi);
  for (double k : {0.5, 1.0, 3.0}) {
    const BornPrediction p = born_reflections(RegularizedInverseSquare{alpha, 1e-4, 1.0, false}, k);
    const cplx vt = -std::sqrt(2.0 * pi) * alpha * 2.0 * k * std::exp(-2.0 * k * 1e-4);
    const cplx expected = -std::sqrt(2.0 * pi) * I / k * vt;
    CHECK(std::abs(p.Rl - expected) < 1e-14);
    CHECK(std::abs(p.Rl - 4.0 * pi * I * alpha * std::exp(-2.0 * k * 1e-4)) < 1e-14);
    CHECK(p.Rr == cplx(0.0, 0.0));
  }
}

TEST_CASE("epsilon -> 0 limit is k independent: R^l = 4 pi i alpha") {
  const double alpha = 0.05;
  for (double k : {0.5, 2.0, 5.0}) {
    const BornPrediction p = born_reflections(RegularizedInverseSquare{alpha, 1e-12, 1.0, false}, k);
    CHECK(std::abs(p.Rl - 4.0 * pi * I * alpha) < 1e-10);
  }
}

TEST_CASE("numerical transform of a local profile matches its analytic transform") {
  // (1/sqrt(2 pi)) int_{-1}^{1} (1 - x^2) e^{-iqx} dx = 4 (sin q - q cos q) / (q^3 sqrt(2 pi))
  const SampledKernel v = SampledKernel::local_from_function(1.0, 201, [](double x) { return cplx(1.0 - x * x); });
  SolverConfig c;
  c.quadrature = QuadratureRule::simpson;
  for (double q : {-2.0, 0.7, 3.0}) {
    const cplx expected = 4.0 * (std::sin(q) - q * std::cos(q)) / (q * q * q * std::sqrt(2.0 * pi));
    CHECK(std::abs(numerical_fourier_transform(v, q, c) - expected) < 1e-8);
  }
  CHECK_THROWS_AS(numerical_fourier_transform(PolynomialKernel(1.0, Eigen::MatrixXcd::Ones(2, 2)), 1.0),
                  InputError);
}

TEST_CASE("truncated Born on the solver mesh approaches the closed form as the window grows") {
  const double alpha = 0.01;
  const BornPrediction closed = born_reflections(RegularizedInverseSquare{alpha, 1e-4, 1.0, false}, 1.0);
  double prev = INFINITY;
  for (double window : {1.0, 4.0, 16.0}) {
    SolverConfig c;
    c.graded_max_panel = 0.5;
    const BornPrediction p = born_reflections(PotentialKernel(RegularizedInverseSquare{alpha, 1e-4, window, false}), 1.0, c);
    const double err = std::abs(p.Rl - closed.Rl);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("exact and Born reflections agree to first order in alpha") {
  double prev_rel = 0.0;
  for (double alpha : {0.02, 0.01, 0.005}) {
    const RegularizedInverseSquare v{alpha, 1e-4, 1.0, false};
    const ScatteringAmplitudes exact = scatter_all(v, 1.0);
    const BornPrediction born = born_reflections(PotentialKernel(v), 1.0);
    const double rel = std::abs(exact.Rl - born.Rl) / std::abs(born.Rl);
    CHECK(rel < 0.1);
    if (prev_rel > 0.0) CHECK(prev_rel / rel == doctest::Approx(2.0).epsilon(0.2));
    prev_rel = rel;
  }
}

TEST_CASE("broadband reflector construction") {
  const RegularizedInverseSquare v = design_broadband_reflector(1.225 / (4.0 * pi), 1e-4);
  CHECK(v.alpha == 1.225 / (4.0 * pi));
  CHECK(v.d == 1.0);
  CHECK_FALSE(v.mirrored);
  CHECK_THROWS_AS(design_broadband_reflector(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(design_broadband_reflector(1.0, 1e-4, -1.0), InputError);
}

TEST_CASE("tune_alpha") {
  CHECK(tune_alpha(1e-4, 1.0, 0.0) == 0.0);

  const double alpha = tune_alpha(1e-4, 1.0, 0.5);
  const ScatteringAmplitudes a = scatter_all(RegularizedInverseSquare{alpha, 1e-4, 1.0, false}, 1.0);
  CHECK(std::norm(a.Rl) == doctest::Approx(0.5).epsilon(1e-3));

  TuneOptions narrow;
  narrow.alpha_max = 1e-3;
  narrow.scan_points = 3;
  try {
    tune_alpha(1e-4, 1.0, 1.0, {}, narrow);
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK(std::string(e.what()).find("scan:") != std::string::npos);
  }
  CHECK_THROWS_AS(tune_alpha(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(tune_alpha(1e-4, -1.0), DomainError);
}
