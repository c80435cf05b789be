#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhscat/kernel.hpp"
#include "nhscat/quadrature.hpp"

namespace nhscat {

enum class Side { left, right };

/// (T^l, T^r, R^l, R^r) at one momentum.
struct AmplitudeQuad {
  cplx Tl{1.0, 0.0};
  cplx Tr{1.0, 0.0};
  cplx Rl{0.0, 0.0};
  cplx Rr{0.0, 0.0};
};

/// Amplitudes of H = H0 + V and, optionally, of H^dagger (the hatted set).
struct ScatteringAmplitudes {
  double k = 0.0;
  cplx Tl{1.0, 0.0};
  cplx Tr{1.0, 0.0};
  cplx Rl{0.0, 0.0};
  cplx Rr{0.0, 0.0};
  std::optional<AmplitudeQuad> hatted;

  AmplitudeQuad quad() const { return {Tl, Tr, Rl, Rr}; }
};

/// On-shell S matrix [[T^l, R^r], [R^l, T^r]].
Eigen::Matrix2cd on_shell_s_matrix(const ScatteringAmplitudes& amps);

struct SolverConfig {
  /// Quadrature points across [-d, d] for polynomial kernels. Sampled kernels
  /// are solved on their own grid.
  std::size_t n_grid = 401;
  QuadratureRule quadrature = QuadratureRule::trapezoid;
  /// Relative residual target for the post-solve self check.
  double tolerance = 1e-8;
  /// The system counts as singular when an LU pivot falls below this
  /// fraction of the largest matrix entry.
  double singular_pivot = 1e-10;
  /// Graded Gauss-Legendre mesh for the regularized inverse-square
  /// potential: innermost panel width in units of epsilon, and the largest
  /// panel width.
  double graded_finest = 1.0;
  double graded_max_panel = 0.125;

  /// Throws InputError when the combination is invalid.
  void validate() const;
};

struct SideSolution {
  cplx T;
  cplx R;
  std::vector<double> x;
  Eigen::VectorXcd psi;
};

/// Solve psi = phi + int int G0(x,x') V(x',y) psi(y) dx' dy with
/// G0(x,x') = e^{ik|x-x'|} / (ik) (hbar = m = 1) by Nystrom discretization,
/// and read off the amplitudes. phi is e^{ikx} for left and e^{-ikx} for
/// right incidence. Left incidence:
///   R^l = (1/ik) int e^{+ikx'} (V psi)(x') dx'
///   T^l = 1 + (1/ik) int e^{-ikx'} (V psi)(x') dx'
/// and mirrored for right incidence.
///
/// Throws DomainError for k <= 0 and SingularSystemError when the discrete
/// system is not invertible.
SideSolution scatter(const PotentialKernel& kernel, double k, Side side, const SolverConfig& config = {});

/// Both incidences from one factorization; with `with_adjoint` the hatted
/// amplitudes come from an independent solve for V^dagger.
ScatteringAmplitudes scatter_all(const PotentialKernel& kernel, double k, const SolverConfig& config = {},
                                 bool with_adjoint = false);

/// The four generalized-unitarity defects
///   |hTl Tl* + hRl Rl* - 1|, |hTr Tr* + hRr Rr* - 1|,
///   |hTl* Rr + Tr hRl*|,     |Tl hRr* + hTr* Rl|.
/// Throws InputError when the hatted amplitudes are absent.
std::array<double, 4> generalized_unitarity_residuals(const ScatteringAmplitudes& amps);

/// Adjoint amplitudes from the direct ones via generalized unitarity.
/// Throws DivergenceError when |Tl Tr - Rl Rr| < tolerance.
AmplitudeQuad hatted_from_unhatted(const AmplitudeQuad& amps, double tolerance = 1e-6);

struct SweepRow {
  double k = 0.0;
  std::optional<ScatteringAmplitudes> amplitudes;
  std::string error;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Tabulate amplitudes over a momentum grid, sorted by ascending k. Solver
/// failures are recorded in the row and the sweep continues.
SweepTable k_sweep(const PotentialKernel& kernel, std::span<const double> ks, const SolverConfig& config = {},
                   bool with_adjoint = false);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace nhscat
