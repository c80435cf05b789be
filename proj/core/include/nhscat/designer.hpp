#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "nhscat/kernel.hpp"
#include "nhscat/solver.hpp"
#include "nhscat/symmetry.hpp"

namespace nhscat {

enum class DesignConstraint { none, symmetryVIII, nonlocalPT };

std::string to_string(DesignConstraint c);
/// Accepts none, viii / symmetryVIII, pt / nonlocalPT.
DesignConstraint parse_constraint(std::string_view text);

struct DeviceSpec {
  /// Absent for free-form targets (e.g. free space).
  std::optional<DeviceCode> code;
  double k0 = 1.0;
  double d = 1.0;
  AmplitudeQuad targets;
  DesignConstraint constraint = DesignConstraint::none;
  std::uint64_t seed = 1;

  /// Throws ForbiddenDeviceError when the constraint's symmetry forbids the
  /// device, InputError for any other inconsistency.
  void validate() const;
};

/// Default targets for a device: T^l = 1, T^r = 0 for transmission
/// asymmetry, R = -1 where a unit reflection is required, T^r = -1 for TR/T.
AmplitudeQuad default_targets(DeviceCode code);

/// Default constraint used for each device in the reference designs.
DesignConstraint default_constraint(DeviceCode code);

struct DesignResult {
  PolynomialKernel kernel{1.0, Eigen::MatrixXcd::Zero(1, 1)};
  /// Interior wavefunctions psi(x) = sum_j c_j x^j, j = 0..5.
  Eigen::VectorXcd wave_left;
  Eigen::VectorXcd wave_right;
  /// Forward solve at k0.
  ScatteringAmplitudes verification;
  /// max over the four amplitudes of |forward - target|.
  double residual = 0.0;
  /// Largest entry of the algebraic residual stack.
  double equation_residual = 0.0;
  int iterations = 0;
  int restarts = 0;
};

/// Acceptance threshold on DesignResult::residual.
inline constexpr double design_threshold = 1e-6;

/// Polynomial kernel V(x,y) = sum v_ij x^i y^j whose scattering amplitudes
/// at k0 equal the targets.
///
/// Unknowns are the coefficients of the two interior wavefunctions and of the
/// kernel. Equations: continuity of psi and psi' at +-d against the exterior
/// plane waves, the Schroedinger equation power by power in x (bilinear in
/// kernel and wavefunction through the moments int y^j psi(y) dy), and
/// V(+-d, y) = 0. The warm start solves the wavefunction from the matching
/// conditions plus psi'' + k^2 psi = 0 at the edges (implied by the vanishing
/// kernel there) and the kernel by least squares; a damped Gauss-Newton
/// iteration with seeded restarts then polishes the full system. The result
/// is checked by an independent forward solve.
///
/// Throws DesignError when no candidate reaches design_threshold.
DesignResult design_device(const DeviceSpec& spec);

struct DesignVerification {
  SweepTable table;
  /// max |forward - target| at k0.
  double k0_error = 0.0;
  /// Largest change of any |T|^2 or |R|^2 between neighbouring rows.
  double max_step = 0.0;
  bool passed = false;
  std::string message;
};

/// Sweep a design over [k_lo, k_hi] (k0 is inserted into the grid), and check
/// exactness at k0 and that no coefficient jumps by more than `max_jump`
/// between neighbouring points.
DesignVerification verify_design(const DesignResult& result, const AmplitudeQuad& targets, double k0, double k_lo,
                                 double k_hi, std::size_t n_points, const SolverConfig& config,
                                 double max_jump = 0.25);

/// Solver settings used to verify designs: Simpson on 801 points.
SolverConfig design_solver_config();

}  // namespace nhscat
