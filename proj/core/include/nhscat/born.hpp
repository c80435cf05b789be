#pragma once

#include "nhscat/kernel.hpp"
#include "nhscat/solver.hpp"

namespace nhscat {

/// First-order reflection amplitudes
///   R^l = -(sqrt(2 pi) i / k) Vt(-2k),  R^r = -(sqrt(2 pi) i / k) Vt(2k)
/// with Vt the Fourier transform (1/sqrt(2 pi)) int V(x) e^{-iqx} dx, and
/// |T|^2 = 1 - Re(R^r* R^l).
struct BornPrediction {
  double k = 0.0;
  cplx Rl{0.0, 0.0};
  cplx Rr{0.0, 0.0};
  double T_abs2 = 1.0;
};

/// Born amplitudes from the closed-form transform of the untruncated
/// potential: R^l = 4 pi i alpha e^{-2 k eps}, R^r = 0.
BornPrediction born_reflections(const RegularizedInverseSquare& potential, double k);

/// Born amplitudes of any local kernel from its transform over the support,
/// integrated on the solver's mesh for that kernel (graded Gauss-Legendre
/// for the inverse-square potential, so truncation at +-d is included).
BornPrediction born_reflections(const PotentialKernel& local_kernel, double k, const SolverConfig& config = {});

/// (1/sqrt(2 pi)) int_{-d}^{d} V(x) e^{-iqx} dx on the solver mesh.
cplx numerical_fourier_transform(const PotentialKernel& local_kernel, double q, const SolverConfig& config = {});

/// alpha / (x - i eps)^2 on [-d, d]. Its untruncated transform vanishes for
/// positive momenta.
RegularizedInverseSquare design_broadband_reflector(double alpha, double epsilon, double d = 1.0);

struct TuneOptions {
  double alpha_max = 4.0 / (4.0 * 3.14159265358979323846);
  /// Accuracy goal on |R^l|^2.
  double tolerance = 1e-4;
  /// Uniform scan points used to find the first sign change.
  int scan_points = 17;
  double d = 1.0;
};

/// Smallest alpha in [0, alpha_max] with |R^l(k_ref)|^2 = target, from a
/// scan followed by bisection on exact solves. Target 0 returns 0.
/// Throws BracketError carrying the scan when no sign change is found.
double tune_alpha(double epsilon, double k_ref, double target_abs2_Rl = 1.0, const SolverConfig& config = {},
                  const TuneOptions& options = {});

}  // namespace nhscat
