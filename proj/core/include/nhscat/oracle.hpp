#pragma once

#include <cstddef>

#include "nhscat/kernel.hpp"
#include "nhscat/quadrature.hpp"
#include "nhscat/solver.hpp"

namespace nhscat {

struct OracleResult {
  cplx T;
  cplx R;
};

/// Independent check of `scatter`: solves -psi''/2 + int V psi = k^2/2 psi
/// directly as a three-point finite-difference system on a uniform grid of
/// [-d, d], closed by the exact plane-wave forms outside the support.
///
/// The difference scheme reproduces free propagation exactly (its stencil is
/// psi_{i+1} - 2 cos(kh) psi_i + psi_{i-1}) and treats the source term with
/// weights matched to the free Green's function, so it converges at fourth
/// order for kernels that vanish smoothly at x = +-d. The y-integral uses
/// `rule` on the same grid. Sampled kernels use their own grid and ignore
/// `n_grid`.
OracleResult scatter_oracle(const PotentialKernel& kernel, double k, Side side, std::size_t n_grid = 801,
                            QuadratureRule rule = QuadratureRule::simpson);

}  // namespace nhscat
