#pragma once

#include <utility>

#include <Eigen/Dense>

#include "nhscat/kernel.hpp"
#include "nhscat/quadrature.hpp"
#include "nhscat/solver.hpp"

namespace nhscat::detail {

// Kernel tabulated on quadrature nodes. For nonlocal kernels `matrix` holds
// V(x_a, x_b); for local ones `profile` holds V(x_a).
struct Discretization {
  explicit Discretization(Quadrature q) : quad(std::move(q)) {}

  Quadrature quad;
  bool local = false;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd profile;

  // (V psi)(x_a) for each column of psi.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& psi) const;
  // Dense operator psi -> V psi including quadrature weights.
  Eigen::MatrixXcd weighted() const;
};

// Smallest LU pivot relative to the largest entry of the factored matrix.
double pivot_ratio(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, const Eigen::MatrixXcd& a);

Discretization discretize(const PotentialKernel& kernel, std::size_t n_grid, QuadratureRule rule,
                          const SolverConfig& config);

}  // namespace nhscat::detail
