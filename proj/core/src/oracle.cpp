#include "nhscat/oracle.hpp"

#include <cmath>

#include "discretize.hpp"
#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

const cplx I{0.0, 1.0};

// Weights of the three-point rule for int K(s) g(x + s) ds over |s| < h with
// K(s) = sin(k(h - |s|)) / k, all scaled by h^2 (alpha, beta) or h^3 (c3).
// Series branches avoid cancellation for small theta = kh.
struct StencilWeights {
  double alpha;  // neighbours
  double beta;   // centre
  double c3;     // first moment of the half kernel
};

StencilWeights stencil_weights(double theta) {
  const double t2 = theta * theta;
  StencilWeights w{};
  if (theta < 0.05) {
    w.alpha = 1.0 / 12.0 - t2 / 360.0 + t2 * t2 / 20160.0 - t2 * t2 * t2 / 1814400.0;
    const double total = 1.0 - t2 / 12.0 + t2 * t2 / 360.0 - t2 * t2 * t2 / 20160.0;
    w.beta = total - 2.0 * w.alpha;
    w.c3 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0;
  } else {
    const double one_minus_cos = 2.0 * std::sin(0.5 * theta) * std::sin(0.5 * theta);
    w.alpha = 1.0 / t2 - 2.0 * one_minus_cos / (t2 * t2);
    w.beta = 2.0 * one_minus_cos / t2 - 2.0 * w.alpha;
    w.c3 = (theta - std::sin(theta)) / (t2 * theta);
  }
  return w;
}

}  // namespace

OracleResult scatter_oracle(const PotentialKernel& kernel, double k, Side side, std::size_t n_grid,
                            QuadratureRule rule) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber k must be positive and finite");
  SolverConfig config;
  config.n_grid = n_grid;
  config.quadrature = rule;
  config.validate();

  // The graded mesh is not uniform; tabulate the profile instead.
  const PotentialKernel uniform =
      std::holds_alternative<RegularizedInverseSquare>(kernel)
          ? PotentialKernel(SampledKernel::local_from_function(support_half_width(kernel), n_grid,
                                                               std::get<RegularizedInverseSquare>(kernel)))
          : kernel;
  const detail::Discretization disc = detail::discretize(uniform, n_grid, rule, config);
  const auto x = disc.quad.nodes();
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 4) throw InputError("oracle grid needs at least 4 points");
  const double d = disc.quad.upper();
  const double h = x[1] - x[0];
  const double theta = k * h;
  const StencilWeights sw = stencil_weights(theta);

  // g = psi'' + k^2 psi = 2 (V psi)
  const Eigen::MatrixXcd g = 2.0 * disc.weighted();
  const double h2 = h * h;
  const double jump = h2 * h * (sw.c3 - sw.alpha);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) -= 2.0 * std::cos(theta);
    if (i > 0) a(i, i - 1) += 1.0;
    if (i + 1 < n) a(i, i + 1) += 1.0;
    const bool edge = i == 0 || i == n - 1;
    a.row(i) -= h2 * (edge ? 0.5 : 1.0) * sw.beta * g.row(i);
    if (i > 0) a.row(i) -= h2 * sw.alpha * g.row(i - 1);
    if (i + 1 < n) a.row(i) -= h2 * sw.alpha * g.row(i + 1);
  }
  // Derivative jump of g across the support edges, one-sided differences.
  a.row(0) -= jump * (-3.0 * g.row(0) + 4.0 * g.row(1) - g.row(2)) / (2.0 * h);
  a.row(n - 1) += jump * (3.0 * g.row(n - 1) - 4.0 * g.row(n - 2) + g.row(n - 3)) / (2.0 * h);

  // Ghost nodes outside the support carry the free plane-wave solution.
  const cplx shift = std::exp(I * theta);
  const double a_left = side == Side::left ? 1.0 : 0.0;
  const double a_right = side == Side::right ? 1.0 : 0.0;
  const cplx ghost_source = std::exp(-I * (k * (d + h))) - std::exp(-I * (k * d)) * shift;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  a(0, 0) += shift;
  rhs(0) -= a_left * ghost_source;
  a(n - 1, n - 1) += shift;
  rhs(n - 1) -= a_right * ghost_source;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double pivot = detail::pivot_ratio(lu, a);
  if (!(pivot >= config.singular_pivot)) throw SingularSystemError(k, pivot);
  const Eigen::VectorXcd psi = lu.solve(rhs);
  if (!psi.allFinite()) throw SingularSystemError(k, pivot);

  const cplx edge_phase = std::exp(-I * (k * d));
  const cplx b_left = (psi(0) - a_left * edge_phase) * edge_phase;
  const cplx b_right = (psi(n - 1) - a_right * edge_phase) * edge_phase;
  if (side == Side::left) return {b_right, b_left};
  return {b_left, b_right};
}

}  // namespace nhscat
