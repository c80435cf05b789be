#include "nhscat/solver.hpp"

#include <algorithm>
#include <cmath>

#include "discretize.hpp"
#include "nhscat/errors.hpp"

namespace nhscat {

namespace detail {

Eigen::MatrixXcd Discretization::apply(const Eigen::MatrixXcd& psi) const {
  if (local) return profile.asDiagonal() * psi;
  const Eigen::VectorXcd w = quad.weight_vector().cast<cplx>();
  return matrix * (w.asDiagonal() * psi);
}

Eigen::MatrixXcd Discretization::weighted() const {
  if (local) return Eigen::MatrixXcd(profile.asDiagonal());
  const Eigen::VectorXcd w = quad.weight_vector().cast<cplx>();
  return matrix * w.asDiagonal();
}

double pivot_ratio(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, const Eigen::MatrixXcd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0.0;
  return lu.matrixLU().diagonal().cwiseAbs().minCoeff() / scale;
}

Discretization discretize(const PotentialKernel& kernel, std::size_t n_grid, QuadratureRule rule,
                          const SolverConfig& config) {
  if (const auto* sampled = std::get_if<SampledKernel>(&kernel)) {
    const std::size_t n = sampled->size();
    if (rule == QuadratureRule::simpson && n % 2 == 0)
      throw InputError("Simpson quadrature needs an odd number of kernel samples, got " + std::to_string(n));
    Discretization out{Quadrature::uniform(-sampled->half_width(), sampled->half_width(), n, rule)};
    out.local = sampled->is_local();
    if (out.local)
      out.profile = sampled->profile();
    else
      out.matrix = sampled->values();
    return out;
  }
  if (const auto* poly = std::get_if<PolynomialKernel>(&kernel)) {
    const double d = poly->half_width();
    Discretization out{Quadrature::uniform(-d, d, n_grid, rule)};
    const auto x = out.quad.nodes();
    const auto n = static_cast<Eigen::Index>(x.size());
    out.matrix.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) out.matrix(a, b) = poly->polynomial(x[a], x[b]);
    return out;
  }
  const auto& inv = std::get<RegularizedInverseSquare>(kernel);
  if (!(inv.epsilon > 0.0)) throw DomainError("regularization epsilon must be positive");
  if (!(inv.d > 0.0)) throw InputError("inverse-square truncation half-width must be positive");
  Discretization out{Quadrature::graded_gauss(inv.d, config.graded_finest * inv.epsilon, config.graded_max_panel)};
  out.local = true;
  const auto x = out.quad.nodes();
  out.profile.resize(static_cast<Eigen::Index>(x.size()));
  for (std::size_t a = 0; a < x.size(); ++a) out.profile(static_cast<Eigen::Index>(a)) = inv(x[a]);
  return out;
}

}  // namespace detail

namespace {

const cplx I{0.0, 1.0};

struct Solved {
  Eigen::MatrixXcd psi;  // column 0: left incidence, column 1: right incidence
  Eigen::MatrixXcd u;    // V psi
  Eigen::VectorXcd ep;   // e^{+ikx}
  Eigen::VectorXcd em;   // e^{-ikx}
  std::vector<double> x;
  Eigen::VectorXcd w;
};

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber k must be positive and finite");
}

Solved solve_system(const PotentialKernel& kernel, double k, const SolverConfig& config) {
  check_k(k);
  config.validate();
  const detail::Discretization disc = detail::discretize(kernel, config.n_grid, config.quadrature, config);
  const Quadrature& q = disc.quad;
  const auto n = static_cast<Eigen::Index>(q.size());

  Solved s;
  s.x.assign(q.nodes().begin(), q.nodes().end());
  s.w = q.weight_vector().cast<cplx>();
  s.ep.resize(n);
  s.em.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    s.ep(a) = std::exp(I * (k * s.x[static_cast<std::size_t>(a)]));
    s.em(a) = std::conj(s.ep(a));
  }

  // K f = (1/ik) [e^{ikx} int_{-d}^x e^{-ikx'} f + e^{-ikx} int_x^d e^{ikx'} f]
  const Eigen::MatrixXcd vhat = disc.weighted();
  const Eigen::MatrixXcd lower = q.cumulative_left(s.em.asDiagonal() * vhat);
  const Eigen::MatrixXcd upper = q.cumulative_right(s.ep.asDiagonal() * vhat);
  Eigen::MatrixXcd a = -(s.ep.asDiagonal() * lower + s.em.asDiagonal() * upper) / (I * k);
  a.diagonal().array() += 1.0;

  Eigen::MatrixXcd rhs(n, 2);
  rhs.col(0) = s.ep;
  rhs.col(1) = s.em;
  // Identically zero kernel: A = 1, nothing to factor.
  if ((vhat.array() == cplx(0.0)).all()) {
    s.psi = rhs;
    s.u = Eigen::MatrixXcd::Zero(n, 2);
    return s;
  }

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double pivot = detail::pivot_ratio(lu, a);
  if (!(pivot >= config.singular_pivot)) throw SingularSystemError(k, pivot);

  s.psi = lu.solve(rhs);
  if (!s.psi.allFinite()) throw SingularSystemError(k, pivot);
  const double residual = (a * s.psi - rhs).norm() / rhs.norm();
  if (!(residual <= config.tolerance))
    throw NumericalError("linear solve residual " + std::to_string(residual) + " exceeds tolerance at k = " +
                         std::to_string(k));
  s.u = vhat * s.psi;
  return s;
}

cplx project(const Solved& s, const Eigen::VectorXcd& phase, Eigen::Index col, double k) {
  return (s.w.array() * phase.array() * s.u.col(col).array()).sum() / (I * k);
}

}  // namespace

void SolverConfig::validate() const {
  if (n_grid < 3) throw InputError("n_grid must be at least 3");
  if (quadrature == QuadratureRule::simpson && n_grid % 2 == 0) throw InputError("n_grid must be odd for Simpson");
  if (!(tolerance > 0.0)) throw InputError("solver tolerance must be positive");
  if (!(singular_pivot >= 0.0)) throw InputError("singular threshold must be non-negative");
  if (!(graded_finest > 0.0) || !(graded_max_panel > 0.0)) throw InputError("graded mesh parameters must be positive");
}

Eigen::Matrix2cd on_shell_s_matrix(const ScatteringAmplitudes& amps) {
  Eigen::Matrix2cd s;
  s << amps.Tl, amps.Rr, amps.Rl, amps.Tr;
  return s;
}

SideSolution scatter(const PotentialKernel& kernel, double k, Side side, const SolverConfig& config) {
  const Solved s = solve_system(kernel, k, config);
  SideSolution out;
  out.x = s.x;
  if (side == Side::left) {
    out.R = project(s, s.ep, 0, k);
    out.T = 1.0 + project(s, s.em, 0, k);
    out.psi = s.psi.col(0);
  } else {
    out.R = project(s, s.em, 1, k);
    out.T = 1.0 + project(s, s.ep, 1, k);
    out.psi = s.psi.col(1);
  }
  return out;
}

namespace {

AmplitudeQuad amplitudes_of(const PotentialKernel& kernel, double k, const SolverConfig& config) {
  const Solved s = solve_system(kernel, k, config);
  AmplitudeQuad q;
  q.Rl = project(s, s.ep, 0, k);
  q.Tl = 1.0 + project(s, s.em, 0, k);
  q.Rr = project(s, s.em, 1, k);
  q.Tr = 1.0 + project(s, s.ep, 1, k);
  return q;
}

}  // namespace

ScatteringAmplitudes scatter_all(const PotentialKernel& kernel, double k, const SolverConfig& config,
                                 bool with_adjoint) {
  const AmplitudeQuad q = amplitudes_of(kernel, k, config);
  ScatteringAmplitudes out{k, q.Tl, q.Tr, q.Rl, q.Rr, std::nullopt};
  if (with_adjoint) out.hatted = amplitudes_of(adjoint(kernel), k, config);
  return out;
}

std::array<double, 4> generalized_unitarity_residuals(const ScatteringAmplitudes& a) {
  if (!a.hatted) throw InputError("generalized unitarity needs the adjoint amplitudes");
  const AmplitudeQuad& h = *a.hatted;
  return {std::abs(h.Tl * std::conj(a.Tl) + h.Rl * std::conj(a.Rl) - 1.0),
          std::abs(h.Tr * std::conj(a.Tr) + h.Rr * std::conj(a.Rr) - 1.0),
          std::abs(std::conj(h.Tl) * a.Rr + a.Tr * std::conj(h.Rl)),
          std::abs(a.Tl * std::conj(h.Rr) + std::conj(h.Tr) * a.Rl)};
}

AmplitudeQuad hatted_from_unhatted(const AmplitudeQuad& a, double tolerance) {
  const cplx d = a.Tl * a.Tr - a.Rl * a.Rr;
  if (!(std::abs(d) >= tolerance)) throw DivergenceError(std::abs(d));
  return {std::conj(a.Tr / d), std::conj(a.Tl / d), std::conj(-a.Rr / d), std::conj(-a.Rl / d)};
}

}  // namespace nhscat
