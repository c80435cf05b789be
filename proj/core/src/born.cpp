#include "nhscat/born.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "discretize.hpp"
#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

const cplx I{0.0, 1.0};

BornPrediction from_transforms(double k, cplx minus_2k, cplx plus_2k) {
  const cplx factor = -std::sqrt(2.0 * std::numbers::pi) * I / k;
  BornPrediction p;
  p.k = k;
  p.Rl = factor * minus_2k;
  p.Rr = factor * plus_2k;
  p.T_abs2 = 1.0 - (std::conj(p.Rr) * p.Rl).real();
  return p;
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber k must be positive and finite");
}

double abs2_Rl(double alpha, double epsilon, double k, double d, const SolverConfig& config) {
  const RegularizedInverseSquare v{alpha, epsilon, d, false};
  return std::norm(scatter(v, k, Side::left, config).R);
}

}  // namespace

BornPrediction born_reflections(const RegularizedInverseSquare& potential, double k) {
  check_k(k);
  return from_transforms(k, fourier_transform_local(potential, -2.0 * k), fourier_transform_local(potential, 2.0 * k));
}

cplx numerical_fourier_transform(const PotentialKernel& kernel, double q, const SolverConfig& config) {
  if (!is_local(kernel)) throw InputError("Fourier transform of a nonlocal kernel is not a single profile");
  const detail::Discretization disc = detail::discretize(kernel, config.n_grid, config.quadrature, config);
  const auto x = disc.quad.nodes();
  const auto w = disc.quad.weights();
  cplx acc = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    acc += w[a] * disc.profile(static_cast<Eigen::Index>(a)) * std::exp(-I * (q * x[a]));
  return acc / std::sqrt(2.0 * std::numbers::pi);
}

BornPrediction born_reflections(const PotentialKernel& kernel, double k, const SolverConfig& config) {
  check_k(k);
  return from_transforms(k, numerical_fourier_transform(kernel, -2.0 * k, config),
                         numerical_fourier_transform(kernel, 2.0 * k, config));
}

RegularizedInverseSquare design_broadband_reflector(double alpha, double epsilon, double d) {
  if (!(epsilon > 0.0)) throw DomainError("regularization epsilon must be positive");
  if (!(d > 0.0)) throw InputError("truncation half-width must be positive");
  return {alpha, epsilon, d, false};
}

double tune_alpha(double epsilon, double k_ref, double target, const SolverConfig& config,
                  const TuneOptions& options) {
  check_k(k_ref);
  if (!(epsilon > 0.0)) throw DomainError("regularization epsilon must be positive");
  if (!(target >= 0.0)) throw InputError("target |R^l|^2 must be non-negative");
  if (target == 0.0) return 0.0;
  if (options.scan_points < 2) throw InputError("alpha scan needs at least 2 points");

  const auto f = [&](double alpha) { return abs2_Rl(alpha, epsilon, k_ref, options.d, config) - target; };

  std::ostringstream trace;
  trace << "no sign change of |R^l|^2 - " << target << " on [0, " << options.alpha_max << "]; scan:";
  double lo = 0.0, f_lo = -target;
  double hi = -1.0;
  for (int i = 1; i < options.scan_points; ++i) {
    const double alpha = options.alpha_max * i / (options.scan_points - 1);
    const double value = f(alpha);
    trace << " (" << alpha << ", " << value + target << ")";
    if (std::abs(value) < options.tolerance) return alpha;
    if ((value > 0.0) != (f_lo > 0.0)) {
      hi = alpha;
      break;
    }
    lo = alpha;
    f_lo = value;
  }
  if (hi < 0.0) throw BracketError(trace.str());

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double value = f(mid);
    if (std::abs(value) < options.tolerance || hi - lo < 1e-15) return mid;
    if ((value > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = value;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace nhscat
