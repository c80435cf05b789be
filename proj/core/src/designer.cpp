#include "nhscat/designer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

constexpr int wave_terms = 6;  // psi = sum_{n<6} c_n x^n
constexpr int max_iterations = 200;
constexpr int max_restarts = 16;
constexpr double converged_residual = 1e-11;

const cplx I{0.0, 1.0};

// Kernel coefficients vec(v) = basis * theta with theta real; vec is
// column-major over a rows x cols coefficient matrix.
struct Layout {
  Eigen::Index rows = 6;
  Eigen::Index cols = 2;
  Eigen::MatrixXcd basis;

  Eigen::Index nv() const { return rows * cols; }
  Eigen::Index ntheta() const { return basis.cols(); }
  Eigen::Index at(Eigen::Index i, Eigen::Index j) const { return i + rows * j; }
};

Layout make_layout(DesignConstraint constraint) {
  Layout l;
  std::vector<Eigen::VectorXcd> columns;
  const auto unit = [&l](std::initializer_list<std::pair<Eigen::Index, cplx>> entries) {
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(l.nv());
    for (const auto& [k, value] : entries) col(k) = value;
    return col;
  };
  switch (constraint) {
    case DesignConstraint::none:
      for (Eigen::Index j = 0; j < l.cols; ++j)
        for (Eigen::Index i = 0; i < l.rows; ++i) {
          columns.push_back(unit({{l.at(i, j), 1.0}}));
          columns.push_back(unit({{l.at(i, j), I}}));
        }
      break;
    case DesignConstraint::symmetryVIII:
      l.cols = 6;
      // v_ij = (-1)^{i+j} v_ji, with v_44 = v_45 = v_54 = v_55 = 0.
      for (Eigen::Index i = 0; i < l.rows; ++i)
        for (Eigen::Index j = i; j < l.cols; ++j) {
          if (i >= 4 && j >= 4) continue;
          const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
          for (const cplx unit_value : {cplx(1.0), I}) {
            if (i == j)
              columns.push_back(unit({{l.at(i, i), unit_value}}));
            else
              columns.push_back(unit({{l.at(i, j), unit_value}, {l.at(j, i), sign * unit_value}}));
          }
        }
      break;
    case DesignConstraint::nonlocalPT:
      // v_ij real for i + j even, imaginary for i + j odd.
      for (Eigen::Index j = 0; j < l.cols; ++j)
        for (Eigen::Index i = 0; i < l.rows; ++i)
          columns.push_back(unit({{l.at(i, j), (i + j) % 2 == 0 ? cplx(1.0) : I}}));
      break;
  }
  l.basis.resize(l.nv(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) l.basis.col(static_cast<Eigen::Index>(c)) = columns[c];
  return l;
}

// The algebraic design problem at fixed (k, d, targets).
class DesignSystem {
 public:
  DesignSystem(const DeviceSpec& spec, Layout layout) : spec_(spec), layout_(std::move(layout)) {
    const double d = spec.d;
    for (int q = 0; q < 2 * wave_terms + 6; ++q)
      moments_.push_back(q % 2 == 0 ? 2.0 * std::pow(d, q + 1) / (q + 1) : 0.0);
  }

  const Layout& layout() const { return layout_; }
  Eigen::Index n_real() const { return 4 * wave_terms + layout_.ntheta(); }

  struct Unpacked {
    Eigen::VectorXcd cl, cr;
    Eigen::MatrixXcd v;
  };

  Unpacked unpack(const Eigen::VectorXd& z) const {
    Unpacked u;
    u.cl.resize(wave_terms);
    u.cr.resize(wave_terms);
    for (int n = 0; n < wave_terms; ++n) {
      u.cl(n) = {z(n), z(wave_terms + n)};
      u.cr(n) = {z(2 * wave_terms + n), z(3 * wave_terms + n)};
    }
    const Eigen::VectorXcd vec = layout_.basis * z.tail(layout_.ntheta()).cast<cplx>();
    u.v = Eigen::Map<const Eigen::MatrixXcd>(vec.data(), layout_.rows, layout_.cols);
    return u;
  }

  Eigen::VectorXd pack(const Eigen::VectorXcd& cl, const Eigen::VectorXcd& cr, const Eigen::VectorXd& theta) const {
    Eigen::VectorXd z(n_real());
    z << cl.real(), cl.imag(), cr.real(), cr.imag(), theta;
    return z;
  }

  // Exterior data at x = -d and x = +d: (psi, psi') for both incidences.
  struct EdgeData {
    cplx left_value, left_slope, right_value, right_slope;
  };

  EdgeData edge_data(Side side) const {
    const double k = spec_.k0, d = spec_.d;
    const cplx em = std::exp(-I * (k * d)), ep = std::exp(I * (k * d));
    const AmplitudeQuad& t = spec_.targets;
    if (side == Side::left) return {em + t.Rl * ep, I * k * (em - t.Rl * ep), t.Tl * ep, I * k * t.Tl * ep};
    return {t.Tr * ep, -I * k * t.Tr * ep, em + t.Rr * ep, I * k * (-em + t.Rr * ep)};
  }

  // Full residual stack: matching (8), Schroedinger equation by powers (12),
  // edge vanishing (2 * cols).
  Eigen::VectorXcd residual(const Unpacked& u) const {
    const Eigen::Index n_edge = 2 * layout_.cols;
    Eigen::VectorXcd r(8 + 2 * wave_terms + n_edge);
    Eigen::Index row = 0;
    for (const Side side : {Side::left, Side::right}) {
      const Eigen::VectorXcd& c = side == Side::left ? u.cl : u.cr;
      const EdgeData e = edge_data(side);
      r(row++) = value(c, -spec_.d) - e.left_value;
      r(row++) = slope(c, -spec_.d) - e.left_slope;
      r(row++) = value(c, spec_.d) - e.right_value;
      r(row++) = slope(c, spec_.d) - e.right_slope;
    }
    for (const Eigen::VectorXcd* c : {&u.cl, &u.cr}) {
      const Eigen::VectorXcd m = kernel_moments(*c);
      for (int p = 0; p < wave_terms; ++p) {
        cplx acc = free_part(*c, p);
        if (p < u.v.rows())
          for (Eigen::Index j = 0; j < u.v.cols(); ++j) acc -= 2.0 * u.v(p, j) * m(j);
        r(row++) = acc;
      }
    }
    for (const double x : {-spec_.d, spec_.d})
      for (Eigen::Index j = 0; j < u.v.cols(); ++j) {
        cplx acc = 0.0;
        for (Eigen::Index i = u.v.rows() - 1; i >= 0; --i) acc = acc * x + u.v(i, j);
        r(row++) = acc;
      }
    return r;
  }

  Eigen::VectorXd real_residual(const Eigen::VectorXd& z) const {
    const Eigen::VectorXcd r = residual(unpack(z));
    Eigen::VectorXd out(2 * r.size());
    out << r.real(), r.imag();
    return out;
  }

  // Wavefunction from psi, psi' matching plus psi'' + k^2 psi = 0 at both
  // edges: a two-point Hermite problem of degree 5.
  Eigen::VectorXcd hermite_wave(Side side) const {
    const double d = spec_.d, k2 = spec_.k0 * spec_.k0;
    const EdgeData e = edge_data(side);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(wave_terms, wave_terms);
    Eigen::VectorXcd b(wave_terms);
    int row = 0;
    for (const double x : {-d, d}) {
      for (int n = 0; n < wave_terms; ++n) {
        a(row, n) = std::pow(x, n);
        if (n >= 1) a(row + 1, n) = n * std::pow(x, n - 1);
        a(row + 2, n) = k2 * std::pow(x, n) + (n >= 2 ? n * (n - 1) * std::pow(x, n - 2) : 0.0);
      }
      b(row) = x < 0 ? e.left_value : e.right_value;
      b(row + 1) = x < 0 ? e.left_slope : e.right_slope;
      b(row + 2) = 0.0;
      row += 3;
    }
    return a.fullPivLu().solve(b);
  }

  // Kernel parameters minimizing the equation and edge residuals at fixed
  // wavefunctions (minimum-norm least squares).
  Eigen::VectorXd fit_kernel(const Eigen::VectorXcd& cl, const Eigen::VectorXcd& cr) const {
    const Eigen::Index n_eq = 2 * wave_terms + 2 * layout_.cols;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_eq, layout_.nv());
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n_eq);
    Eigen::Index row = 0;
    for (const Eigen::VectorXcd* c : {&cl, &cr}) {
      const Eigen::VectorXcd m = kernel_moments(*c);
      for (int p = 0; p < wave_terms; ++p, ++row) {
        b(row) = -free_part(*c, p);
        if (p < layout_.rows)
          for (Eigen::Index j = 0; j < layout_.cols; ++j) a(row, layout_.at(p, j)) = -2.0 * m(j);
      }
    }
    for (const double x : {-spec_.d, spec_.d})
      for (Eigen::Index j = 0; j < layout_.cols; ++j, ++row)
        for (Eigen::Index i = 0; i < layout_.rows; ++i) a(row, layout_.at(i, j)) = std::pow(x, i);
    const Eigen::MatrixXcd at = a * layout_.basis;
    Eigen::MatrixXd real_a(2 * n_eq, at.cols());
    real_a << at.real(), at.imag();
    Eigen::VectorXd real_b(2 * n_eq);
    real_b << b.real(), b.imag();
    return real_a.completeOrthogonalDecomposition().solve(real_b);
  }

 private:
  static cplx value(const Eigen::VectorXcd& c, double x) {
    cplx acc = 0.0;
    for (Eigen::Index n = c.size() - 1; n >= 0; --n) acc = acc * x + c(n);
    return acc;
  }

  static cplx slope(const Eigen::VectorXcd& c, double x) {
    cplx acc = 0.0;
    for (Eigen::Index n = c.size() - 1; n >= 1; --n) acc = acc * x + static_cast<double>(n) * c(n);
    return acc;
  }

  // Coefficient of x^p in psi'' + k^2 psi.
  cplx free_part(const Eigen::VectorXcd& c, int p) const {
    cplx acc = spec_.k0 * spec_.k0 * c(p);
    if (p + 2 < c.size()) acc += static_cast<double>((p + 2) * (p + 1)) * c(p + 2);
    return acc;
  }

  // M_j = int_{-d}^{d} y^j psi(y) dy for j < cols.
  Eigen::VectorXcd kernel_moments(const Eigen::VectorXcd& c) const {
    Eigen::VectorXcd m = Eigen::VectorXcd::Zero(layout_.cols);
    for (Eigen::Index j = 0; j < layout_.cols; ++j)
      for (Eigen::Index n = 0; n < c.size(); ++n) m(j) += c(n) * moments_[static_cast<std::size_t>(j + n)];
    return m;
  }

  DeviceSpec spec_;
  Layout layout_;
  std::vector<double> moments_;
};

struct Candidate {
  Eigen::VectorXd z;
  double residual = 0.0;
  int iterations = 0;
};

// Levenberg-Marquardt on a real residual with a central-difference Jacobian.
Candidate levenberg_marquardt(const DesignSystem& system, Eigen::VectorXd z) {
  Eigen::VectorXd f = system.real_residual(z);
  double cost = f.squaredNorm();
  double lambda = -1.0;
  Candidate out{z, f.lpNorm<Eigen::Infinity>(), 0};
  for (int it = 0; it < max_iterations && out.residual > converged_residual; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd jac(f.size(), z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(z(k)));
      Eigen::VectorXd zp = z, zm = z;
      zp(k) += h;
      zm(k) -= h;
      jac.col(k) = (system.real_residual(zp) - system.real_residual(zm)) / (2.0 * h);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtf = jac.transpose() * f;
    if (lambda < 0.0) lambda = 1e-6 * std::max(1.0, jtj.diagonal().maxCoeff());
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd step = damped.ldlt().solve(-jtf);
      const Eigen::VectorXd trial = z + step;
      const Eigen::VectorXd ft = system.real_residual(trial);
      const double trial_cost = ft.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        z = trial;
        f = ft;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
    out.z = z;
    out.residual = f.lpNorm<Eigen::Infinity>();
  }
  return out;
}

bool close(cplx a, cplx b) { return std::abs(a - b) < 1e-12; }

bool is_free_space(const AmplitudeQuad& t) {
  return close(t.Tl, 1.0) && close(t.Tr, 1.0) && close(t.Rl, 0.0) && close(t.Rr, 0.0);
}

double amplitude_error(const AmplitudeQuad& a, const AmplitudeQuad& b) {
  return std::max({std::abs(a.Tl - b.Tl), std::abs(a.Tr - b.Tr), std::abs(a.Rl - b.Rl), std::abs(a.Rr - b.Rr)});
}

}  // namespace

std::string to_string(DesignConstraint c) {
  switch (c) {
    case DesignConstraint::none: return "none";
    case DesignConstraint::symmetryVIII: return "symmetryVIII";
    case DesignConstraint::nonlocalPT: return "nonlocalPT";
  }
  return "?";
}

DesignConstraint parse_constraint(std::string_view text) {
  std::string key;
  for (char c : text) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "none") return DesignConstraint::none;
  if (key == "viii" || key == "symmetryviii") return DesignConstraint::symmetryVIII;
  if (key == "pt" || key == "nonlocalpt") return DesignConstraint::nonlocalPT;
  throw InputError("unknown design constraint '" + std::string(text) + "'");
}

AmplitudeQuad default_targets(DeviceCode code) {
  switch (code) {
    case DeviceCode::TR_A: return {1.0, 0.0, -1.0, 0.0};
    case DeviceCode::T_R: return {1.0, 0.0, 0.0, -1.0};
    case DeviceCode::T_A: return {1.0, 0.0, 0.0, 0.0};
    case DeviceCode::TR_R: return {1.0, 0.0, -1.0, -1.0};
    case DeviceCode::R_A: return {0.0, 0.0, -1.0, 0.0};
    case DeviceCode::TR_T: return {1.0, -1.0, -1.0, 0.0};
  }
  return {};
}

DesignConstraint default_constraint(DeviceCode code) {
  switch (code) {
    case DeviceCode::T_A:
    case DeviceCode::TR_R: return DesignConstraint::symmetryVIII;
    case DeviceCode::TR_T: return DesignConstraint::nonlocalPT;
    default: return DesignConstraint::none;
  }
}

void DeviceSpec::validate() const {
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw InputError("design k0 must be positive and finite");
  if (!(d > 0.0) || !std::isfinite(d)) throw InputError("design half-width d must be positive and finite");
  for (const cplx t : {targets.Tl, targets.Tr, targets.Rl, targets.Rr})
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) throw InputError("design targets must be finite");

  if (code) {
    const std::array<int, 4> p = pattern(*code);
    const std::array<cplx, 4> t{targets.Tl, targets.Tr, targets.Rl, targets.Rr};
    for (int i = 0; i < 4; ++i)
      if (std::abs(std::abs(t[i]) - p[i]) > 1e-9)
        throw InputError("targets do not match the modulus pattern of device " + to_string(*code));
    const Symmetry imposed = constraint == DesignConstraint::symmetryVIII ? Symmetry::VIII : Symmetry::VII;
    if (constraint != DesignConstraint::none) {
      const auto forbidding = forbidding_symmetries(*code);
      if (std::find(forbidding.begin(), forbidding.end(), imposed) != forbidding.end())
        throw ForbiddenDeviceError("device " + to_string(*code) + " is forbidden by symmetry " +
                                   std::string(to_string(imposed)));
    }
  }
  if (constraint == DesignConstraint::symmetryVIII && std::abs(targets.Rl - targets.Rr) > 1e-12)
    throw InputError("symmetry VIII designs require R^l = R^r");
}

SolverConfig design_solver_config() {
  SolverConfig config;
  config.n_grid = 801;
  config.quadrature = QuadratureRule::simpson;
  return config;
}

DesignResult design_device(const DeviceSpec& spec) {
  spec.validate();
  if (spec.code == DeviceCode::R_A)
    throw InputError("R/A design is not implemented; it needs an external perfect absorber");

  DesignResult result;
  if (is_free_space(spec.targets)) {
    result.kernel = PolynomialKernel(spec.d, Eigen::MatrixXcd::Zero(1, 1));
    result.verification = scatter_all(result.kernel, spec.k0, design_solver_config());
    result.residual = amplitude_error(result.verification.quad(), spec.targets);
    return result;
  }

  const DesignSystem system(spec, make_layout(spec.constraint));
  const Eigen::VectorXcd cl = system.hermite_wave(Side::left);
  const Eigen::VectorXcd cr = system.hermite_wave(Side::right);
  const Eigen::VectorXd warm = system.pack(cl, cr, system.fit_kernel(cl, cr));

  std::vector<Candidate> converged;
  double best_residual = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt <= max_restarts + 1; ++attempt) {
    Eigen::VectorXd start;
    if (attempt == 0) {
      start = warm;
    } else if (attempt == 1) {
      start = Eigen::VectorXd::Zero(system.n_real());
    } else {
      start = warm;
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += 0.1 * (1.0 + std::abs(start(i))) * normal(rng);
    }
    if (attempt > 0) ++result.restarts;
    Candidate c = levenberg_marquardt(system, start);
    best_residual = std::min(best_residual, c.residual);
    if (c.residual <= converged_residual * (1.0 + c.z.lpNorm<Eigen::Infinity>())) converged.push_back(std::move(c));
    // Seeded restarts only run when neither the warm start nor the zero
    // start converges.
    if (attempt >= 1 && !converged.empty()) break;
  }
  if (converged.empty()) throw DesignError("design did not converge", best_residual);

  const auto kernel_norm = [&](const Candidate& c) { return system.unpack(c.z).v.norm(); };
  const Candidate& best = *std::min_element(converged.begin(), converged.end(), [&](const auto& a, const auto& b) {
    return kernel_norm(a) < kernel_norm(b);
  });

  const auto u = system.unpack(best.z);
  result.kernel = PolynomialKernel(spec.d, u.v);
  result.wave_left = u.cl;
  result.wave_right = u.cr;
  result.equation_residual = best.residual;
  result.iterations = best.iterations;

  SolverConfig config = design_solver_config();
  for (int refine = 0; refine < 2; ++refine) {
    result.verification = scatter_all(result.kernel, spec.k0, config);
    result.residual = amplitude_error(result.verification.quad(), spec.targets);
    if (result.residual < design_threshold) return result;
    config.n_grid = 2 * config.n_grid - 1;
  }
  throw DesignError("forward solve does not reproduce the targets", result.residual);
}

DesignVerification verify_design(const DesignResult& result, const AmplitudeQuad& targets, double k0, double k_lo,
                                 double k_hi, std::size_t n_points, const SolverConfig& config, double max_jump) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) throw InputError("verification window must satisfy 0 < k_lo < k_hi");
  if (n_points < 2) throw InputError("verification sweep needs at least 2 points");
  std::vector<double> ks = linspace(k_lo, k_hi, n_points);
  if (k0 >= k_lo && k0 <= k_hi && std::find(ks.begin(), ks.end(), k0) == ks.end()) ks.push_back(k0);

  DesignVerification out;
  out.table = k_sweep(result.kernel, ks, config);
  const SweepRow* prev = nullptr;
  std::string problem;
  for (const SweepRow& row : out.table.rows) {
    if (!row.amplitudes) {
      problem = "solver failed at k = " + std::to_string(row.k) + ": " + row.error;
      prev = nullptr;
      continue;
    }
    if (row.k == k0) out.k0_error = amplitude_error(row.amplitudes->quad(), targets);
    if (prev) {
      const auto& a = *prev->amplitudes;
      const auto& b = *row.amplitudes;
      out.max_step = std::max({out.max_step, std::abs(std::norm(a.Tl) - std::norm(b.Tl)),
                               std::abs(std::norm(a.Tr) - std::norm(b.Tr)),
                               std::abs(std::norm(a.Rl) - std::norm(b.Rl)),
                               std::abs(std::norm(a.Rr) - std::norm(b.Rr))});
    }
    prev = &row;
  }
  if (problem.empty() && out.k0_error >= design_threshold)
    problem = "amplitudes at k0 miss the targets by " + std::to_string(out.k0_error);
  if (problem.empty() && out.max_step > max_jump)
    problem = "coefficients jump by " + std::to_string(out.max_step) + " between neighbouring points";
  out.passed = problem.empty();
  out.message = out.passed ? "ok" : problem;
  return out;
}

}  // namespace nhscat
