#include "nhscat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Locate x on the grid: returns the left node index and the fractional offset.
std::pair<std::size_t, double> locate(const UniformGrid& grid, double x) {
  const double t = (x + grid.half_width()) / grid.step();
  const auto last = static_cast<double>(grid.size() - 1);
  const double clamped = std::clamp(t, 0.0, last);
  auto i = static_cast<std::size_t>(std::floor(clamped));
  if (i >= grid.size() - 1) i = grid.size() - 2;
  return {i, clamped - static_cast<double>(i)};
}

bool outside(double d, double x, double y) { return std::abs(x) > d || std::abs(y) > d; }

}  // namespace

UniformGrid::UniformGrid(double d, std::size_t n) : d_(d), n_(n) {
  if (!(d > 0.0)) throw InputError("grid half-width must be positive");
  if (n < 3) throw InputError("grid needs at least 3 points");
}

double UniformGrid::operator[](std::size_t i) const noexcept {
  // Symmetric construction so that node(n-1-i) == -node(i) exactly.
  const std::size_t j = n_ - 1 - i;
  if (i == j) return 0.0;
  const double h = step();
  return i < j ? -d_ + h * static_cast<double>(i) : d_ - h * static_cast<double>(j);
}

SampledKernel::SampledKernel(double d, Eigen::MatrixXcd values) : d_(d), values_(std::move(values)) {
  if (!(d > 0.0)) throw InputError("kernel half-width must be positive");
  if (values_.rows() != values_.cols()) throw InputError("sampled kernel must be square");
  if (values_.rows() < 3) throw InputError("sampled kernel needs at least 3 grid points");
}

SampledKernel SampledKernel::local(double d, Eigen::VectorXcd profile) {
  if (!(d > 0.0)) throw InputError("kernel half-width must be positive");
  if (profile.size() < 3) throw InputError("sampled kernel needs at least 3 grid points");
  SampledKernel k;
  k.d_ = d;
  k.local_ = true;
  k.profile_ = std::move(profile);
  return k;
}

SampledKernel SampledKernel::from_function(double d, std::size_t n,
                                           const std::function<cplx(double, double)>& f) {
  const UniformGrid grid(d, n);
  Eigen::MatrixXcd v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = f(grid[i], grid[j]);
  return SampledKernel(d, std::move(v));
}

SampledKernel SampledKernel::local_from_function(double d, std::size_t n,
                                                 const std::function<cplx(double)>& f) {
  const UniformGrid grid(d, n);
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = f(grid[i]);
  return local(d, std::move(v));
}

std::size_t SampledKernel::size() const noexcept {
  return static_cast<std::size_t>(local_ ? profile_.size() : values_.rows());
}

double SampledKernel::sup_norm() const {
  if (local_) return profile_.size() ? profile_.cwiseAbs().maxCoeff() : 0.0;
  return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
}

PolynomialKernel::PolynomialKernel(double d, Eigen::MatrixXcd coeffs) : d_(d), coeffs_(std::move(coeffs)) {
  if (!(d > 0.0)) throw InputError("kernel half-width must be positive");
  if (coeffs_.rows() < 1 || coeffs_.cols() < 1) throw InputError("polynomial kernel needs coefficients");
  if (coeffs_.rows() - 1 > max_degree || coeffs_.cols() - 1 > max_degree)
    throw InputError("polynomial kernel degree exceeds 5");
}

cplx PolynomialKernel::polynomial(double x, double y) const {
  // Horner in y for each row, then in x.
  cplx acc = 0.0;
  for (Eigen::Index i = coeffs_.rows() - 1; i >= 0; --i) {
    cplx row = 0.0;
    for (Eigen::Index j = coeffs_.cols() - 1; j >= 0; --j) row = row * y + coeffs_(i, j);
    acc = acc * x + row;
  }
  return acc;
}

cplx RegularizedInverseSquare::operator()(double x) const {
  const cplx shifted(x, mirrored ? epsilon : -epsilon);
  return alpha / (shifted * shifted);
}

double support_half_width(const PotentialKernel& kernel) {
  return std::visit(overloaded{[](const SampledKernel& k) { return k.half_width(); },
                               [](const PolynomialKernel& k) { return k.half_width(); },
                               [](const RegularizedInverseSquare& k) { return k.d; }},
                    kernel);
}

bool is_local(const PotentialKernel& kernel) {
  return std::visit(overloaded{[](const SampledKernel& k) { return k.is_local(); },
                               [](const PolynomialKernel&) { return false; },
                               [](const RegularizedInverseSquare&) { return true; }},
                    kernel);
}

cplx evaluate(const PotentialKernel& kernel, double x, double y) {
  return std::visit(
      overloaded{
          [&](const SampledKernel& k) -> cplx {
            if (outside(k.half_width(), x, y)) return 0.0;
            const UniformGrid grid = k.grid();
            const auto [i, tx] = locate(grid, x);
            if (k.is_local()) return (1.0 - tx) * k.profile()(i) + tx * k.profile()(i + 1);
            const auto [j, ty] = locate(grid, y);
            const auto& v = k.values();
            return (1.0 - tx) * ((1.0 - ty) * v(i, j) + ty * v(i, j + 1)) +
                   tx * ((1.0 - ty) * v(i + 1, j) + ty * v(i + 1, j + 1));
          },
          [&](const PolynomialKernel& k) -> cplx {
            if (outside(k.half_width(), x, y)) return 0.0;
            return k.polynomial(x, y);
          },
          [&](const RegularizedInverseSquare& k) -> cplx {
            if (outside(k.d, x, y)) return 0.0;
            return k(x);
          }},
      kernel);
}

SampledKernel transform(const SampledKernel& kernel, Symmetry which) {
  const KernelAction a = action(which);
  if (kernel.is_local()) {
    // Transposition leaves V(x) delta(x-y) unchanged.
    Eigen::VectorXcd p = kernel.profile();
    if (a.parity) p.reverseInPlace();
    if (a.conjugate) p = p.conjugate().eval();
    return SampledKernel::local(kernel.half_width(), std::move(p));
  }
  Eigen::MatrixXcd v = kernel.values();
  if (a.transpose) v.transposeInPlace();
  if (a.parity) v = v.reverse().eval();
  if (a.conjugate) v = v.conjugate().eval();
  return SampledKernel(kernel.half_width(), std::move(v));
}

PolynomialKernel transform(const PolynomialKernel& kernel, Symmetry which) {
  const KernelAction a = action(which);
  Eigen::MatrixXcd c = kernel.coeffs();
  if (a.transpose) c.transposeInPlace();
  if (a.parity) {
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j)
        if ((i + j) % 2 != 0) c(i, j) = -c(i, j);
  }
  if (a.conjugate) c = c.conjugate().eval();
  return PolynomialKernel(kernel.half_width(), std::move(c));
}

RegularizedInverseSquare transform(const RegularizedInverseSquare& kernel, Symmetry which) {
  // alpha is real: conjugation and parity each move the pole to the other half plane.
  const KernelAction a = action(which);
  RegularizedInverseSquare out = kernel;
  if (a.conjugate != a.parity) out.mirrored = !out.mirrored;
  return out;
}

PotentialKernel transform(const PotentialKernel& kernel, Symmetry which) {
  return std::visit([which](const auto& k) -> PotentialKernel { return transform(k, which); }, kernel);
}

PotentialKernel adjoint(const PotentialKernel& kernel) { return transform(kernel, Symmetry::II); }

cplx fourier_transform_local(const RegularizedInverseSquare& potential, double k) {
  if (!(potential.epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double q = potential.mirrored ? -k : k;
  if (q >= 0.0) return 0.0;
  return std::sqrt(2.0 * std::numbers::pi) * potential.alpha * q * std::exp(potential.epsilon * q);
}

SampledKernel sample(const PotentialKernel& kernel, std::size_t n) {
  const double d = support_half_width(kernel);
  if (const auto* s = std::get_if<SampledKernel>(&kernel)) {
    if (s->size() == n) return *s;
  }
  if (is_local(kernel))
    return SampledKernel::local_from_function(d, n, [&](double x) { return evaluate(kernel, x, x); });
  return SampledKernel::from_function(d, n, [&](double x, double y) { return evaluate(kernel, x, y); });
}

double edge_vanishing_residual(const PolynomialKernel& kernel) {
  constexpr std::size_t n = 201;
  const double d = kernel.half_width();
  const UniformGrid grid(d, n);
  double edge = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) peak = std::max(peak, std::abs(kernel.polynomial(grid[i], grid[j])));
    edge = std::max({edge, std::abs(kernel.polynomial(d, grid[i])), std::abs(kernel.polynomial(-d, grid[i]))});
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace nhscat
