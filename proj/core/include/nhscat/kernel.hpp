#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <variant>

#include <Eigen/Dense>

#include "nhscat/symmetry_code.hpp"

namespace nhscat {

using cplx = std::complex<double>;

/// Uniform grid of n points on [-d, d], endpoints included.
class UniformGrid {
 public:
  UniformGrid(double d, std::size_t n);

  double half_width() const noexcept { return d_; }
  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return 2.0 * d_ / static_cast<double>(n_ - 1); }

  /// Node i; node n-1-i is exactly -node(i).
  double operator[](std::size_t i) const noexcept;

 private:
  double d_;
  std::size_t n_;
};

/// Kernel tabulated on a uniform grid of [-d, d].
///
/// A nonlocal kernel stores the full N x N matrix V(x_i, y_j). A local kernel
/// V(x) delta(x - y) stores only the profile V(x_i).
class SampledKernel {
 public:
  SampledKernel(double d, Eigen::MatrixXcd values);
  static SampledKernel local(double d, Eigen::VectorXcd profile);

  /// Tabulate f(x, y) on an n-point grid.
  static SampledKernel from_function(double d, std::size_t n,
                                     const std::function<cplx(double, double)>& f);
  /// Tabulate a local profile f(x) on an n-point grid.
  static SampledKernel local_from_function(double d, std::size_t n,
                                           const std::function<cplx(double)>& f);

  UniformGrid grid() const { return UniformGrid(d_, size()); }
  double half_width() const noexcept { return d_; }
  std::size_t size() const noexcept;
  bool is_local() const noexcept { return local_; }

  /// Full matrix; empty for local kernels.
  const Eigen::MatrixXcd& values() const noexcept { return values_; }
  /// Local profile; empty for nonlocal kernels.
  const Eigen::VectorXcd& profile() const noexcept { return profile_; }

  /// Largest absolute stored value.
  double sup_norm() const;

 private:
  SampledKernel() = default;

  double d_ = 1.0;
  bool local_ = false;
  Eigen::MatrixXcd values_;
  Eigen::VectorXcd profile_;
};

/// V(x, y) = sum_ij v_ij x^i y^j on [-d, d]^2, zero outside.
class PolynomialKernel {
 public:
  static constexpr Eigen::Index max_degree = 5;

  PolynomialKernel(double d, Eigen::MatrixXcd coeffs);

  double half_width() const noexcept { return d_; }
  Eigen::Index imax() const noexcept { return coeffs_.rows() - 1; }
  Eigen::Index jmax() const noexcept { return coeffs_.cols() - 1; }
  const Eigen::MatrixXcd& coeffs() const noexcept { return coeffs_; }

  /// Polynomial value without the support cut-off.
  cplx polynomial(double x, double y) const;

 private:
  double d_;
  Eigen::MatrixXcd coeffs_;
};

/// Local PT-symmetric potential alpha / (x - i eps)^2, truncated to [-d, d].
///
/// `mirrored` selects alpha / (x + i eps)^2, the image of the former under
/// parity or conjugation; it keeps the family closed under all eight
/// kernel transforms.
struct RegularizedInverseSquare {
  double alpha = 0.0;
  double epsilon = 1e-4;
  double d = 1.0;
  bool mirrored = false;

  cplx operator()(double x) const;
};

using PotentialKernel = std::variant<SampledKernel, PolynomialKernel, RegularizedInverseSquare>;

double support_half_width(const PotentialKernel& kernel);
bool is_local(const PotentialKernel& kernel);

/// V(x, y), zero whenever |x| > d or |y| > d.
///
/// Local kernels return their profile V(x), i.e. the coefficient of
/// delta(x - y); y only takes part in the support test. Sampled kernels are
/// interpolated bilinearly between grid nodes.
cplx evaluate(const PotentialKernel& kernel, double x, double y);

/// Kernel-level action of a symmetry code (Table of relations for <x|V|y>):
///   I: V(x,y)      II: V(y,x)*     III: V(-x,-y)   IV: V(-y,-x)*
///   V: V(x,y)*     VI: V(y,x)      VII: V(-x,-y)*  VIII: V(-y,-x)
PotentialKernel transform(const PotentialKernel& kernel, Symmetry which);
SampledKernel transform(const SampledKernel& kernel, Symmetry which);
PolynomialKernel transform(const PolynomialKernel& kernel, Symmetry which);
RegularizedInverseSquare transform(const RegularizedInverseSquare& kernel, Symmetry which);

/// V^dagger(x, y) = V(y, x)*.
PotentialKernel adjoint(const PotentialKernel& kernel);

/// Infinite-line Fourier transform (1/sqrt(2 pi)) int V(x) e^{-ikx} dx of the
/// untruncated profile: sqrt(2 pi) alpha k e^{eps k} for k < 0, zero for k >= 0
/// (mirror image for the mirrored variant).
cplx fourier_transform_local(const RegularizedInverseSquare& potential, double k);

/// Tabulate any kernel on an n-point uniform grid of its support.
SampledKernel sample(const PotentialKernel& kernel, std::size_t n);

/// max_y |V(+-d, y)| / max |V| over a fine tabulation; zero for the zero kernel.
double edge_vanishing_residual(const PolynomialKernel& kernel);

}  // namespace nhscat
