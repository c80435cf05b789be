#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nhscat {

enum class QuadratureRule { trapezoid, simpson };

/// Composite quadrature on [a, b] with cumulative (running) integrals.
///
/// Besides the ordinary weights, each node x_i carries a rule for
/// int_a^{x_i} f, which the Lippmann-Schwinger solver needs to integrate
/// across the kink of e^{ik|x - x'|} without losing order. The interval is
/// split into panels; a node either sits on a panel boundary or strictly
/// inside one panel, where a local interpolatory rule finishes the running
/// integral.
class Quadrature {
 public:
  /// Uniform grid of n >= 2 points, composite trapezoid.
  static Quadrature trapezoid(double a, double b, std::size_t n);
  /// Uniform grid of odd n >= 3 points, composite Simpson. Running integrals
  /// to odd nodes close with the three-point quadratic rule, so they stay
  /// fourth order.
  static Quadrature simpson(double a, double b, std::size_t n);
  static Quadrature uniform(double a, double b, std::size_t n, QuadratureRule rule);

  /// 16-point Gauss-Legendre panels on [-half_width, half_width], graded
  /// geometrically towards x = 0: the innermost panels have width `finest`,
  /// each further panel doubles until `max_panel` is reached. Symmetric
  /// under x -> -x.
  static Quadrature graded_gauss(double half_width, double finest, double max_panel);

  std::size_t size() const noexcept { return nodes_.size(); }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  Eigen::Map<const Eigen::VectorXd> node_vector() const;
  Eigen::Map<const Eigen::VectorXd> weight_vector() const;

  /// Row i holds int_a^{x_i} of each column of f (f sampled on the nodes).
  Eigen::MatrixXcd cumulative_left(const Eigen::MatrixXcd& f) const;
  /// Row i holds int_{x_i}^b of each column of f.
  Eigen::MatrixXcd cumulative_right(const Eigen::MatrixXcd& f) const;

  /// Dense matrix L with (L f)_i = int_a^{x_i} f.
  Eigen::MatrixXd cumulative_left_matrix() const;

 private:
  struct Panel {
    std::size_t first = 0;      // first node index used by the panel rule
    std::vector<double> w;      // panel weights on nodes first..first+w.size()-1
    double hi = 0.0;            // right end of the panel
  };

  Quadrature() = default;
  void finalize();

  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<Panel> panels_;
  // Per node: number of panels lying entirely to its left, and the partial
  // rule inside its owning panel (empty when the node is a panel boundary).
  std::vector<std::size_t> before_;
  std::vector<std::size_t> owner_first_;
  std::vector<std::vector<double>> partial_;
};

}  // namespace nhscat
