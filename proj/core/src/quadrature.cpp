#include "nhscat/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "nhscat/errors.hpp"

namespace nhscat {

namespace {

constexpr std::size_t gauss_order = 16;

// Uniform nodes with node(n-1-i) == a + b - node(i) exactly.
std::vector<double> uniform_nodes(double a, double b, std::size_t n) {
  std::vector<double> x(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (i == j)
      x[i] = mid;
    else
      x[i] = i < j ? a + h * static_cast<double>(i) : b - h * static_cast<double>(j);
  }
  return x;
}

struct GaussRule {
  std::vector<double> t;  // nodes on [-1, 1], ascending
  std::vector<double> w;
  // partial[i][a] = int_{-1}^{t_i} l_a(s) ds for the Lagrange basis l_a
  std::vector<std::vector<double>> partial;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    using boost::math::quadrature::gauss;
    const auto& abscissa = gauss<double, gauss_order>::abscissa();
    const auto& weights = gauss<double, gauss_order>::weights();
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) {
        pts.emplace_back(0.0, weights[i]);
      } else {
        pts.emplace_back(abscissa[i], weights[i]);
        pts.emplace_back(-abscissa[i], weights[i]);
      }
    }
    std::sort(pts.begin(), pts.end());
    GaussRule r;
    const std::size_t p = pts.size();
    for (const auto& [t, w] : pts) {
      r.t.push_back(t);
      r.w.push_back(w);
    }
    // Interpolant coefficients in the Legendre basis come from the discrete
    // transform (exact for degree < 2p); each P_n integrates in closed form.
    Eigen::MatrixXd to_legendre(p, p);
    for (std::size_t n = 0; n < p; ++n)
      for (std::size_t a = 0; a < p; ++a)
        to_legendre(n, a) = 0.5 * (2.0 * n + 1.0) * r.w[a] * std::legendre(static_cast<unsigned>(n), r.t[a]);
    Eigen::MatrixXd integrated(p, p);
    for (std::size_t i = 0; i < p; ++i) {
      const double t = r.t[i];
      integrated(i, 0) = t + 1.0;
      for (std::size_t n = 1; n < p; ++n) {
        const auto un = static_cast<unsigned>(n);
        integrated(i, n) = (std::legendre(un + 1, t) - std::legendre(un - 1, t)) / (2.0 * n + 1.0);
      }
    }
    const Eigen::MatrixXd c = integrated * to_legendre;
    r.partial.assign(p, std::vector<double>(p));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t a = 0; a < p; ++a) r.partial[i][a] = c(i, a);
    return r;
  }();
  return rule;
}

}  // namespace

Quadrature Quadrature::trapezoid(double a, double b, std::size_t n) {
  if (n < 2) throw InputError("trapezoid rule needs at least 2 points");
  if (!(b > a)) throw InputError("quadrature interval must be non-empty");
  Quadrature q;
  q.a_ = a;
  q.b_ = b;
  q.nodes_ = uniform_nodes(a, b, n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) q.panels_.push_back({j, {0.5 * h, 0.5 * h}, q.nodes_[j + 1]});
  q.before_.resize(n);
  q.owner_first_.assign(n, 0);
  q.partial_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) q.before_[i] = i;
  q.finalize();
  return q;
}

Quadrature Quadrature::simpson(double a, double b, std::size_t n) {
  if (n < 3 || n % 2 == 0) throw InputError("Simpson rule needs an odd number of points >= 3");
  if (!(b > a)) throw InputError("quadrature interval must be non-empty");
  Quadrature q;
  q.a_ = a;
  q.b_ = b;
  q.nodes_ = uniform_nodes(a, b, n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t m = 0; 2 * m + 2 < n; ++m)
    q.panels_.push_back({2 * m, {h / 3.0, 4.0 * h / 3.0, h / 3.0}, q.nodes_[2 * m + 2]});
  q.before_.resize(n);
  q.owner_first_.assign(n, 0);
  q.partial_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      q.before_[i] = i / 2;
    } else {
      // int over [x_{i-1}, x_i] of the quadratic through x_{i-1}, x_i, x_{i+1}
      q.before_[i] = (i - 1) / 2;
      q.owner_first_[i] = i - 1;
      q.partial_[i] = {5.0 * h / 12.0, 8.0 * h / 12.0, -h / 12.0};
    }
  }
  q.finalize();
  return q;
}

Quadrature Quadrature::uniform(double a, double b, std::size_t n, QuadratureRule rule) {
  return rule == QuadratureRule::simpson ? simpson(a, b, n) : trapezoid(a, b, n);
}

Quadrature Quadrature::graded_gauss(double half_width, double finest, double max_panel) {
  if (!(half_width > 0.0) || !(finest > 0.0) || !(max_panel > 0.0))
    throw InputError("graded mesh parameters must be positive");

  std::vector<double> right{0.0};
  double width = std::min(finest, half_width);
  while (true) {
    const double next = right.back() + width;
    if (width > max_panel || next >= half_width) break;
    right.push_back(next);
    width = right.back();
  }
  const double rest = half_width - right.back();
  if (rest > 0.0) {
    const auto m = static_cast<std::size_t>(std::ceil(rest / max_panel - 1e-12));
    const double start = right.back();
    for (std::size_t i = 1; i < m; ++i) right.push_back(start + rest * static_cast<double>(i) / m);
    right.push_back(half_width);
  }
  std::vector<double> breaks;
  for (auto it = right.rbegin(); it != right.rend(); ++it) breaks.push_back(-*it);
  for (std::size_t i = 1; i < right.size(); ++i) breaks.push_back(right[i]);

  const GaussRule& rule = gauss_rule();
  const std::size_t p = rule.t.size();
  Quadrature q;
  q.a_ = -half_width;
  q.b_ = half_width;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    Panel panel{q.nodes_.size(), {}, hi};
    for (std::size_t a = 0; a < p; ++a) {
      q.nodes_.push_back(mid + half * rule.t[a]);
      panel.w.push_back(half * rule.w[a]);
      q.before_.push_back(k);
      q.owner_first_.push_back(panel.first);
      std::vector<double> row(p);
      for (std::size_t b = 0; b < p; ++b) row[b] = half * rule.partial[a][b];
      q.partial_.push_back(std::move(row));
    }
    q.panels_.push_back(std::move(panel));
  }
  q.finalize();
  return q;
}

void Quadrature::finalize() {
  weights_.assign(nodes_.size(), 0.0);
  for (const Panel& panel : panels_)
    for (std::size_t a = 0; a < panel.w.size(); ++a) weights_[panel.first + a] += panel.w[a];
}

Eigen::Map<const Eigen::VectorXd> Quadrature::node_vector() const {
  return {nodes_.data(), static_cast<Eigen::Index>(nodes_.size())};
}

Eigen::Map<const Eigen::VectorXd> Quadrature::weight_vector() const {
  return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
}

Eigen::MatrixXcd Quadrature::cumulative_left(const Eigen::MatrixXcd& f) const {
  if (static_cast<std::size_t>(f.rows()) != size()) throw InputError("cumulative integral: size mismatch");
  const Eigen::Index cols = f.cols();
  Eigen::MatrixXcd prefix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(panels_.size()) + 1, cols);
  for (std::size_t k = 0; k < panels_.size(); ++k) {
    const Panel& panel = panels_[k];
    auto acc = prefix.row(static_cast<Eigen::Index>(k) + 1);
    acc = prefix.row(static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < panel.w.size(); ++a) acc += panel.w[a] * f.row(static_cast<Eigen::Index>(panel.first + a));
  }
  Eigen::MatrixXcd out(f.rows(), cols);
  for (std::size_t i = 0; i < size(); ++i) {
    auto row = out.row(static_cast<Eigen::Index>(i));
    row = prefix.row(static_cast<Eigen::Index>(before_[i]));
    const auto& part = partial_[i];
    for (std::size_t a = 0; a < part.size(); ++a)
      row += part[a] * f.row(static_cast<Eigen::Index>(owner_first_[i] + a));
  }
  return out;
}

Eigen::MatrixXcd Quadrature::cumulative_right(const Eigen::MatrixXcd& f) const {
  const Eigen::RowVectorXcd total = weight_vector().transpose().cast<std::complex<double>>() * f;
  Eigen::MatrixXcd left = cumulative_left(f);
  return (-left).rowwise() + total;
}

Eigen::MatrixXd Quadrature::cumulative_left_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < before_[i]; ++k) {
      const Panel& panel = panels_[k];
      for (std::size_t a = 0; a < panel.w.size(); ++a)
        l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(panel.first + a)) += panel.w[a];
    }
    const auto& part = partial_[i];
    for (std::size_t a = 0; a < part.size(); ++a)
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(owner_first_[i] + a)) += part[a];
  }
  return l;
}

}  // namespace nhscat
