#include "mimetic/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mimetic/errors.hpp"

namespace mimetic {

std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    p_prev = p;
    p = p_next;
  }
  double dp;
  if (std::abs(x) == 1.0) {
    dp = (x > 0 || n % 2 == 1 ? 1.0 : -1.0) * 0.5 * n * (n + 1);
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

GLLRule gll_rule(int order) {
  require(order >= 1 && order <= 64, ErrorKind::invalid_order,
          "GLL order must satisfy 1 <= N <= 64, got " + std::to_string(order));
  const int n = order;
  GLLRule rule;
  rule.order = n;
  rule.nodes.assign(n + 1, 0.0);
  rule.weights.assign(n + 1, 0.0);
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;

  // Interior nodes are the roots of L_N'; Newton with L_N'' from the Legendre
  // equation (1-x^2) L'' = 2x L' - N(N+1) L.
  for (int i = 1; i <= n / 2; ++i) {
    double x = -std::cos(std::numbers::pi * i / n);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double ddp = (2.0 * x * dp - n * (n + 1) * p) / (1.0 - x * x);
      const double dx = dp / ddp;
      x -= dx;
      if (std::abs(dx) < 1e-14) {
        converged = true;
        break;
      }
    }
    require(converged, ErrorKind::numerical_failure,
            "GLL Newton iteration did not converge for N = " + std::to_string(n));
    rule.nodes[i] = x;
    rule.nodes[n - i] = -x;
  }
  if (n % 2 == 0) rule.nodes[n / 2] = 0.0;

  for (int i = 0; i <= n; ++i) {
    const double p = legendre(n, rule.nodes[i]).first;
    rule.weights[i] = 2.0 / (n * (n + 1) * p * p);
  }
  return rule;
}

QuadratureRule gauss_legendre(int points) {
  require(points >= 1 && points <= 128, ErrorKind::invalid_order,
          "Gauss-Legendre rule needs 1..128 points, got " + std::to_string(points));
  const int n = points;
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        converged = true;
        break;
      }
    }
    require(converged, ErrorKind::numerical_failure,
            "Gauss-Legendre Newton iteration did not converge");
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule map_rule(const QuadratureRule& rule, double a, double b) {
  QuadratureRule out;
  out.nodes.resize(rule.nodes.size());
  out.weights.resize(rule.weights.size());
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes[i] = a + half * (rule.nodes[i] + 1.0);
    out.weights[i] = half * rule.weights[i];
  }
  return out;
}

BasisFamily1D::BasisFamily1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  require(!nodes_.empty(), ErrorKind::invalid_input, "basis family needs at least one node");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    require(nodes_[i] > nodes_[i - 1], ErrorKind::invalid_input,
            "basis nodes must be strictly increasing");
  }
  const std::size_t n = nodes_.size();
  bary_.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) bary_[j] /= (nodes_[j] - nodes_[k]);
    }
  }
}

double BasisFamily1D::lagrange(int i, double x) const {
  require(i >= 0 && i <= order(), ErrorKind::invalid_index, "Lagrange index out of range");
  return lagrange_all(x)[i];
}

double BasisFamily1D::lagrange_derivative(int i, double x) const {
  require(i >= 0 && i <= order(), ErrorKind::invalid_index, "Lagrange index out of range");
  return lagrange_derivative_all(x)[i];
}

double BasisFamily1D::edge(int i, double x) const {
  require(i >= 1 && i <= order(), ErrorKind::invalid_index, "edge index out of range");
  return edge_all(x)[i - 1];
}

Eigen::VectorXd BasisFamily1D::lagrange_all(double x) const {
  const int n = static_cast<int>(nodes_.size());
  Eigen::VectorXd h(n);
  for (int k = 0; k < n; ++k) {
    if (x == nodes_[k]) {
      h.setZero();
      h[k] = 1.0;
      return h;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < n; ++k) {
    h[k] = bary_[k] / (x - nodes_[k]);
    denom += h[k];
  }
  return h / denom;
}

Eigen::VectorXd BasisFamily1D::lagrange_derivative_all(double x) const {
  const int n = static_cast<int>(nodes_.size());
  Eigen::VectorXd d(n);
  for (int m = 0; m < n; ++m) {
    if (x == nodes_[m]) {
      double diag = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == m) continue;
        d[k] = (bary_[k] / bary_[m]) / (nodes_[m] - nodes_[k]);
        diag += 1.0 / (nodes_[m] - nodes_[k]);
      }
      d[m] = diag;
      return d;
    }
  }
  const Eigen::VectorXd h = lagrange_all(x);
  Eigen::VectorXd inv(n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    inv[k] = 1.0 / (x - nodes_[k]);
    total += inv[k];
  }
  for (int i = 0; i < n; ++i) d[i] = h[i] * (total - inv[i]);
  return d;
}

Eigen::VectorXd BasisFamily1D::edge_all(double x) const {
  const Eigen::VectorXd d = lagrange_derivative_all(x);
  const int n = order();
  Eigen::VectorXd e(n);
  double running = 0.0;
  for (int i = 1; i <= n; ++i) {
    running -= d[i - 1];
    e[i - 1] = running;
  }
  return e;
}

int basis_size(int degree, int order) {
  switch (degree) {
    case 0: return (order + 1) * (order + 1);
    case 1: return 2 * order * (order + 1);
    case 2: return order * order;
    default: throw Error(ErrorKind::invalid_degree, "form degree must be 0, 1 or 2");
  }
}

DiscreteForm::DiscreteForm(int degree, std::shared_ptr<const BasisFamily1D> family,
                           Eigen::VectorXd coefficients)
    : degree_(degree), family_(std::move(family)), coefficients_(std::move(coefficients)) {
  require(family_ != nullptr, ErrorKind::invalid_input, "discrete form needs a basis family");
  require(coefficients_.size() == basis_size(degree_, family_->order()),
          ErrorKind::invalid_input, "coefficient count does not match the basis");
}

std::vector<std::array<int, 2>> DiscreteForm::component_shapes() const {
  const int n = family_->order();
  switch (degree_) {
    case 0: return {{n + 1, n + 1}};
    case 1: return {{n + 1, n}, {n, n + 1}};
    default: return {{n, n}};
  }
}

std::vector<double> DiscreteForm::evaluate(double xi, double eta) const {
  const int n = family_->order();
  const auto& c = coefficients_;
  switch (degree_) {
    case 0: {
      const auto hx = family_->lagrange_all(xi);
      const auto hy = family_->lagrange_all(eta);
      double v = 0.0;
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) v += c[j * (n + 1) + i] * hx[i] * hy[j];
      return {v};
    }
    case 1: {
      const auto hx = family_->lagrange_all(xi);
      const auto hy = family_->lagrange_all(eta);
      const auto ex = family_->edge_all(xi);
      const auto ey = family_->edge_all(eta);
      double vx = 0.0, vy = 0.0;
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) vx += c[j * n + i] * ex[i] * hy[j];
      const int off = n * (n + 1);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) vy += c[off + j * (n + 1) + i] * hx[i] * ey[j];
      return {vx, vy};
    }
    default: {
      const auto ex = family_->edge_all(xi);
      const auto ey = family_->edge_all(eta);
      double v = 0.0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v += c[j * n + i] * ex[i] * ey[j];
      return {v};
    }
  }
}

std::vector<double> DiscreteForm::derivative(double xi, double eta) const {
  const int n = family_->order();
  const auto& c = coefficients_;
  switch (degree_) {
    case 0: {
      const auto hx = family_->lagrange_all(xi);
      const auto hy = family_->lagrange_all(eta);
      const auto dx = family_->lagrange_derivative_all(xi);
      const auto dy = family_->lagrange_derivative_all(eta);
      double vx = 0.0, vy = 0.0;
      for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
          vx += c[j * (n + 1) + i] * dx[i] * hy[j];
          vy += c[j * (n + 1) + i] * hx[i] * dy[j];
        }
      }
      return {vx, vy};
    }
    case 1: {
      // d(u dxi + v deta) = (dv/dxi - du/deta) dxi^deta
      const auto ex = family_->edge_all(xi);
      const auto ey = family_->edge_all(eta);
      const auto dx = family_->lagrange_derivative_all(xi);
      const auto dy = family_->lagrange_derivative_all(eta);
      double du_deta = 0.0, dv_dxi = 0.0;
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) du_deta += c[j * n + i] * ex[i] * dy[j];
      const int off = n * (n + 1);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) dv_dxi += c[off + j * (n + 1) + i] * dx[i] * ey[j];
      return {dv_dxi - du_deta};
    }
    default:
      throw Error(ErrorKind::cannot_raise_degree, "exterior derivative of a 2-form in 2D");
  }
}

Cochain reduce(const FormField& form, const TensorCellComplex& complex, int quad_points) {
  const int expected_components = form.degree == 1 ? 2 : 1;
  require(form.degree >= 0 && form.degree <= 2, ErrorKind::invalid_input,
          "form degree must be 0, 1 or 2");
  require(static_cast<int>(form.components.size()) == expected_components,
          ErrorKind::invalid_input, "form has the wrong number of components for its degree");
  const QuadratureRule ref = gauss_legendre(quad_points);
  const auto& xs = complex.nodes_xi();
  const auto& ys = complex.nodes_eta();
  const int nx = complex.cells_xi();
  const int ny = complex.cells_eta();

  Eigen::VectorXd out(complex.num_cells(form.degree));
  switch (form.degree) {
    case 0:
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) out[complex.point(i, j)] = form.components[0](xs[i], ys[j]);
      break;
    case 1:
      for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const auto q = map_rule(ref, xs[i], xs[i + 1]);
          double s = 0.0;
          for (int p = 0; p < q.size(); ++p) s += q.weights[p] * form.components[0](q.nodes[p], ys[j]);
          out[complex.xi_edge(i, j)] = s;
        }
      }
      for (int j = 0; j < ny; ++j) {
        const auto q = map_rule(ref, ys[j], ys[j + 1]);
        for (int i = 0; i <= nx; ++i) {
          double s = 0.0;
          for (int p = 0; p < q.size(); ++p) s += q.weights[p] * form.components[1](xs[i], q.nodes[p]);
          out[complex.eta_edge(i, j)] = s;
        }
      }
      break;
    default:
      for (int j = 0; j < ny; ++j) {
        const auto qy = map_rule(ref, ys[j], ys[j + 1]);
        for (int i = 0; i < nx; ++i) {
          const auto qx = map_rule(ref, xs[i], xs[i + 1]);
          double s = 0.0;
          for (int b = 0; b < qy.size(); ++b)
            for (int a = 0; a < qx.size(); ++a)
              s += qx.weights[a] * qy.weights[b] * form.components[0](qx.nodes[a], qy.nodes[b]);
          out[complex.surface(i, j)] = s;
        }
      }
      break;
  }
  return {form.degree, std::move(out)};
}

DiscreteForm reconstruct(const Cochain& c, std::shared_ptr<const BasisFamily1D> family) {
  require(family != nullptr, ErrorKind::invalid_input, "reconstruct needs a basis family");
  require(c.degree >= 0 && c.degree <= 2, ErrorKind::invalid_input, "cochain degree out of range");
  require(c.coefficients.size() == basis_size(c.degree, family->order()), ErrorKind::invalid_input,
          "cochain size does not match the basis family");
  return DiscreteForm(c.degree, std::move(family), c.coefficients);
}

TensorCellComplex complex_of(const BasisFamily1D& family) {
  return build_primal_complex(family.nodes(), family.nodes());
}

DiscreteForm project(const FormField& form, std::shared_ptr<const BasisFamily1D> family,
                     int quad_points) {
  require(family != nullptr, ErrorKind::invalid_input, "project needs a basis family");
  const auto complex = complex_of(*family);
  return reconstruct(reduce(form, complex, quad_points), std::move(family));
}

}  // namespace mimetic
