#include "mimetic/assembly.hpp"

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {

std::vector<double> extended(const std::vector<double>& dual_nodes) {
  std::vector<double> ext;
  ext.reserve(dual_nodes.size() + 2);
  ext.push_back(-1.0);
  ext.insert(ext.end(), dual_nodes.begin(), dual_nodes.end());
  ext.push_back(1.0);
  return ext;
}

void check_dual_nodes(const BasisFamily1D& family, const std::vector<double>& dual_nodes) {
  require(static_cast<int>(dual_nodes.size()) == family.order(), ErrorKind::invalid_input,
          "need exactly N dual nodes per direction");
  const auto& x = family.nodes();
  for (std::size_t i = 0; i < dual_nodes.size(); ++i) {
    require(dual_nodes[i] > x[i] && dual_nodes[i] < x[i + 1], ErrorKind::invalid_input,
            "dual node must lie strictly inside its primal cell");
  }
}

// Reference (xi, eta) components of the dual 1-form basis function attached
// to local primal edge `edge`, evaluated from pre-tabulated 1D values.
struct DualTables {
  Eigen::VectorXd h_xi, h_eta;    // interior dual Lagrange, size N
  Eigen::VectorXd e_xi, e_eta;    // extended dual edge polynomials, size N+1
};

Eigen::Vector2d dual_basis(const DualTables& t, int order, int edge) {
  const int n = order;
  const int n_xi_edges = n * (n + 1);
  if (edge < n_xi_edges) {
    // dual of xi-edge (segment i, node row j): along +eta between extended
    // eta nodes j and j+1, at dual xi node i
    const int i = edge % n;
    const int j = edge / n;
    return {0.0, t.h_xi[i] * t.e_eta[j]};
  }
  // dual of eta-edge (node column i, segment j): along -xi between extended
  // xi nodes i+1 and i, at dual eta node j
  const int k = edge - n_xi_edges;
  const int i = k % (n + 1);
  const int j = k / (n + 1);
  return {-t.e_xi[i] * t.h_eta[j], 0.0};
}

DualTables tabulate(const BasisFamily1D& interior, const BasisFamily1D& ext, double xi,
                    double eta) {
  return {interior.lagrange_all(xi), interior.lagrange_all(eta), ext.edge_all(xi),
          ext.edge_all(eta)};
}

}  // namespace

std::vector<double> default_dual_nodes(int order) { return gauss_legendre(order).nodes; }

MassMatrix mass_matrix(int degree, const BasisFamily1D& family, const CurvilinearMap& map,
                       int quad_points) {
  require(degree >= 0 && degree <= 2, ErrorKind::invalid_degree, "mass matrix degree out of range");
  const int n = family.order();
  const auto rule = gauss_legendre(quad_points);
  const int size = basis_size(degree, n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);

  for (int b = 0; b < rule.size(); ++b) {
    const double eta = rule.nodes[b];
    const auto hy = family.lagrange_all(eta);
    const auto ey = family.edge_all(eta);
    for (int a = 0; a < rule.size(); ++a) {
      const double xi = rule.nodes[a];
      const double w = rule.weights[a] * rule.weights[b];
      const auto hx = family.lagrange_all(xi);
      const auto ex = family.edge_all(xi);
      const auto g = metric_point(map, xi, eta);
      switch (degree) {
        case 0: {
          Eigen::VectorXd v(size);
          for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) v[j * (n + 1) + i] = hx[i] * hy[j];
          m.noalias() += (w * g.det) * v * v.transpose();
          break;
        }
        case 1: {
          Eigen::MatrixXd v = Eigen::MatrixXd::Zero(size, 2);
          for (int j = 0; j <= n; ++j)
            for (int i = 0; i < n; ++i) v(j * n + i, 0) = ex[i] * hy[j];
          const int off = n * (n + 1);
          for (int j = 0; j < n; ++j)
            for (int i = 0; i <= n; ++i) v(off + j * (n + 1) + i, 1) = hx[i] * ey[j];
          m.noalias() += v * ((w * g.det) * g.inverse_metric) * v.transpose();
          break;
        }
        default: {
          Eigen::VectorXd v(size);
          for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) v[j * n + i] = ex[i] * ey[j];
          m.noalias() += (w / g.det) * v * v.transpose();
          break;
        }
      }
    }
  }
  return {degree, m};
}

HodgeMatrix hodge_02(const BasisFamily1D& family, const std::vector<double>& dual_nodes,
                     const CurvilinearMap& map) {
  check_dual_nodes(family, dual_nodes);
  const int n = family.order();
  Eigen::MatrixXd h(n * n, n * n);
  std::vector<Eigen::VectorXd> e(n);
  for (int k = 0; k < n; ++k) e[k] = family.edge_all(dual_nodes[k]);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      const double det = metric_point(map, dual_nodes[k], dual_nodes[l]).det;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) h(l * n + k, j * n + i) = e[k][i] * e[l][j] / det;
    }
  }
  return {2, GridKind::primal, 0, GridKind::dual, h};
}

HodgeMatrix hodge_20(const BasisFamily1D& family, const std::vector<double>& dual_nodes,
                     const CurvilinearMap& map, int quad_points) {
  check_dual_nodes(family, dual_nodes);
  const int n = family.order();
  const BasisFamily1D interior(dual_nodes);
  const auto ref = gauss_legendre(quad_points);
  const auto& x = family.nodes();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int j = 0; j < n; ++j) {
    const auto qy = map_rule(ref, x[j], x[j + 1]);
    for (int i = 0; i < n; ++i) {
      const auto qx = map_rule(ref, x[i], x[i + 1]);
      for (int b = 0; b < qy.size(); ++b) {
        const auto hy = interior.lagrange_all(qy.nodes[b]);
        for (int a = 0; a < qx.size(); ++a) {
          const auto hx = interior.lagrange_all(qx.nodes[a]);
          const double w = qx.weights[a] * qy.weights[b] * map.det_jacobian(qx.nodes[a], qy.nodes[b]);
          for (int l = 0; l < n; ++l)
            for (int k = 0; k < n; ++k) h(j * n + i, l * n + k) += w * hx[k] * hy[l];
        }
      }
    }
  }
  return {0, GridKind::dual, 2, GridKind::primal, h};
}

HodgeMatrix hodge_11_dual_to_primal(const BasisFamily1D& family,
                                    const std::vector<double>& dual_nodes,
                                    const CurvilinearMap& map, int quad_points) {
  check_dual_nodes(family, dual_nodes);
  const int n = family.order();
  const int size = 2 * n * (n + 1);
  const BasisFamily1D interior(dual_nodes);
  const BasisFamily1D ext(extended(dual_nodes));
  const auto ref = gauss_legendre(quad_points);
  const auto& x = family.nodes();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);

  // Hodge dual of a 1-form in reference components:
  //   (*u)_xi = -det J (g^21 u_xi + g^22 u_eta),  (*u)_eta = det J (g^11 u_xi + g^12 u_eta)
  auto accumulate = [&](int row, double xi, double eta, double weight, int component) {
    const auto g = metric_point(map, xi, eta);
    const auto t = tabulate(interior, ext, xi, eta);
    for (int col = 0; col < size; ++col) {
      const Eigen::Vector2d u = dual_basis(t, n, col);
      const double star = component == 0
                              ? -g.det * (g.inverse_metric(1, 0) * u[0] + g.inverse_metric(1, 1) * u[1])
                              : g.det * (g.inverse_metric(0, 0) * u[0] + g.inverse_metric(0, 1) * u[1]);
      h(row, col) += weight * star;
    }
  };

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto q = map_rule(ref, x[i], x[i + 1]);
      for (int p = 0; p < q.size(); ++p) accumulate(j * n + i, q.nodes[p], x[j], q.weights[p], 0);
    }
  }
  const int off = n * (n + 1);
  for (int j = 0; j < n; ++j) {
    const auto q = map_rule(ref, x[j], x[j + 1]);
    for (int i = 0; i <= n; ++i) {
      for (int p = 0; p < q.size(); ++p)
        accumulate(off + j * (n + 1) + i, x[i], q.nodes[p], q.weights[p], 1);
    }
  }
  return {1, GridKind::dual, 1, GridKind::primal, h};
}

Eigen::Vector2d dual_one_form(const Eigen::VectorXd& dual_cochain, int order,
                              const std::vector<double>& dual_nodes, double xi, double eta) {
  require(static_cast<int>(dual_nodes.size()) == order, ErrorKind::invalid_input,
          "need exactly N dual nodes per direction");
  require(dual_cochain.size() == 2 * order * (order + 1), ErrorKind::invalid_input,
          "dual 1-cochain size mismatch");
  const BasisFamily1D interior(dual_nodes);
  const BasisFamily1D ext(extended(dual_nodes));
  const auto t = tabulate(interior, ext, xi, eta);
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  for (int e = 0; e < dual_cochain.size(); ++e) u += dual_cochain[e] * dual_basis(t, order, e);
  return u;
}

}  // namespace mimetic
