#include "mimetic/solvers.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/SparseLU>

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

std::vector<double> global_nodes(const std::vector<double>& local, int elements) {
  const int n = static_cast<int>(local.size()) - 1;
  std::vector<double> out;
  out.reserve(elements * n + 1);
  for (int e = 0; e < elements; ++e) {
    for (int i = (e == 0 ? 0 : 1); i <= n; ++i) {
      out.push_back(-1.0 + (2.0 * e + local[i] + 1.0) / elements);
    }
  }
  out.front() = -1.0;
  out.back() = 1.0;
  return out;
}

int quad_points_of(const ProblemSpec& spec) {
  return spec.quad_points > 0 ? spec.quad_points : default_quad_points(spec.order);
}

// Hager's 1-norm estimate of cond(A) from an existing factorization.
double condition_1norm(const Eigen::SparseMatrix<double>& a,
                       Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
  const int n = static_cast<int>(a.rows());
  double norm_a = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
    norm_a = std::max(norm_a, s);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double estimate = 0.0;
  int last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = lu.solve(x);
    estimate = y.lpNorm<1>();
    Eigen::VectorXd sign = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = lu.transpose().solve(sign);
    int j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x) || j == last) break;
    x.setZero();
    x[j] = 1.0;
    last = j;
  }
  return norm_a * estimate;
}

Eigen::VectorXd solve_sparse(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& rhs,
                             bool estimate_condition, SolverDiagnostics& diag) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::solver_failure, "sparse LU factorization failed: " + lu.lastErrorMessage());
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw Error(ErrorKind::solver_failure, "sparse LU solve failed");
  }
  diag.unknowns = static_cast<int>(a.rows());
  diag.nonzeros = a.nonZeros();
  diag.residual = (a * x - rhs).lpNorm<Eigen::Infinity>();
  diag.condition_estimate = estimate_condition ? condition_1norm(a, lu)
                                               : std::numeric_limits<double>::quiet_NaN();
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (diag.residual > 1e-6 * scale) {
    throw Error(ErrorKind::solver_failure,
                "linear system is singular or ill-conditioned (residual " +
                    std::to_string(diag.residual) + ")");
  }
  return x;
}

Eigen::SparseMatrix<double> from_triplets(int rows, int cols, const Triplets& t) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Neighbouring element across `side`, or -1 on the domain boundary.
int neighbour(const SpectralMesh& mesh, int e, Side side) {
  const auto [ex, ey] = mesh.element_position(e);
  switch (side) {
    case Side::bottom: return ey > 0 ? mesh.element(ex, ey - 1) : -1;
    case Side::top: return ey + 1 < mesh.elements_y() ? mesh.element(ex, ey + 1) : -1;
    case Side::left: return ex > 0 ? mesh.element(ex - 1, ey) : -1;
    case Side::right: return ex + 1 < mesh.elements_x() ? mesh.element(ex + 1, ey) : -1;
  }
  return -1;
}

// Local primal edge on `side` of an element, position k along that side.
int side_edge(const TensorCellComplex& c, Side side, int k) {
  const int n = c.cells_xi();
  switch (side) {
    case Side::bottom: return c.xi_edge(k, 0);
    case Side::top: return c.xi_edge(k, n);
    case Side::left: return c.eta_edge(0, k);
    case Side::right: return c.eta_edge(n, k);
  }
  return -1;
}

}  // namespace

std::string to_string(Method method) { return method == Method::dual ? "dual" : "single"; }

Method parse_method(const std::string& name) {
  if (name == "dual") return Method::dual;
  if (name == "single") return Method::single;
  throw Error(ErrorKind::invalid_input, "unknown method '" + name + "'");
}

void validate(const ProblemSpec& spec) {
  require(spec.order >= 1, ErrorKind::invalid_order, "order must be at least 1");
  require(spec.elements_x >= 1 && spec.elements_y >= 1, ErrorKind::invalid_input,
          "need at least one element per direction");
  require(std::abs(spec.deformation) < 1.0 / std::numbers::pi, ErrorKind::invalid_deformation,
          "deformation coefficient must satisfy |c| < 1/pi");
  require(spec.quad_points == 0 || spec.quad_points >= spec.order + 3, ErrorKind::invalid_input,
          "quadrature needs at least N + 3 points");
  require(static_cast<bool>(spec.source), ErrorKind::invalid_input, "missing source term");
  bool any_dirichlet = false;
  bool any_neumann = false;
  for (auto kind : spec.boundary) {
    any_dirichlet |= kind == BoundaryKind::dirichlet;
    any_neumann |= kind == BoundaryKind::neumann;
  }
  if (any_dirichlet) {
    require(static_cast<bool>(spec.dirichlet), ErrorKind::invalid_input, "missing Dirichlet data");
  }
  if (any_neumann) {
    require(spec.method == Method::single, ErrorKind::invalid_input,
            "Neumann data is only supported by the single-grid method");
    require(spec.flux.has_value() && (*spec.flux)[0] && (*spec.flux)[1], ErrorKind::invalid_input,
            "missing Neumann flux data");
  }
  require(any_dirichlet, ErrorKind::invalid_input,
          "at least one side needs Dirichlet data for a unique solution");
}

SpectralMesh::SpectralMesh(int order, int elements_x, int elements_y, double deformation,
                           Domain domain)
    : order_(order),
      mx_(elements_x),
      my_(elements_y),
      c_(deformation),
      domain_(domain),
      family_(std::make_shared<BasisFamily1D>(gll_rule(order))),
      local_(family_->nodes(), family_->nodes()),
      global_(global_nodes(family_->nodes(), elements_x), global_nodes(family_->nodes(), elements_y)) {
  require(elements_x >= 1 && elements_y >= 1, ErrorKind::invalid_input,
          "need at least one element per direction");
  const Rect dom = domain_rect(domain);
  maps_.reserve(num_elements());
  for (int e = 0; e < num_elements(); ++e) maps_.emplace_back(c_, dom, element_rect(e));
}

Rect SpectralMesh::element_rect(int e) const {
  const Rect dom = domain_rect(domain_);
  const auto [ex, ey] = element_position(e);
  const double w = dom.width() / mx_;
  const double h = dom.height() / my_;
  Rect r{dom.x0 + ex * w, dom.x0 + (ex + 1) * w, dom.y0 + ey * h, dom.y0 + (ey + 1) * h};
  if (ex + 1 == mx_) r.x1 = dom.x1;
  if (ey + 1 == my_) r.y1 = dom.y1;
  return r;
}

int SpectralMesh::global_point(int e, int local) const {
  const auto [ex, ey] = element_position(e);
  const int i = local % (order_ + 1);
  const int j = local / (order_ + 1);
  return global_.point(ex * order_ + i, ey * order_ + j);
}

int SpectralMesh::global_edge(int e, int local) const {
  const auto [ex, ey] = element_position(e);
  const int n = order_;
  if (local < local_.num_xi_edges()) {
    return global_.xi_edge(ex * n + local % n, ey * n + local / n);
  }
  const int k = local - local_.num_xi_edges();
  return global_.eta_edge(ex * n + k % (n + 1), ey * n + k / (n + 1));
}

int SpectralMesh::global_surface(int e, int local) const {
  const auto [ex, ey] = element_position(e);
  return global_.surface(ex * order_ + local % order_, ey * order_ + local / order_);
}

Solution::Solution(Method method, std::shared_ptr<const SpectralMesh> mesh, Cochain omega,
                   Cochain q, Cochain source, SolverDiagnostics diagnostics)
    : method_(method),
      mesh_(std::move(mesh)),
      omega_(std::move(omega)),
      q_(std::move(q)),
      source_(std::move(source)),
      diagnostics_(diagnostics) {}

DiscreteForm Solution::element_omega(int e) const {
  const int n = mesh_->order();
  Eigen::VectorXd c(n * n);
  for (int s = 0; s < n * n; ++s) c[s] = omega_.coefficients[mesh_->global_surface(e, s)];
  return DiscreteForm(2, mesh_->family(), c);
}

DiscreteForm Solution::element_q(int e) const {
  const int edges = mesh_->local_complex().num_edges();
  Eigen::VectorXd c(edges);
  for (int l = 0; l < edges; ++l) c[l] = q_.coefficients[mesh_->global_edge(e, l)];
  return DiscreteForm(1, mesh_->family(), c);
}

Cochain reduce_source(const SpectralMesh& mesh, const ScalarField& f, int quad_points) {
  Eigen::VectorXd out(mesh.global_complex().num_surfaces());
  const auto physical = FormField::two_form(f);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Cochain local = reduce(pullback(physical, mesh.map(e)), mesh.local_complex(), quad_points);
    for (int s = 0; s < local.coefficients.size(); ++s) {
      out[mesh.global_surface(e, s)] = local.coefficients[s];
    }
  }
  return {2, out};
}

SingleGridSystem assemble_single(const ProblemSpec& spec, const SpectralMesh& mesh) {
  validate(spec);
  const int qp = quad_points_of(spec);
  const auto& family = *mesh.family();
  const auto& local = mesh.local_complex();
  const auto& global = mesh.global_complex();
  const int n = mesh.order();
  const int n_edges = global.num_edges();
  const int n_surf = global.num_surfaces();

  SingleGridSystem sys;
  sys.source = reduce_source(mesh, spec.source, qp).coefficients;
  sys.boundary = Eigen::VectorXd::Zero(n_edges);

  Triplets m1, m2;
  const auto fine = gauss_legendre(qp);
  const auto& x = family.nodes();
  std::map<int, double> fixed;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& map = mesh.map(e);
    const auto mass1 = mass_matrix(1, family, map, qp).matrix;
    const auto mass2 = mass_matrix(2, family, map, qp).matrix;
    for (int a = 0; a < mass1.rows(); ++a)
      for (int b = 0; b < mass1.cols(); ++b)
        m1.emplace_back(mesh.global_edge(e, a), mesh.global_edge(e, b), mass1(a, b));
    for (int a = 0; a < mass2.rows(); ++a)
      for (int b = 0; b < mass2.cols(); ++b)
        m2.emplace_back(mesh.global_surface(e, a), mesh.global_surface(e, b), mass2(a, b));

    for (int s = 0; s < 4; ++s) {
      const Side side = static_cast<Side>(s);
      if (neighbour(mesh, e, side) >= 0) continue;
      const bool along_xi = side == Side::bottom || side == Side::top;
      const double fixed_coord = (side == Side::bottom || side == Side::left) ? -1.0 : 1.0;
      auto point = [&](double t) {
        return along_xi ? std::array<double, 2>{t, fixed_coord} : std::array<double, 2>{fixed_coord, t};
      };

      if (spec.boundary[s] == BoundaryKind::dirichlet) {
        // integral of phi * trace(basis) along the counter-clockwise boundary
        const double sign = (side == Side::bottom || side == Side::right) ? 1.0 : -1.0;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        for (int seg = 0; seg < n; ++seg) {
          const auto q = map_rule(fine, x[seg], x[seg + 1]);
          for (int p = 0; p < q.size(); ++p) {
            const auto pt = point(q.nodes[p]);
            const auto phys = map(pt[0], pt[1]);
            acc += (q.weights[p] * spec.dirichlet(phys[0], phys[1])) * family.edge_all(q.nodes[p]);
          }
        }
        for (int k = 0; k < n; ++k) {
          sys.boundary[mesh.global_edge(e, side_edge(local, side, k))] += sign * acc[k];
        }
      } else {
        const auto pulled = pullback(FormField::one_form((*spec.flux)[0], (*spec.flux)[1]), map);
        const auto& comp = pulled.components[along_xi ? 0 : 1];
        for (int k = 0; k < n; ++k) {
          const auto q = map_rule(fine, x[k], x[k + 1]);
          double v = 0.0;
          for (int p = 0; p < q.size(); ++p) {
            const auto pt = point(q.nodes[p]);
            v += q.weights[p] * comp(pt[0], pt[1]);
          }
          fixed[mesh.global_edge(e, side_edge(local, side, k))] = v;
        }
      }
    }
  }
  sys.m1 = from_triplets(n_edges, n_edges, m1);
  sys.m2 = from_triplets(n_surf, n_surf, m2);
  sys.b = (sys.m2 * global.incidence(2).to_sparse()).pruned();
  sys.fixed_edges.reserve(fixed.size());
  sys.fixed_values.resize(static_cast<int>(fixed.size()));
  for (const auto& [edge, value] : fixed) {
    sys.fixed_values[static_cast<int>(sys.fixed_edges.size())] = value;
    sys.fixed_edges.push_back(edge);
  }
  return sys;
}

Solution solve_single(const ProblemSpec& spec) {
  require(spec.method == Method::single, ErrorKind::invalid_input, "spec is not a single-grid problem");
  validate(spec);
  auto mesh = std::make_shared<const SpectralMesh>(spec.order, spec.elements_x, spec.elements_y,
                                                   spec.deformation, spec.domain);
  const auto sys = assemble_single(spec, *mesh);
  const int ne = static_cast<int>(sys.m1.rows());
  const int ns = static_cast<int>(sys.m2.rows());

  std::vector<char> is_fixed(ne, 0);
  for (int edge : sys.fixed_edges) is_fixed[edge] = 1;

  Triplets t;
  t.reserve(sys.m1.nonZeros() + 2 * sys.b.nonZeros() + sys.fixed_edges.size());
  for (int k = 0; k < sys.m1.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.m1, k); it; ++it)
      if (!is_fixed[it.row()]) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < sys.b.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.b, k); it; ++it) {
      t.emplace_back(ne + it.row(), it.col(), it.value());
      if (!is_fixed[it.col()]) t.emplace_back(it.col(), ne + it.row(), it.value());
    }
  }
  Eigen::VectorXd rhs(ne + ns);
  rhs.head(ne) = sys.boundary;
  rhs.tail(ns) = sys.m2 * sys.source;
  for (std::size_t k = 0; k < sys.fixed_edges.size(); ++k) {
    t.emplace_back(sys.fixed_edges[k], sys.fixed_edges[k], 1.0);
    rhs[sys.fixed_edges[k]] = sys.fixed_values[static_cast<int>(k)];
  }
  const auto a = from_triplets(ne + ns, ne + ns, t);

  SolverDiagnostics diag;
  const Eigen::VectorXd x = solve_sparse(a, rhs, spec.estimate_condition, diag);
  return Solution(Method::single, mesh, {2, x.tail(ns)}, {1, x.head(ne)}, {2, sys.source}, diag);
}

DualGridSystem assemble_dual(const ProblemSpec& spec, const SpectralMesh& mesh) {
  validate(spec);
  require(spec.method == Method::dual, ErrorKind::invalid_input, "spec is not a dual-grid problem");
  const int qp = quad_points_of(spec);
  const auto& family = *mesh.family();
  const auto& local = mesh.local_complex();
  const int n = mesh.order();
  const int nn = n * n;
  const int n_local_edges = local.num_edges();
  const int n_el = mesh.num_elements();

  const auto dual_nodes = default_dual_nodes(n);
  const DualGrid dual(local, dual_nodes, dual_nodes);
  const Eigen::MatrixXd e_int = dual.interior_coboundary().to_dense().cast<double>();
  const Eigen::MatrixXd e_ghost = dual.ghost_coboundary().to_dense().cast<double>();
  const Eigen::MatrixXd e21 = local.incidence(2).to_dense().cast<double>();
  const int n_ghost = dual.num_ghost_points();

  DualGridSystem sys;
  sys.omega_unknowns = n_el * nn;
  sys.source = reduce_source(mesh, spec.source, qp).coefficients;
  sys.flux_omega.resize(n_el);
  sys.flux_ghost.resize(n_el);
  sys.ghost_map.assign(n_el, std::vector<int>(n_ghost, 0));

  // Shared interface unknowns: one block of N per interface, keyed by the
  // element on its left/bottom.
  std::map<std::pair<int, int>, int> interface_base;
  int next = sys.omega_unknowns;
  std::vector<double> boundary_values;
  for (int e = 0; e < n_el; ++e) {
    for (int s = 0; s < 4; ++s) {
      const Side side = static_cast<Side>(s);
      const int nb = neighbour(mesh, e, side);
      for (int k = 0; k < n; ++k) {
        const int g = dual.ghost_point(side, k) - dual.num_interior_points();
        if (nb < 0) {
          const auto ref = dual.point_coordinates(dual.ghost_point(side, k));
          const auto phys = mesh.map(e)(ref[0], ref[1]);
          sys.ghost_map[e][g] = -1 - static_cast<int>(boundary_values.size());
          boundary_values.push_back(spec.dirichlet(phys[0], phys[1]));
          continue;
        }
        const bool owner = side == Side::right || side == Side::top;
        const auto key = owner ? std::make_pair(e, s) : std::make_pair(nb, s == 0 ? 1 : 3);
        auto it = interface_base.find(key);
        if (it == interface_base.end()) {
          it = interface_base.emplace(key, next).first;
          next += n;
        }
        sys.ghost_map[e][g] = it->second + k;
      }
    }
  }
  sys.boundary_values = Eigen::Map<Eigen::VectorXd>(boundary_values.data(),
                                                     static_cast<int>(boundary_values.size()));
  const int unknowns = next;

  for (int e = 0; e < n_el; ++e) {
    const auto& map = mesh.map(e);
    const auto h02 = hodge_02(family, dual_nodes, map).matrix;
    const auto h11 = hodge_11_dual_to_primal(family, dual_nodes, map, qp).matrix;
    sys.flux_omega[e] = h11 * e_int * h02;
    sys.flux_ghost[e] = h11 * e_ghost;
  }

  Triplets t;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  // Adds coeff * (row of q_e at local edge) to equation `row`.
  auto add_flux = [&](int row, int e, const Eigen::RowVectorXd& w_omega,
                      const Eigen::RowVectorXd& w_ghost) {
    for (int c = 0; c < nn; ++c)
      if (w_omega[c] != 0.0) t.emplace_back(row, e * nn + c, w_omega[c]);
    for (int g = 0; g < n_ghost; ++g) {
      if (w_ghost[g] == 0.0) continue;
      const int m = sys.ghost_map[e][g];
      if (m >= 0) t.emplace_back(row, m, w_ghost[g]);
      else rhs[row] -= w_ghost[g] * sys.boundary_values[-1 - m];
    }
  };

  for (int e = 0; e < n_el; ++e) {
    const Eigen::MatrixXd a = e21 * sys.flux_omega[e];
    const Eigen::MatrixXd b = e21 * sys.flux_ghost[e];
    for (int s = 0; s < nn; ++s) {
      const int row = e * nn + s;
      rhs[row] += sys.source[mesh.global_surface(e, s)];
      add_flux(row, e, a.row(s), b.row(s));
    }
  }

  int row = sys.omega_unknowns;
  for (const auto& [key, base] : interface_base) {
    const auto [e, s] = key;
    const Side side = static_cast<Side>(s);
    const int nb = neighbour(mesh, e, side);
    const Side opposite = side == Side::right ? Side::left : Side::bottom;
    for (int k = 0; k < n; ++k, ++row) {
      const int le = side_edge(local, side, k);
      const int re = side_edge(local, opposite, k);
      add_flux(row, e, sys.flux_omega[e].row(le), sys.flux_ghost[e].row(le));
      add_flux(row, nb, -sys.flux_omega[nb].row(re), -sys.flux_ghost[nb].row(re));
    }
  }
  require(row == unknowns, ErrorKind::numerical_failure, "dual system is not square");
  sys.matrix = from_triplets(unknowns, unknowns, t);
  sys.rhs = rhs;
  (void)n_local_edges;
  return sys;
}

Solution solve_dual(const ProblemSpec& spec) {
  require(spec.method == Method::dual, ErrorKind::invalid_input, "spec is not a dual-grid problem");
  validate(spec);
  auto mesh = std::make_shared<const SpectralMesh>(spec.order, spec.elements_x, spec.elements_y,
                                                   spec.deformation, spec.domain);
  const auto sys = assemble_dual(spec, *mesh);
  SolverDiagnostics diag;
  const Eigen::VectorXd x = solve_sparse(sys.matrix, sys.rhs, spec.estimate_condition, diag);

  const int n = mesh->order();
  const int nn = n * n;
  const auto& global = mesh->global_complex();
  Eigen::VectorXd omega(global.num_surfaces());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(global.num_edges());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(global.num_edges());
  for (int e = 0; e < mesh->num_elements(); ++e) {
    const Eigen::VectorXd w = x.segment(e * nn, nn);
    Eigen::VectorXd ghost(sys.flux_ghost[e].cols());
    for (int g = 0; g < ghost.size(); ++g) {
      const int m = sys.ghost_map[e][g];
      ghost[g] = m >= 0 ? x[m] : sys.boundary_values[-1 - m];
    }
    const Eigen::VectorXd qe = sys.flux_omega[e] * w + sys.flux_ghost[e] * ghost;
    for (int s = 0; s < nn; ++s) omega[mesh->global_surface(e, s)] = w[s];
    for (int l = 0; l < qe.size(); ++l) {
      q[mesh->global_edge(e, l)] += qe[l];
      count[mesh->global_edge(e, l)] += 1.0;
    }
  }
  q = q.cwiseQuotient(count);
  return Solution(Method::dual, mesh, {2, omega}, {1, q}, {2, sys.source}, diag);
}

Solution solve(const ProblemSpec& spec) {
  return spec.method == Method::dual ? solve_dual(spec) : solve_single(spec);
}

double conservation_residual(const Cochain& q, const Cochain& f_h, const TensorCellComplex& complex) {
  require(q.degree == 1 && f_h.degree == 2, ErrorKind::invalid_input,
          "conservation residual needs a 1-cochain and a 2-cochain");
  require(q.coefficients.size() == complex.num_edges() &&
              f_h.coefficients.size() == complex.num_surfaces(),
          ErrorKind::invalid_input, "cochain sizes do not match the complex");
  const Eigen::VectorXd dq = complex.incidence(2).apply(q.coefficients);
  if (dq.size() == 0) return 0.0;
  return (dq - f_h.coefficients).lpNorm<Eigen::Infinity>();
}

double conservation_residual(const Solution& sol, const Cochain& f_h) {
  return conservation_residual(sol.q(), f_h, sol.mesh().global_complex());
}

}  // namespace mimetic
