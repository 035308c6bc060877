#include <doctest.h>

#include <cmath>

#include "mimetic/errors.hpp"
#include "mimetic/harness.hpp"
#include "mimetic/solvers.hpp"

using namespace mimetic;
using doctest::Approx;

namespace {

ProblemSpec zero_problem(Method method, int n, int m, double c) {
  ProblemSpec s;
  s.method = method;
  s.order = n;
  s.elements_x = s.elements_y = m;
  s.deformation = c;
  s.source = [](double, double) { return 0.0; };
  s.dirichlet = [](double, double) { return 0.0; };
  return s;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::invalid_input;
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("dual") == Method::dual);
  CHECK(parse_method("single") == Method::single);
  CHECK(to_string(Method::dual) == "dual");
  CHECK(kind_of([] { parse_method("triple"); }) == ErrorKind::invalid_input);
}

TEST_CASE("zero data gives the zero solution") {
  for (auto method : {Method::dual, Method::single})
    for (double c : {0.0, 0.2}) {
      const auto sol = solve(zero_problem(method, 3, 2, c));
      CHECK(sol.omega().coefficients.lpNorm<Eigen::Infinity>() < 1e-13);
      CHECK(sol.q().coefficients.lpNorm<Eigen::Infinity>() < 1e-13);
    }
}

TEST_CASE("dual method by hand: one element of order 1") {
  // phi = (x^2 + y^2)/2 + 1 on [-1,1]^2 so f = 2. The single dual node sits at
  // the centre and the four ghosts at the edge midpoints, where phi = 3/2.
  // The balance row reads -4 omega = 4 f - 4 sum(g), so omega = sum(g) - f = 4
  // and the dual value omega/4 equals phi(0,0) = 1.
  ProblemSpec s;
  s.method = Method::dual;
  s.order = 1;
  s.domain = Domain::biunit;
  s.source = [](double, double) { return 2.0; };
  s.dirichlet = [](double x, double y) { return 0.5 * (x * x + y * y) + 1.0; };
  const SpectralMesh mesh(1, 1, 1, 0.0, Domain::biunit);
  const auto sys = assemble_dual(s, mesh);
  REQUIRE(sys.matrix.rows() == 1);
  CHECK(sys.matrix.coeff(0, 0) == Approx(-4.0).epsilon(1e-13));
  CHECK(sys.rhs[0] == Approx(4.0 * 2.0 - 4.0 * 6.0).epsilon(1e-13));
  const auto sol = solve(s);
  CHECK(sol.omega().coefficients[0] == Approx(4.0).epsilon(1e-13));
}

TEST_CASE("discrete conservation holds to round-off") {
  for (auto method : {Method::dual, Method::single})
    for (int n : {1, 3})
      for (double c : {0.0, 0.2}) {
        const auto spec = manufactured_problem(method, n, 3, 2, c);
        const auto sol = solve(spec);
        CHECK(conservation_residual(sol, sol.source()) < 1e-11);
      }
}

TEST_CASE("single-grid flux satisfies the eliminated first block row") {
  const auto spec = manufactured_problem(Method::single, 3, 2, 2, 0.15);
  const SpectralMesh mesh(3, 2, 2, 0.15, Domain::unit);
  const auto sys = assemble_single(spec, mesh);
  const auto sol = solve(spec);

  const Eigen::MatrixXd m1 = Eigen::MatrixXd(sys.m1);
  CHECK((m1 - m1.transpose()).norm() < 1e-12 * m1.norm());
  Eigen::LLT<Eigen::MatrixXd> llt(m1);
  REQUIRE(llt.info() == Eigen::Success);

  const Eigen::VectorXd q = llt.solve(sys.boundary - sys.b.transpose() * sol.omega().coefficients);
  CHECK((q - sol.q().coefficients).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(conservation_residual(Cochain{1, q}, sol.source(), mesh.global_complex()) < 1e-9);
}

TEST_CASE("mirror symmetry of the manufactured problem on straight meshes") {
  // phi is odd under x -> 1 - x and symmetric under x <-> y
  for (auto method : {Method::dual, Method::single}) {
    const auto sol = solve(manufactured_problem(method, 3, 2, 2, 0.0));
    const auto& g = sol.mesh().global_complex();
    const int nx = g.cells_xi(), ny = g.cells_eta();
    const auto& w = sol.omega().coefficients;
    const double scale = w.lpNorm<Eigen::Infinity>();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        CHECK(std::abs(w[g.surface(i, j)] + w[g.surface(nx - 1 - i, j)]) < 1e-12 * scale);
        CHECK(std::abs(w[g.surface(i, j)] - w[g.surface(j, i)]) < 1e-12 * scale);
      }
  }
}

TEST_CASE("flux boundary condition on part of the boundary") {
  auto spec = manufactured_problem(Method::single, 4, 3, 3, 0.1);
  const double dirichlet_error = run_case(spec).l2_omega;
  spec.boundary[static_cast<int>(Side::left)] = BoundaryKind::neumann;
  spec.boundary[static_cast<int>(Side::top)] = BoundaryKind::neumann;
  const auto r = run_case(spec);
  CHECK(r.l2_omega < 5.0 * dirichlet_error);
  CHECK(r.linf_conservation < 1e-11);

  auto dual = manufactured_problem(Method::dual, 2, 2, 2, 0.0);
  dual.boundary[0] = BoundaryKind::neumann;
  CHECK(kind_of([&] { solve(dual); }) == ErrorKind::invalid_input);

  auto all = manufactured_problem(Method::single, 2, 2, 2, 0.0);
  all.boundary.fill(BoundaryKind::neumann);
  CHECK(kind_of([&] { solve(all); }) == ErrorKind::invalid_input);
}

TEST_CASE("invalid problem descriptions") {
  auto base = manufactured_problem(Method::single, 2, 2, 2, 0.0);
  auto bad = base;
  bad.order = 0;
  CHECK_THROWS_AS(solve(bad), Error);
  bad = base;
  bad.elements_x = 0;
  CHECK(kind_of([&] { solve(bad); }) == ErrorKind::invalid_input);
  bad = base;
  bad.deformation = 0.5;
  CHECK(kind_of([&] { solve(bad); }) == ErrorKind::invalid_deformation);
  bad = base;
  bad.source = nullptr;
  CHECK(kind_of([&] { solve(bad); }) == ErrorKind::invalid_input);
  bad = base;
  bad.quad_points = 2;
  CHECK(kind_of([&] { solve(bad); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { solve_dual(base); }) == ErrorKind::invalid_input);
}

TEST_CASE("condition estimate against the exact 1-norm condition number") {
  auto spec = manufactured_problem(Method::single, 2, 2, 2, 0.1);
  spec.estimate_condition = true;
  const auto sol = solve(spec);
  const SpectralMesh mesh(2, 2, 2, 0.1, Domain::unit);
  const auto sys = assemble_single(spec, mesh);
  const int ne = static_cast<int>(sys.m1.rows()), ns = static_cast<int>(sys.m2.rows());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ne + ns, ne + ns);
  a.topLeftCorner(ne, ne) = Eigen::MatrixXd(sys.m1);
  a.bottomLeftCorner(ns, ne) = Eigen::MatrixXd(sys.b);
  a.topRightCorner(ne, ns) = Eigen::MatrixXd(sys.b).transpose();
  const double exact = a.cwiseAbs().colwise().sum().maxCoeff() *
                       a.inverse().cwiseAbs().colwise().sum().maxCoeff();
  const double est = sol.diagnostics().condition_estimate;
  CHECK(est <= exact * (1 + 1e-8));
  CHECK(est >= exact / 10.0);
  CHECK(sol.dof() == ne + ns);

  spec.estimate_condition = false;
  CHECK(std::isnan(solve(spec).diagnostics().condition_estimate));
}

TEST_CASE("mesh numbering shares interface cells and ignores the deformation") {
  const SpectralMesh a(3, 2, 2, 0.0, Domain::unit);
  const SpectralMesh b(3, 2, 2, 0.2, Domain::unit);
  CHECK(a.global_complex().incidence(1) == b.global_complex().incidence(1));
  CHECK(a.global_complex().incidence(2) == b.global_complex().incidence(2));

  // right edge of element 0 is the left edge of element 1
  const auto& loc = a.local_complex();
  for (int j = 0; j < 3; ++j) {
    CHECK(a.global_edge(0, loc.eta_edge(3, j)) == a.global_edge(1, loc.eta_edge(0, j)));
    CHECK(a.global_point(0, loc.point(3, j)) == a.global_point(1, loc.point(0, j)));
  }
  for (int i = 0; i < 3; ++i)
    CHECK(a.global_edge(0, loc.xi_edge(i, 3)) == a.global_edge(a.element(0, 1), loc.xi_edge(i, 0)));
  CHECK(a.global_complex().num_surfaces() == 36);
  CHECK(a.element_position(3) == std::array<int, 2>{1, 1});
}

TEST_CASE("both methods agree on a resolved mesh") {
  const auto d = method_difference(2, 8, 8, 0.1);
  CHECK(d.linf < 0.05);
  CHECK(d.field.rows() == 101);
}

TEST_CASE("higher order beats lower order on the same number of cells") {
  for (auto method : {Method::dual, Method::single}) {
    const auto high = run_case(manufactured_problem(method, 6, 3, 3, 0.0));
    const auto low = run_case(manufactured_problem(method, 3, 6, 6, 0.0));
    CHECK(high.dof <= low.dof);
    CHECK(high.l2_omega < low.l2_omega);
    CHECK(high.linf_conservation < 1e-10);
  }
}
