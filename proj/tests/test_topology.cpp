#include <doctest.h>

#include <random>

#include "mimetic/basis.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/topology.hpp"

using namespace mimetic;

namespace {

std::vector<double> uniform_nodes(int n) {
  std::vector<double> x(n + 1);
  for (int i = 0; i <= n; ++i) x[i] = -1.0 + 2.0 * i / n;
  x.back() = 1.0;
  return x;
}

std::vector<double> midpoints(const std::vector<double>& x) {
  std::vector<double> m;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) m.push_back(0.5 * (x[i] + x[i + 1]));
  return m;
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

TEST_CASE("single cell counts and incidence matrices") {
  const auto c = build_primal_complex({-1, 1}, {-1, 1});
  CHECK(c.num_points() == 4);
  CHECK(c.num_edges() == 4);
  CHECK(c.num_surfaces() == 1);

  Eigen::MatrixXi e10(4, 4);
  e10 << -1, 1, 0, 0,  //
      0, 0, -1, 1,     //
      -1, 0, 1, 0,     //
      0, -1, 0, 1;
  CHECK(c.incidence(1).to_dense() == e10);

  Eigen::MatrixXi e21(1, 4);
  e21 << 1, -1, -1, 1;
  CHECK(incidence_matrix(c, 2).to_dense() == e21);
}

TEST_CASE("3x3 complex counts and edge rows") {
  const auto c = build_primal_complex(uniform_nodes(3), uniform_nodes(3));
  CHECK(c.num_points() == 16);
  CHECK(c.num_edges() == 24);
  CHECK(c.num_surfaces() == 9);
  CHECK(c.euler_characteristic() == 1);

  const Eigen::MatrixXi e10 = c.incidence(1).to_dense();
  for (int r = 0; r < e10.rows(); ++r) {
    CHECK((e10.row(r).array() == 1).count() == 1);
    CHECK((e10.row(r).array() == -1).count() == 1);
  }
}

TEST_CASE("boundary of boundary vanishes and entries are signs") {
  for (int nx = 1; nx <= 5; ++nx) {
    for (int ny = 1; ny <= 5; ++ny) {
      const auto c = build_primal_complex(gll_rule(nx).nodes, uniform_nodes(ny));
      CHECK(c.euler_characteristic() == 1);
      CHECK((c.incidence(2).multiply(c.incidence(1)).array() == 0).all());
      for (int k = 1; k <= 2; ++k)
        for (const auto& e : c.incidence(k).entries()) CHECK((e.value == 1 || e.value == -1));
    }
  }
}

TEST_CASE("closure: every face of a cell is a cell") {
  const auto c = build_primal_complex(uniform_nodes(4), uniform_nodes(2));
  for (int k = 1; k <= 2; ++k) {
    const auto& e = c.incidence(k);
    for (const auto& entry : e.entries()) {
      CHECK(entry.col >= 0);
      CHECK(entry.col < c.num_cells(k - 1));
    }
    // every k-cell has 2 (edges) or 4 (surfaces) faces
    const Eigen::MatrixXi d = e.to_dense();
    for (int r = 0; r < d.rows(); ++r) CHECK(d.row(r).cwiseAbs().sum() == 2 * k);
  }
}

TEST_CASE("coboundary on a single cell") {
  const auto c = build_primal_complex({-1, 1}, {-1, 1});
  Cochain a{0, Eigen::Vector4d(1.0, 2.0, 5.0, 11.0)};
  const auto d = coboundary(a, c);
  CHECK(d.degree == 1);
  CHECK(d.coefficients == Eigen::Vector4d(2 - 1, 11 - 5, 5 - 1, 11 - 2));

  Cochain constant{0, Eigen::Vector4d::Constant(3.0)};
  CHECK(coboundary(constant, c).coefficients.isZero(0.0));
}

TEST_CASE("coboundary is nilpotent and dual to the boundary") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coeff(-9, 9);
  const auto c = build_primal_complex(gll_rule(4).nodes, gll_rule(3).nodes);
  for (int trial = 0; trial < 20; ++trial) {
    Cochain p{0, Eigen::VectorXd(c.num_points())};
    for (int k = 0; k < p.coefficients.size(); ++k) p.coefficients[k] = coeff(rng);
    CHECK(coboundary(coboundary(p, c), c).coefficients.isZero(0.0));

    for (int k = 0; k < 2; ++k) {
      Cochain x{k, Eigen::VectorXd(c.num_cells(k))};
      Chain a{k + 1, Eigen::VectorXd(c.num_cells(k + 1))};
      for (int i = 0; i < x.coefficients.size(); ++i) x.coefficients[i] = coeff(rng);
      for (int i = 0; i < a.coefficients.size(); ++i) a.coefficients[i] = coeff(rng);
      CHECK(pairing(coboundary(x, c), a) == pairing(x, boundary(a, c)));
    }
  }
}

TEST_CASE("degree errors") {
  const auto c = build_primal_complex({-1, 1}, {-1, 1});
  CHECK(kind_of([&] { incidence_matrix(c, 0); }) == ErrorKind::invalid_degree);
  CHECK(kind_of([&] { incidence_matrix(c, 3); }) == ErrorKind::invalid_degree);
  CHECK(kind_of([&] { coboundary(Cochain{2, Eigen::VectorXd::Zero(1)}, c); }) ==
        ErrorKind::cannot_raise_degree);
}

TEST_CASE("invalid node vectors") {
  CHECK(kind_of([] { build_primal_complex({-1}, {-1, 1}); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { build_primal_complex({-1, 0.5, 0.2, 1}, {-1, 1}); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { build_primal_complex({-1, 0.9}, {-1, 1}); }) == ErrorKind::invalid_input);
  CHECK(kind_of([] { build_primal_complex({-1, 1}, {-2, 1}); }) == ErrorKind::invalid_input);
}

TEST_CASE("incidence matrices do not depend on node coordinates") {
  const auto a = build_primal_complex(uniform_nodes(5), uniform_nodes(3));
  const auto b = build_primal_complex(gll_rule(5).nodes, {-1.0, -0.9, 0.7, 1.0});
  CHECK(a.incidence(1) == b.incidence(1));
  CHECK(a.incidence(2) == b.incidence(2));
}

TEST_CASE("dual grid counts and ghost points") {
  const auto primal = build_primal_complex(gll_rule(3).nodes, gll_rule(3).nodes);
  const auto gauss = gauss_legendre(3).nodes;
  const auto dual = build_dual_grid(primal, gauss, gauss);
  CHECK(dual.extended_xi().size() == 5);
  CHECK(dual.extended_eta().size() == 5);
  CHECK(dual.num_interior_points() == primal.num_surfaces());
  CHECK(dual.num_interior_edges() == primal.num_edges());
  CHECK(dual.num_faces() == primal.num_points());
  CHECK(dual.num_ghost_points() == 12);
  CHECK(dual.num_points() - dual.num_edges() + dual.num_faces() == 1);

  const auto p = dual.point_coordinates(dual.ghost_point(Side::right, 1));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == gauss[1]);
  const auto b = dual.point_coordinates(dual.ghost_point(Side::bottom, 2));
  CHECK(b[0] == gauss[2]);
  CHECK(b[1] == -1.0);

  const auto one = build_dual_grid(build_primal_complex({-1, 1}, {-1, 1}), {0.0}, {0.0});
  CHECK(one.num_interior_points() == 1);
}

TEST_CASE("dual incidence is the transposed primal incidence on interior cells") {
  for (int n = 1; n <= 4; ++n) {
    const auto primal = build_primal_complex(uniform_nodes(n), uniform_nodes(n + 1));
    const auto dual = build_dual_grid(primal, midpoints(uniform_nodes(n)), midpoints(uniform_nodes(n + 1)));
    const Eigen::MatrixXi e21t = primal.incidence(2).to_dense().transpose();
    CHECK(dual.interior_coboundary().to_dense() == e21t);

    const Eigen::MatrixXi d21 = dual.incidence(2).to_dense();
    const Eigen::MatrixXi e10t = primal.incidence(1).to_dense().transpose();
    CHECK(d21.leftCols(dual.num_interior_edges()) == e10t);

    // completed dual is a complex
    CHECK((dual.incidence(2).multiply(dual.incidence(1)).array() == 0).all());
    for (const auto& e : dual.incidence(1).entries()) CHECK((e.value == 1 || e.value == -1));
  }
}

TEST_CASE("every ghost point is attached to exactly one interior dual edge") {
  const auto primal = build_primal_complex(uniform_nodes(3), uniform_nodes(2));
  const auto dual = build_dual_grid(primal, midpoints(uniform_nodes(3)), midpoints(uniform_nodes(2)));
  const Eigen::MatrixXi g = dual.ghost_coboundary().to_dense();
  CHECK(g.rows() == primal.num_edges());
  CHECK(g.cols() == dual.num_ghost_points());
  for (int col = 0; col < g.cols(); ++col) CHECK(g.col(col).cwiseAbs().sum() == 1);
}

TEST_CASE("dual grid rejects bad dual nodes") {
  const auto primal = build_primal_complex(uniform_nodes(2), uniform_nodes(2));
  CHECK(kind_of([&] { build_dual_grid(primal, {0.0}, {-0.5, 0.5}); }) == ErrorKind::invalid_input);
  CHECK(kind_of([&] { build_dual_grid(primal, {-0.5, 0.0}, {-0.5, 0.5}); }) ==
        ErrorKind::invalid_input);
}
