#include <doctest.h>

#include <cmath>
#include <random>

#include "mimetic/basis.hpp"
#include "mimetic/errors.hpp"

using namespace mimetic;
using doctest::Approx;

namespace {

// FormField wrapper evaluating a DiscreteForm, so reduce() can act on it.
FormField as_field(const DiscreteForm& f) {
  auto comp = [f](int k) {
    return [f, k](double x, double y) { return f.evaluate(x, y)[k]; };
  };
  switch (f.degree()) {
    case 0: return FormField::zero_form(comp(0));
    case 1: return FormField::one_form(comp(0), comp(1));
    default: return FormField::two_form(comp(0));
  }
}

}  // namespace

TEST_CASE("GLL nodes and weights for small orders") {
  const auto r1 = gll_rule(1);
  CHECK(r1.nodes == std::vector<double>{-1.0, 1.0});
  CHECK(r1.weights[0] == Approx(1.0).epsilon(1e-15));
  CHECK(r1.weights[1] == Approx(1.0).epsilon(1e-15));

  const auto r2 = gll_rule(2);
  CHECK(r2.nodes[1] == 0.0);
  CHECK(r2.weights[0] == Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r2.weights[1] == Approx(4.0 / 3).epsilon(1e-15));

  const auto r3 = gll_rule(3);
  CHECK(r3.nodes[2] == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(r3.nodes[1] == -r3.nodes[2]);
  CHECK(r3.weights[0] == Approx(1.0 / 6).epsilon(1e-15));
  CHECK(r3.weights[1] == Approx(5.0 / 6).epsilon(1e-15));

  const auto r4 = gll_rule(4);
  CHECK(r4.nodes[3] == Approx(std::sqrt(3.0 / 7)).epsilon(1e-15));
  CHECK(r4.weights[2] == Approx(32.0 / 45).epsilon(1e-15));
  CHECK(r4.weights[1] == Approx(49.0 / 90).epsilon(1e-15));
  CHECK(r4.weights[0] == Approx(0.1).epsilon(1e-15));
}

TEST_CASE("GLL rule integrates polynomials of degree 2N-1 exactly") {
  for (int n = 1; n <= 16; ++n) {
    const auto r = gll_rule(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i <= n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials of degree 2n-1 exactly") {
  for (int n = 1; n <= 16; ++n) {
    const auto r = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("invalid orders") {
  CHECK_THROWS_AS(gll_rule(0), Error);
  CHECK_THROWS_AS(gll_rule(65), Error);
  try {
    gll_rule(0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_order);
  }
}

TEST_CASE("Lagrange polynomials: Kronecker property and partition of unity") {
  for (int n = 1; n <= 12; ++n) {
    const BasisFamily1D f(gll_rule(n));
    for (int p = 0; p <= n; ++p) {
      const auto h = f.lagrange_all(f.nodes()[p]);
      for (int i = 0; i <= n; ++i) CHECK(std::abs(h[i] - (i == p)) < 1e-13);
    }
    for (double x : {-0.93, -0.31, 0.0, 0.47, 0.99}) {
      CHECK(f.lagrange_all(x).sum() == Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(f.lagrange_derivative_all(x).sum()) < 1e-10);
    }
  }
}

TEST_CASE("Lagrange derivatives match finite differences") {
  const BasisFamily1D f(gll_rule(5));
  const double h = 1e-6;
  for (double x : {-1.0, -0.6, -0.2, 0.3, 0.77, 1.0}) {
    const auto d = f.lagrange_derivative_all(x);
    const double xl = std::max(-1.0, x - h), xr = std::min(1.0, x + h);
    const Eigen::VectorXd fd = (f.lagrange_all(xr) - f.lagrange_all(xl)) / (xr - xl);
    for (int i = 0; i <= 5; ++i) CHECK(d[i] == Approx(fd[i]).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("edge polynomials integrate to Kronecker deltas over the cells") {
  for (int n = 1; n <= 12; ++n) {
    const BasisFamily1D f(gll_rule(n));
    const auto g = gauss_legendre(n + 1);
    for (int p = 1; p <= n; ++p) {
      const auto q = map_rule(g, f.nodes()[p - 1], f.nodes()[p]);
      for (int i = 1; i <= n; ++i) {
        double s = 0.0;
        for (int k = 0; k < q.size(); ++k) s += q.weights[k] * f.edge(i, q.nodes[k]);
        CHECK(std::abs(s - (i == p)) < 1e-12);
      }
    }
  }
  // N = 1: the single edge function is the constant 1/2
  const BasisFamily1D one(gll_rule(1));
  CHECK(one.edge(1, 0.3) == Approx(0.5));
}

TEST_CASE("reduction of a reconstruction returns the cochain") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    auto family = std::make_shared<const BasisFamily1D>(gll_rule(n));
    const auto complex = complex_of(*family);
    for (int k = 0; k <= 2; ++k) {
      Cochain c{k, Eigen::VectorXd(complex.num_cells(k))};
      for (int i = 0; i < c.coefficients.size(); ++i) c.coefficients[i] = u(rng);
      const auto back = reduce(as_field(reconstruct(c, family)), complex, n + 2);
      CHECK((back.coefficients - c.coefficients).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("projection is idempotent and reproduces its own space") {
  auto family = std::make_shared<const BasisFamily1D>(gll_rule(4));
  // degree-4 polynomial 0-form and degree-3 2-form lie in the discrete spaces
  const auto p0 = FormField::zero_form([](double x, double y) { return x * x * x * y - 2 * y * y + x; });
  const auto p2 = FormField::two_form([](double x, double y) { return x * x * y * y * y - x + 0.5; });
  for (const auto& form : {p0, p2}) {
    const auto once = project(form, family, 8);
    const auto twice = project(as_field(once), family, 8);
    CHECK((once.coefficients() - twice.coefficients()).lpNorm<Eigen::Infinity>() < 1e-12);
    for (double x : {-0.8, 0.1, 0.6})
      for (double y : {-0.4, 0.35, 0.9})
        CHECK(once.evaluate(x, y)[0] == Approx(form.components[0](x, y)).epsilon(1e-12));
  }
}

TEST_CASE("reconstructed derivative commutes with the coboundary") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 1; n <= 5; ++n) {
    auto family = std::make_shared<const BasisFamily1D>(gll_rule(n));
    const auto complex = complex_of(*family);
    for (int k = 0; k <= 1; ++k) {
      Cochain c{k, Eigen::VectorXd(complex.num_cells(k))};
      for (int i = 0; i < c.coefficients.size(); ++i) c.coefficients[i] = u(rng);
      const auto f = reconstruct(c, family);
      const auto df = reconstruct(coboundary(c, complex), family);
      for (int s = 0; s < 5; ++s) {
        const double x = u(rng), y = u(rng);
        const auto a = f.derivative(x, y);
        const auto b = df.evaluate(x, y);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-11);
      }
    }
  }
}

TEST_CASE("derivative of a 2-form raises cannot_raise_degree") {
  auto family = std::make_shared<const BasisFamily1D>(gll_rule(2));
  const DiscreteForm w(2, family, Eigen::VectorXd::Ones(4));
  try {
    w.derivative(0.0, 0.0);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cannot_raise_degree);
  }
}

TEST_CASE("basis sizes and component shapes") {
  CHECK(basis_size(0, 3) == 16);
  CHECK(basis_size(1, 3) == 24);
  CHECK(basis_size(2, 3) == 9);
  auto family = std::make_shared<const BasisFamily1D>(gll_rule(3));
  const DiscreteForm q(1, family, Eigen::VectorXd::Zero(24));
  const auto shapes = q.component_shapes();
  REQUIRE(shapes.size() == 2);
  CHECK(shapes[0] == std::array<int, 2>{4, 3});
  CHECK(shapes[1] == std::array<int, 2>{3, 4});
  CHECK_THROWS_AS(DiscreteForm(1, family, Eigen::VectorXd::Zero(5)), Error);
}
