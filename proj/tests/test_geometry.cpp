#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mimetic/basis.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/geometry.hpp"

using namespace mimetic;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
const Rect biunit = domain_rect(Domain::biunit);
const Rect unit = domain_rect(Domain::unit);
}  // namespace

TEST_CASE("domain rectangles") {
  CHECK(unit == Rect{0, 1, 0, 1});
  CHECK(biunit == Rect{-1, 1, -1, 1});
}

TEST_CASE("deformation of the full biunit element") {
  const auto m = crazy_map(0.2, biunit);
  const auto p = m(0.5, 0.5);
  CHECK(p[0] == Approx(0.7).epsilon(1e-15));
  CHECK(p[1] == Approx(0.7).epsilon(1e-15));

  const auto id = crazy_map(0.0, biunit);
  for (double x : {-1.0, -0.3, 0.8})
    for (double y : {-0.6, 0.0, 1.0}) {
      CHECK(id(x, y)[0] == Approx(x));
      CHECK(id(x, y)[1] == Approx(y));
    }

  // the boundary maps onto itself
  for (double t : {-0.9, -0.2, 0.4}) {
    CHECK(m(-1.0, t)[0] == Approx(-1.0));
    CHECK(m(t, 1.0)[1] == Approx(1.0));
    CHECK(m(1.0, t)[1] == Approx(t));
  }
}

TEST_CASE("determinant formula on the full element") {
  for (double c : {0.0, 0.1, 0.2, 0.3}) {
    const auto m = crazy_map(c, biunit);
    for (double x : {-0.7, 0.0, 0.45})
      for (double y : {-0.25, 0.6}) {
        const double expected = 1.0 + c * pi * std::sin(pi * (x + y));
        CHECK(m.det_jacobian(x, y) == Approx(expected).epsilon(1e-13));
        CHECK(m.det_jacobian(x, y) > 0.0);
      }
  }
}

TEST_CASE("Jacobian matches central finite differences") {
  const CurvilinearMap m(0.25, unit, Rect{0.25, 0.5, 0.5, 0.75});
  const double h = 1e-6;
  for (double x : {-0.8, 0.1, 0.9})
    for (double y : {-0.5, 0.3}) {
      const auto j = m.jacobian(x, y);
      const Eigen::Vector2d dxi = (m(x + h, y) - m(x - h, y)) / (2 * h);
      const Eigen::Vector2d deta = (m(x, y + h) - m(x, y - h)) / (2 * h);
      CHECK(j(0, 0) == Approx(dxi[0]).epsilon(1e-7));
      CHECK(j(1, 0) == Approx(dxi[1]).epsilon(1e-7).scale(1.0));
      CHECK(j(0, 1) == Approx(deta[0]).epsilon(1e-7).scale(1.0));
      CHECK(j(1, 1) == Approx(deta[1]).epsilon(1e-7));
    }
}

TEST_CASE("neighbouring elements share their common edge") {
  const CurvilinearMap a(0.2, unit, Rect{0.0, 0.5, 0.0, 0.5});
  const CurvilinearMap b(0.2, unit, Rect{0.5, 1.0, 0.0, 0.5});
  const CurvilinearMap c(0.2, unit, Rect{0.0, 0.5, 0.5, 1.0});
  for (double t : {-1.0, -0.4, 0.3, 1.0}) {
    CHECK((a(1.0, t) - b(-1.0, t)).norm() < 1e-15);
    CHECK((a(t, 1.0) - c(t, -1.0)).norm() < 1e-15);
  }
}

TEST_CASE("invalid deformation and degenerate input") {
  try {
    crazy_map(1.0 / pi, biunit);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_deformation);
  }
  CHECK_THROWS_AS(CurvilinearMap(0.1, unit, Rect{0.5, 1.5, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(CurvilinearMap(0.1, unit, Rect{0.5, 0.5, 0.0, 1.0}), Error);
}

TEST_CASE("metric terms") {
  const auto m = crazy_map(0.2, Rect{-1, 0, 0, 1});
  const auto data = metric_at(m, {{0.3, -0.2}, {-1.0, 1.0}});
  for (const auto& g : data) {
    CHECK(g.det == Approx(g.jacobian.determinant()));
    CHECK((g.inverse * g.jacobian - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK((g.inverse_metric - g.inverse * g.inverse.transpose()).norm() < 1e-14);
    CHECK((g.inverse_metric - g.inverse_metric.transpose()).norm() < 1e-15);
  }
  CHECK_THROWS_AS(metric_at(m, {{1.5, 0.0}}), Error);
}

TEST_CASE("pullback of a 2-form preserves its integral") {
  // integral of f dx^dy over the deformed unit square equals the integral of
  // the pulled-back 2-form over the reference square
  const auto m = crazy_map(0.2, unit, unit);
  const auto f = FormField::two_form([](double x, double y) { return 1.0 + x * y + std::cos(x); });
  const auto pulled = pullback(f, m);
  const auto g = gauss_legendre(30);
  double ref = 0.0;
  for (int a = 0; a < g.size(); ++a)
    for (int b = 0; b < g.size(); ++b)
      ref += g.weights[a] * g.weights[b] * pulled.components[0](g.nodes[a], g.nodes[b]);
  // the map sends the unit square onto itself
  const auto u = map_rule(g, 0.0, 1.0);
  double phys = 0.0;
  for (int a = 0; a < u.size(); ++a)
    for (int b = 0; b < u.size(); ++b)
      phys += u.weights[a] * u.weights[b] * f.components[0](u.nodes[a], u.nodes[b]);
  CHECK(ref == Approx(phys).epsilon(1e-12));
}

TEST_CASE("pullback commutes with d for an exact 1-form") {
  // a = d(psi): the pulled-back components are the reference gradient of psi o Phi
  const auto m = crazy_map(0.15, Rect{0.25, 0.75, 0.0, 0.5}, unit);
  const auto psi = [](double x, double y) { return std::sin(3 * x) * y + x * x; };
  const auto grad = FormField::one_form([](double x, double y) { return 3 * std::cos(3 * x) * y + 2 * x; },
                                        [](double x, double) { return std::sin(3 * x); });
  const auto pulled = pullback(grad, m);
  const double h = 1e-6;
  for (double x : {-0.5, 0.2})
    for (double y : {-0.8, 0.6}) {
      auto comp = [&](double a, double b) {
        const auto p = m(a, b);
        return psi(p[0], p[1]);
      };
      CHECK(pulled.components[0](x, y) == Approx((comp(x + h, y) - comp(x - h, y)) / (2 * h)).epsilon(1e-7));
      CHECK(pulled.components[1](x, y) == Approx((comp(x, y + h) - comp(x, y - h)) / (2 * h)).epsilon(1e-7));
    }

  const auto zero = pullback(FormField::zero_form(psi), m);
  const auto p = m(0.1, 0.2);
  CHECK(zero.components[0](0.1, 0.2) == psi(p[0], p[1]));
}
