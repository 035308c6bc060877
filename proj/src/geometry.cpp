#include "mimetic/geometry.hpp"

#include <cmath>
#include <numbers>

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {
constexpr double pi = std::numbers::pi;
}

Rect domain_rect(Domain domain) {
  return domain == Domain::unit ? Rect{0.0, 1.0, 0.0, 1.0} : Rect{-1.0, 1.0, -1.0, 1.0};
}

CurvilinearMap::CurvilinearMap(double c, Rect domain, Rect element)
    : c_(c), domain_(domain), element_(element) {
  require(std::abs(c) < 1.0 / pi, ErrorKind::invalid_deformation,
          "deformation coefficient must satisfy |c| < 1/pi");
  require(domain.width() > 0 && domain.height() > 0, ErrorKind::invalid_input,
          "domain rectangle is empty");
  require(element.width() > 0 && element.height() > 0, ErrorKind::invalid_input,
          "element rectangle is empty");
  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  require(element.x0 >= domain.x0 - tol && element.x1 <= domain.x1 + tol &&
              element.y0 >= domain.y0 - tol && element.y1 <= domain.y1 + tol,
          ErrorKind::invalid_input, "element rectangle must lie inside the domain");
}

Eigen::Vector2d CurvilinearMap::operator()(double xi, double eta) const {
  const double x = element_.x0 + 0.5 * (xi + 1.0) * element_.width();
  const double y = element_.y0 + 0.5 * (eta + 1.0) * element_.height();
  if (c_ == 0.0) return {x, y};
  const double s = 2.0 * (x - domain_.x0) / domain_.width() - 1.0;
  const double t = 2.0 * (y - domain_.y0) / domain_.height() - 1.0;
  const double bump = c_ * std::sin(pi * s) * std::sin(pi * t);
  return {x + 0.5 * domain_.width() * bump, y + 0.5 * domain_.height() * bump};
}

Eigen::Matrix2d CurvilinearMap::jacobian(double xi, double eta) const {
  const double we = element_.width();
  const double he = element_.height();
  Eigen::Matrix2d j;
  j << 0.5 * we, 0.0, 0.0, 0.5 * he;
  if (c_ == 0.0) return j;
  const double W = domain_.width();
  const double H = domain_.height();
  const double x = element_.x0 + 0.5 * (xi + 1.0) * we;
  const double y = element_.y0 + 0.5 * (eta + 1.0) * he;
  const double s = 2.0 * (x - domain_.x0) / W - 1.0;
  const double t = 2.0 * (y - domain_.y0) / H - 1.0;
  // d(bump)/dxi and d(bump)/deta, with ds/dxi = we/W and dt/deta = he/H
  const double db_dxi = c_ * pi * std::cos(pi * s) * std::sin(pi * t) * (we / W);
  const double db_deta = c_ * pi * std::sin(pi * s) * std::cos(pi * t) * (he / H);
  j(0, 0) += 0.5 * W * db_dxi;
  j(0, 1) += 0.5 * W * db_deta;
  j(1, 0) += 0.5 * H * db_dxi;
  j(1, 1) += 0.5 * H * db_deta;
  return j;
}

CurvilinearMap crazy_map(double c, Rect element_rect, Rect domain) {
  return CurvilinearMap(c, domain, element_rect);
}

MetricPoint metric_point(const CurvilinearMap& map, double xi, double eta) {
  MetricPoint m;
  m.reference = {xi, eta};
  m.jacobian = map.jacobian(xi, eta);
  m.det = m.jacobian.determinant();
  require(m.det > 1e-12, ErrorKind::singular_map, "singular element map");
  m.inverse = m.jacobian.inverse();
  m.inverse_metric = m.inverse * m.inverse.transpose();
  return m;
}

MetricData metric_at(const CurvilinearMap& map, const std::vector<Point2>& points) {
  MetricData out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require(std::abs(p[0]) <= 1.0 && std::abs(p[1]) <= 1.0, ErrorKind::invalid_input,
            "metric point outside the reference square");
    out.push_back(metric_point(map, p[0], p[1]));
  }
  return out;
}

FormField pullback(const PhysicalForm& form, const CurvilinearMap& map) {
  switch (form.degree) {
    case 0: {
      auto f = form.components.at(0);
      return FormField::zero_form([f, map](double xi, double eta) {
        const auto x = map(xi, eta);
        return f(x[0], x[1]);
      });
    }
    case 1: {
      auto fx = form.components.at(0);
      auto fy = form.components.at(1);
      // reference components = J^T (a_x, a_y)
      auto component = [fx, fy, map](int r) {
        return [fx, fy, map, r](double xi, double eta) {
          const auto x = map(xi, eta);
          const auto j = map.jacobian(xi, eta);
          return j(0, r) * fx(x[0], x[1]) + j(1, r) * fy(x[0], x[1]);
        };
      };
      return FormField::one_form(component(0), component(1));
    }
    case 2: {
      auto f = form.components.at(0);
      return FormField::two_form([f, map](double xi, double eta) {
        const auto x = map(xi, eta);
        return f(x[0], x[1]) * map.det_jacobian(xi, eta);
      });
    }
    default:
      throw Error(ErrorKind::invalid_input, "pullback degree must be 0, 1 or 2");
  }
}

}  // namespace mimetic
