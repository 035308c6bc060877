#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mimetic/basis.hpp"

namespace mimetic {

struct Rect {
  double x0, x1, y0, y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Domain { unit, biunit };

/// [0,1]^2 for `unit`, [-1,1]^2 for `biunit`.
Rect domain_rect(Domain domain);

/// Element map Phi: [-1,1]^2 -> physical element.
///
/// The reference square is first mapped affinely onto `element` (a
/// sub-rectangle of `domain`). The global deformation
///   x = s + c sin(pi s) sin(pi t),  y = t + c sin(pi s) sin(pi t)
/// is defined with (s,t) the domain coordinates rescaled to [-1,1]^2, and is
/// applied to the tiled point, so neighbouring elements share their edges.
/// Invertible for |c| < 1/pi, where det dPhi = 1 + c pi sin(pi (s + t)) > 0.
class CurvilinearMap {
public:
  CurvilinearMap(double c, Rect domain, Rect element);

  double deformation() const { return c_; }
  const Rect& domain() const { return domain_; }
  const Rect& element() const { return element_; }

  Eigen::Vector2d operator()(double xi, double eta) const;
  /// [dx/dxi dx/deta; dy/dxi dy/deta]
  Eigen::Matrix2d jacobian(double xi, double eta) const;
  double det_jacobian(double xi, double eta) const { return jacobian(xi, eta).determinant(); }

private:
  double c_;
  Rect domain_;
  Rect element_;
};

CurvilinearMap crazy_map(double c, Rect element_rect, Rect domain = domain_rect(Domain::biunit));

struct MetricPoint {
  Eigen::Vector2d reference;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double det;
  /// Contravariant metric g^{ij} = (J^-1 J^-T)_{ij}.
  Eigen::Matrix2d inverse_metric;
};

using MetricData = std::vector<MetricPoint>;

MetricPoint metric_point(const CurvilinearMap& map, double xi, double eta);
MetricData metric_at(const CurvilinearMap& map, const std::vector<Point2>& points);

/// Physical k-form components as functions of (x, y): one component for
/// k = 0 and k = 2 (dx^dy coefficient), two (dx, dy) for k = 1.
using PhysicalForm = FormField;

/// Pulls a physical form back to reference coordinates (xi, eta).
FormField pullback(const PhysicalForm& form, const CurvilinearMap& map);

}  // namespace mimetic
