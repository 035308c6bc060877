#pragma once

// Nodal (Lagrange) and edge polynomials on [-1,1] and the tensor-product
// k-form bases built from them, together with reduction (integration over
// cells), reconstruction (expansion in the basis) and their composition, the
// mimetic projection.
//
// In two dimensions the reference bases are
//   0-forms  h_i(xi) h_j(eta)                         i,j = 0..N
//   1-forms  e_i(xi) h_j(eta) dxi,  h_i(xi) e_j(eta) deta
//   2-forms  e_i(xi) e_j(eta) dxi^deta                 i,j = 1..N
// with e_i = -sum_{k<i} h_k'. Coefficients are laid out exactly like the cells
// of the TensorCellComplex built on the same nodes (xi-directed block first).
//
// The three-dimensional tensor bases follow the same pattern (three factors,
// one edge polynomial per differential) and are not implemented.

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mimetic/topology.hpp"

namespace mimetic {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Lobatto-Legendre rule with N+1 points (order N), 1 <= N <= 64.
struct GLLRule : QuadratureRule {
  int order = 0;
};

GLLRule gll_rule(int order);

/// Gauss-Legendre rule with `points` points on [-1,1].
QuadratureRule gauss_legendre(int points);

/// Maps a rule on [-1,1] onto [a,b].
QuadratureRule map_rule(const QuadratureRule& rule, double a, double b);

/// Legendre polynomial L_n and its derivative at x.
std::pair<double, double> legendre(int n, double x);

/// Lagrange and edge polynomials on an arbitrary strictly increasing node set.
class BasisFamily1D {
public:
  explicit BasisFamily1D(std::vector<double> nodes);
  explicit BasisFamily1D(const GLLRule& rule) : BasisFamily1D(rule.nodes) {}

  /// Number of cells N (nodes - 1).
  int order() const { return static_cast<int>(nodes_.size()) - 1; }
  const std::vector<double>& nodes() const { return nodes_; }

  double lagrange(int i, double x) const;
  double lagrange_derivative(int i, double x) const;
  /// epsilon_i(x), the proxy of the edge 1-form e_i = epsilon_i dx, 1 <= i <= N.
  double edge(int i, double x) const;

  /// All h_i(x), i = 0..N.
  Eigen::VectorXd lagrange_all(double x) const;
  Eigen::VectorXd lagrange_derivative_all(double x) const;
  /// All epsilon_i(x), i = 1..N, stored at index i-1.
  Eigen::VectorXd edge_all(double x) const;

private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

using Point2 = std::array<double, 2>;
using ScalarField = std::function<double(double, double)>;

/// A k-form on the reference square given by its coordinate components:
/// one component for k = 0 and k = 2 (the dxi^deta coefficient), two for
/// k = 1 (dxi and deta coefficients).
struct FormField {
  int degree = 0;
  std::vector<ScalarField> components;

  static FormField zero_form(ScalarField f) { return {0, {std::move(f)}}; }
  static FormField one_form(ScalarField fxi, ScalarField feta) {
    return {1, {std::move(fxi), std::move(feta)}};
  }
  static FormField two_form(ScalarField f) { return {2, {std::move(f)}}; }
};

/// A reconstructed k-form: coefficients in the tensor basis of `family`.
class DiscreteForm {
public:
  DiscreteForm(int degree, std::shared_ptr<const BasisFamily1D> family,
               Eigen::VectorXd coefficients);

  int degree() const { return degree_; }
  const BasisFamily1D& family() const { return *family_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

  /// Component shape (rows = eta extent, cols = xi extent) per component.
  std::vector<std::array<int, 2>> component_shapes() const;

  /// Component values at a point: size 1 for k = 0, 2; size 2 for k = 1.
  std::vector<double> evaluate(double xi, double eta) const;

  /// Exterior derivative of the reconstruction, evaluated from the analytic
  /// derivatives of the Lagrange polynomials (independent of the coboundary).
  std::vector<double> derivative(double xi, double eta) const;

private:
  int degree_;
  std::shared_ptr<const BasisFamily1D> family_;
  Eigen::VectorXd coefficients_;
};

/// Number of basis functions of degree k for a family of order N.
int basis_size(int degree, int order);

/// Integrates `form` over every k-cell of `complex` with a Gauss-Legendre rule
/// of `quad_points` points per direction and cell.
Cochain reduce(const FormField& form, const TensorCellComplex& complex, int quad_points);

DiscreteForm reconstruct(const Cochain& c, std::shared_ptr<const BasisFamily1D> family);

/// reconstruct(reduce(form)) on the complex built from the family's nodes.
DiscreteForm project(const FormField& form, std::shared_ptr<const BasisFamily1D> family,
                     int quad_points);

/// Complex on the nodes of a basis family in both directions.
TensorCellComplex complex_of(const BasisFamily1D& family);

}  // namespace mimetic
