#pragma once

// Metric-dependent element matrices: L2 mass matrices of the k-form bases and
// the explicit Hodge matrices between the primal grid (GLL nodes) and the
// staggered dual grid (N interior dual nodes per direction plus the element
// boundary).

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mimetic/basis.hpp"
#include "mimetic/geometry.hpp"
#include "mimetic/topology.hpp"

namespace mimetic {

enum class GridKind { primal, dual };

struct MassMatrix {
  int degree = 0;
  Eigen::MatrixXd matrix;
};

struct HodgeMatrix {
  int source_degree = 0;
  GridKind source_grid = GridKind::primal;
  int target_degree = 0;
  GridKind target_grid = GridKind::dual;
  Eigen::MatrixXd matrix;
};

/// Default per-direction Gauss-Legendre point count for assembly: N + 3.
inline int default_quad_points(int order) { return order + 3; }

/// Default dual node placement: the N Gauss-Legendre points.
std::vector<double> default_dual_nodes(int order);

/// M^k_ab = integral of (basis_a, basis_b) over the physical element.
MassMatrix mass_matrix(int degree, const BasisFamily1D& family, const CurvilinearMap& map,
                       int quad_points);

/// Primal 2-cochain -> dual interior 0-cochain: the value of the Hodge dual of
/// the reconstructed 2-form at each dual node, (sum w_ij e_i e_j) / det J.
/// Rows follow dual point numbering (k + l*N), columns primal surfaces.
HodgeMatrix hodge_02(const BasisFamily1D& family, const std::vector<double>& dual_nodes,
                     const CurvilinearMap& map);

/// Dual interior 0-cochain -> primal 2-cochain: integrates the Hodge dual
/// (volume form) of the dual Lagrange interpolant over each primal surface.
HodgeMatrix hodge_20(const BasisFamily1D& family, const std::vector<double>& dual_nodes,
                     const CurvilinearMap& map, int quad_points);

/// Dual 1-cochain (one value per dual edge, i.e. per primal edge, in the
/// DualGrid orientation) -> primal 1-cochain.
///
/// The dual 1-form is reconstructed with edge polynomials on the extended
/// dual nodes (-1, interior nodes, +1) along the edge direction and Lagrange
/// polynomials on the interior dual nodes across it; its physical Hodge dual is
/// then integrated over every primal edge. On an affine element the result is
/// exactly representable in the primal 1-form basis.
HodgeMatrix hodge_11_dual_to_primal(const BasisFamily1D& family,
                                    const std::vector<double>& dual_nodes,
                                    const CurvilinearMap& map, int quad_points);

/// Evaluates the reconstructed dual 1-form (reference components) for the
/// given dual 1-cochain, used by tests to check the reconstruction directly.
Eigen::Vector2d dual_one_form(const Eigen::VectorXd& dual_cochain, int order,
                              const std::vector<double>& dual_nodes, double xi, double eta);

}  // namespace mimetic
