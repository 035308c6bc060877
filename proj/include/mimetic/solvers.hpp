#pragma once

// Poisson problem for a volume form on a tiled, possibly deformed rectangle:
//   q = *d*omega,   dq = f,   *omega = phi on the boundary.
// With phi = *omega this is Laplace(phi) = f for the scalar proxy.
//
// Two discretizations share one mesh:
//   dual-grid:   E21 H11 (E~ H02 omega + E~_ghost g) = f_h  on every element,
//                elements coupled through shared interface ghost values
//   single-grid: [ M1       (M2 E21)^T ] [q    ]   [b      ]
//                [ M2 E21   0          ] [omega] = [M2 f_h ]
// In both, f_h is the reduction of f on primal surfaces, so E21 q = f_h is
// imposed exactly up to linear-solver round-off.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mimetic/assembly.hpp"
#include "mimetic/basis.hpp"
#include "mimetic/geometry.hpp"
#include "mimetic/topology.hpp"

namespace mimetic {

enum class Method { dual, single };

enum class BoundaryKind { dirichlet, neumann };

std::string to_string(Method method);
Method parse_method(const std::string& name);

struct ProblemSpec {
  Method method = Method::single;
  int order = 1;
  int elements_x = 1;
  int elements_y = 1;
  double deformation = 0.0;
  Domain domain = Domain::unit;
  /// dx^dy coefficient of f, physical coordinates.
  ScalarField source;
  /// phi = *omega on the boundary, physical coordinates.
  ScalarField dirichlet;
  /// Physical (dx, dy) components of q, used on Neumann sides only.
  std::optional<std::array<ScalarField, 2>> flux;
  /// Per side, indexed by Side (bottom, top, left, right).
  std::array<BoundaryKind, 4> boundary{BoundaryKind::dirichlet, BoundaryKind::dirichlet,
                                       BoundaryKind::dirichlet, BoundaryKind::dirichlet};
  /// Gauss points per direction for assembly and reduction; 0 picks N + 3.
  int quad_points = 0;
  bool estimate_condition = false;
};

void validate(const ProblemSpec& spec);

/// Mx x My elements of order N. The global primal complex numbers cells like
/// a single TensorCellComplex with Mx*N by My*N cells; node coordinates are
/// the element GLL nodes rescaled to [-1,1] over the whole domain, so nodes on
/// element interfaces are shared.
class SpectralMesh {
public:
  SpectralMesh(int order, int elements_x, int elements_y, double deformation, Domain domain);

  int order() const { return order_; }
  int elements_x() const { return mx_; }
  int elements_y() const { return my_; }
  int num_elements() const { return mx_ * my_; }
  double deformation() const { return c_; }
  Domain domain() const { return domain_; }

  int element(int ex, int ey) const { return ey * mx_ + ex; }
  std::array<int, 2> element_position(int e) const { return {e % mx_, e / mx_}; }
  Rect element_rect(int e) const;

  const std::shared_ptr<const BasisFamily1D>& family() const { return family_; }
  const TensorCellComplex& local_complex() const { return local_; }
  const TensorCellComplex& global_complex() const { return global_; }
  const CurvilinearMap& map(int e) const { return maps_.at(e); }

  /// Global index of local cell `local` (numbered as in local_complex()) of
  /// element e.
  int global_point(int e, int local) const;
  int global_edge(int e, int local) const;
  int global_surface(int e, int local) const;

private:
  int order_, mx_, my_;
  double c_;
  Domain domain_;
  std::shared_ptr<const BasisFamily1D> family_;
  TensorCellComplex local_;
  TensorCellComplex global_;
  std::vector<CurvilinearMap> maps_;
};

struct SolverDiagnostics {
  int unknowns = 0;
  long nonzeros = 0;
  /// max |A x - b|
  double residual = 0.0;
  /// 1-norm condition estimate, NaN unless requested.
  double condition_estimate = 0.0;
};

class Solution {
public:
  Solution(Method method, std::shared_ptr<const SpectralMesh> mesh, Cochain omega, Cochain q,
           Cochain source, SolverDiagnostics diagnostics);

  Method method() const { return method_; }
  const SpectralMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const SpectralMesh> mesh_ptr() const { return mesh_; }

  /// Global primal 2-cochain (one value per surface of the global complex).
  const Cochain& omega() const { return omega_; }
  /// Global primal 1-cochain.
  const Cochain& q() const { return q_; }
  /// Reduced source f_h.
  const Cochain& source() const { return source_; }
  const SolverDiagnostics& diagnostics() const { return diagnostics_; }

  /// Number of unknowns of the solved linear system.
  int dof() const { return diagnostics_.unknowns; }

  /// Reconstructions on element e in reference coordinates.
  DiscreteForm element_omega(int e) const;
  DiscreteForm element_q(int e) const;

private:
  Method method_;
  std::shared_ptr<const SpectralMesh> mesh_;
  Cochain omega_;
  Cochain q_;
  Cochain source_;
  SolverDiagnostics diagnostics_;
};

/// Reduction of f dx^dy on the surfaces of the global complex.
Cochain reduce_source(const SpectralMesh& mesh, const ScalarField& f, int quad_points);

/// Assembled single-grid saddle system, exposed for inspection.
struct SingleGridSystem {
  Eigen::SparseMatrix<double> m1;   // global 1-form mass matrix
  Eigen::SparseMatrix<double> b;    // M2 E21
  Eigen::SparseMatrix<double> m2;   // block-diagonal 2-form mass matrix
  Eigen::VectorXd boundary;         // boundary integral vector
  Eigen::VectorXd source;           // f_h
  std::vector<int> fixed_edges;     // q unknowns prescribed by Neumann data
  Eigen::VectorXd fixed_values;
};

SingleGridSystem assemble_single(const ProblemSpec& spec, const SpectralMesh& mesh);

/// Assembled dual-grid system. Unknowns: omega per element (N^2 each, element
/// after element) followed by one value per interface ghost point. Rows: the
/// N^2 balance equations per element, then one flux-continuity equation per
/// primal edge on an element interface.
struct DualGridSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd source;
  /// Per element: q_e = flux_omega * omega_e + flux_ghost * ghost_e.
  std::vector<Eigen::MatrixXd> flux_omega;
  std::vector<Eigen::MatrixXd> flux_ghost;
  /// Per element and ghost point: global unknown index (>= 0) or -1 - k for
  /// the k-th boundary value, with its Dirichlet value in boundary_values.
  std::vector<std::vector<int>> ghost_map;
  Eigen::VectorXd boundary_values;
  int omega_unknowns = 0;
};

DualGridSystem assemble_dual(const ProblemSpec& spec, const SpectralMesh& mesh);

Solution solve_dual(const ProblemSpec& spec);
Solution solve_single(const ProblemSpec& spec);
/// Dispatches on spec.method.
Solution solve(const ProblemSpec& spec);

/// max over surfaces of |E21 q - f_h|.
double conservation_residual(const Solution& sol, const Cochain& f_h);
double conservation_residual(const Cochain& q, const Cochain& f_h, const TensorCellComplex& complex);

}  // namespace mimetic
