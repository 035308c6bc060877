#pragma once

// Oriented tensor-product cell complexes in two dimensions and their
// metric-free boundary operators.
//
// Cell ordering (fixed, so incidence matrices are reproducible):
//   points    p(i,j) = j*(nx+1) + i                     i = 0..nx, j = 0..ny
//   xi-edges  e(i,j) = j*nx + i                         segment i, node row j
//   eta-edges e(i,j) = nx*(ny+1) + j*(nx+1) + i         node column i, segment j
//   surfaces  s(i,j) = j*nx + i
//
// Orientation: points are sinks, edges point toward increasing coordinate,
// surfaces are counter-clockwise. With this ordering a single cell reproduces
//   E(1,0) = [-1 1 0 0; 0 0 -1 1; -1 0 1 0; 0 -1 0 1],  E(2,1) = [1 -1 -1 1].

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mimetic {

class IncidenceMatrix {
public:
  struct Entry {
    int row;
    int col;
    std::int8_t value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  IncidenceMatrix() = default;
  IncidenceMatrix(int rows, int cols, std::vector<Entry> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }

  Eigen::MatrixXi to_dense() const;
  Eigen::SparseMatrix<double> to_sparse() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& x) const;

  IncidenceMatrix transpose() const;

  /// Exact integer product; entries of the result may leave {-1,0,1}, in
  /// which case the result is returned as a dense integer matrix.
  Eigen::MatrixXi multiply(const IncidenceMatrix& rhs) const;

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Entry> entries_;  // sorted by (row, col), no zeros
};

class TensorCellComplex {
public:
  TensorCellComplex(std::vector<double> nodes_xi, std::vector<double> nodes_eta);

  static constexpr int dimension = 2;

  int cells_xi() const { return nx_; }
  int cells_eta() const { return ny_; }

  int num_points() const { return (nx_ + 1) * (ny_ + 1); }
  int num_xi_edges() const { return nx_ * (ny_ + 1); }
  int num_eta_edges() const { return (nx_ + 1) * ny_; }
  int num_edges() const { return num_xi_edges() + num_eta_edges(); }
  int num_surfaces() const { return nx_ * ny_; }
  int num_cells(int k) const;
  int euler_characteristic() const {
    return num_points() - num_edges() + num_surfaces();
  }

  int point(int i, int j) const { return j * (nx_ + 1) + i; }
  int xi_edge(int i, int j) const { return j * nx_ + i; }
  int eta_edge(int i, int j) const { return num_xi_edges() + j * (nx_ + 1) + i; }
  int surface(int i, int j) const { return j * nx_ + i; }

  const std::vector<double>& nodes_xi() const { return nodes_xi_; }
  const std::vector<double>& nodes_eta() const { return nodes_eta_; }

  const IncidenceMatrix& incidence(int k) const;

private:
  std::vector<double> nodes_xi_;
  std::vector<double> nodes_eta_;
  int nx_;
  int ny_;
  IncidenceMatrix e10_;
  IncidenceMatrix e21_;
};

struct Chain {
  int degree;
  Eigen::VectorXd coefficients;
};

struct Cochain {
  int degree;
  Eigen::VectorXd coefficients;
};

TensorCellComplex build_primal_complex(std::vector<double> nodes_xi,
                                       std::vector<double> nodes_eta);

/// E(k,k-1), rows are k-cells, columns (k-1)-cells. Valid for 1 <= k <= 2.
const IncidenceMatrix& incidence_matrix(const TensorCellComplex& complex, int k);

/// delta c = E(k+1,k) c.
Cochain coboundary(const Cochain& c, const TensorCellComplex& complex);

/// boundary a = E(k,k-1)^T a.
Chain boundary(const Chain& a, const TensorCellComplex& complex);

double pairing(const Cochain& c, const Chain& a);

// Dual grid of a primal complex.
//
// Interior dual cells are numbered like the primal cells they are dual to:
// dual point s <-> primal surface s, dual edge e <-> primal edge e, dual face
// p <-> primal point p. Dual edges carry the primal edge direction rotated by
// +90 degrees, so the dual of a xi-edge points along +eta and the dual of an
// eta-edge along -xi. With this choice E~(1,0) restricted to interior cells is
// exactly E(2,1)^T and E~(2,1) restricted to interior edges is E(1,0)^T.
//
// Ghost points close the complex along the boundary. They are appended after
// the interior points in the block order bottom (i = 0..nx-1), top
// (i = 0..nx-1), left (j = 0..ny-1), right (j = 0..ny-1). Ghost edges connect
// consecutive ghost points counter-clockwise around the boundary, one cutting
// each corner, and are appended after the interior edges.
enum class Side { bottom = 0, top = 1, left = 2, right = 3 };

class DualGrid {
public:
  DualGrid(const TensorCellComplex& primal, std::vector<double> dual_nodes_xi,
           std::vector<double> dual_nodes_eta);

  const TensorCellComplex& primal() const { return primal_; }

  int num_interior_points() const { return primal_.num_surfaces(); }
  int num_ghost_points() const {
    return 2 * primal_.cells_xi() + 2 * primal_.cells_eta();
  }
  int num_points() const { return num_interior_points() + num_ghost_points(); }
  int num_interior_edges() const { return primal_.num_edges(); }
  int num_ghost_edges() const { return num_ghost_points(); }
  int num_edges() const { return num_interior_edges() + num_ghost_edges(); }
  int num_faces() const { return primal_.num_points(); }

  /// Index of a ghost point among all dual points.
  int ghost_point(Side side, int index) const;

  /// Extended dual coordinates per direction: -1, interior nodes, +1.
  const std::vector<double>& extended_xi() const { return ext_xi_; }
  const std::vector<double>& extended_eta() const { return ext_eta_; }
  const std::vector<double>& nodes_xi() const { return nodes_xi_; }
  const std::vector<double>& nodes_eta() const { return nodes_eta_; }

  /// Coordinates of dual point `p` (interior or ghost).
  std::array<double, 2> point_coordinates(int p) const;

  /// E~(1,0) over all dual edges and points, E~(2,1) over all faces and edges.
  const IncidenceMatrix& incidence(int k) const;

  /// Columns of E~(1,0) restricted to interior dual edges, split into the
  /// interior-point block and the ghost-point block.
  IncidenceMatrix interior_coboundary() const;
  IncidenceMatrix ghost_coboundary() const;

private:
  TensorCellComplex primal_;
  std::vector<int> ghost_cycle_;
  std::vector<double> nodes_xi_;
  std::vector<double> nodes_eta_;
  std::vector<double> ext_xi_;
  std::vector<double> ext_eta_;
  IncidenceMatrix e10_;
  IncidenceMatrix e21_;
};

DualGrid build_dual_grid(const TensorCellComplex& primal,
                         std::vector<double> dual_nodes_xi,
                         std::vector<double> dual_nodes_eta);

}  // namespace mimetic
