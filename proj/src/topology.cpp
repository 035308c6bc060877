#include "mimetic/topology.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {

void check_nodes(const std::vector<double>& nodes, const char* name) {
  require(nodes.size() >= 2, ErrorKind::invalid_input,
          std::string(name) + ": at least two nodes are required");
  require(nodes.front() == -1.0 && nodes.back() == 1.0, ErrorKind::invalid_input,
          std::string(name) + ": nodes must start at -1 and end at +1");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    require(nodes[i] > nodes[i - 1], ErrorKind::invalid_input,
            std::string(name) + ": nodes must be strictly increasing");
  }
}

IncidenceMatrix from_map(int rows, int cols, const std::map<std::pair<int, int>, int>& m) {
  std::vector<IncidenceMatrix::Entry> entries;
  entries.reserve(m.size());
  for (const auto& [rc, v] : m) {
    if (v != 0) entries.push_back({rc.first, rc.second, static_cast<std::int8_t>(v)});
  }
  return IncidenceMatrix(rows, cols, std::move(entries));
}

}  // namespace

IncidenceMatrix::IncidenceMatrix(int rows, int cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& e : entries_) {
    require(e.row >= 0 && e.row < rows_ && e.col >= 0 && e.col < cols_,
            ErrorKind::invalid_index, "incidence entry out of range");
    require(e.value == 1 || e.value == -1, ErrorKind::invalid_input,
            "incidence entries must be -1 or +1");
  }
}

Eigen::MatrixXi IncidenceMatrix::to_dense() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(rows_, cols_);
  for (const auto& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

Eigen::SparseMatrix<double> IncidenceMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.emplace_back(e.row, e.col, e.value);
  Eigen::SparseMatrix<double> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::VectorXd IncidenceMatrix::apply(const Eigen::VectorXd& x) const {
  require(x.size() == cols_, ErrorKind::invalid_input, "incidence apply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
  return y;
}

Eigen::VectorXd IncidenceMatrix::apply_transpose(const Eigen::VectorXd& x) const {
  require(x.size() == rows_, ErrorKind::invalid_input,
          "incidence apply_transpose: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
  for (const auto& e : entries_) y[e.col] += e.value * x[e.row];
  return y;
}

IncidenceMatrix IncidenceMatrix::transpose() const {
  std::vector<Entry> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
  return IncidenceMatrix(cols_, rows_, std::move(t));
}

Eigen::MatrixXi IncidenceMatrix::multiply(const IncidenceMatrix& rhs) const {
  require(cols_ == rhs.rows_, ErrorKind::invalid_input, "incidence multiply: shape mismatch");
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(rows_, rhs.cols_);
  // rhs rows are contiguous in the sorted entry list
  std::vector<std::size_t> row_start(rhs.rows_ + 1, 0);
  for (const auto& e : rhs.entries_) ++row_start[e.row + 1];
  for (int r = 0; r < rhs.rows_; ++r) row_start[r + 1] += row_start[r];
  for (const auto& a : entries_) {
    for (std::size_t k = row_start[a.col]; k < row_start[a.col + 1]; ++k) {
      const auto& b = rhs.entries_[k];
      out(a.row, b.col) += a.value * b.value;
    }
  }
  return out;
}

TensorCellComplex::TensorCellComplex(std::vector<double> nodes_xi,
                                     std::vector<double> nodes_eta)
    : nodes_xi_(std::move(nodes_xi)), nodes_eta_(std::move(nodes_eta)) {
  check_nodes(nodes_xi_, "nodes_xi");
  check_nodes(nodes_eta_, "nodes_eta");
  nx_ = static_cast<int>(nodes_xi_.size()) - 1;
  ny_ = static_cast<int>(nodes_eta_.size()) - 1;

  std::vector<IncidenceMatrix::Entry> e10;
  e10.reserve(2 * num_edges());
  for (int j = 0; j <= ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      e10.push_back({xi_edge(i, j), point(i, j), -1});
      e10.push_back({xi_edge(i, j), point(i + 1, j), 1});
    }
  }
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i <= nx_; ++i) {
      e10.push_back({eta_edge(i, j), point(i, j), -1});
      e10.push_back({eta_edge(i, j), point(i, j + 1), 1});
    }
  }
  e10_ = IncidenceMatrix(num_edges(), num_points(), std::move(e10));

  std::vector<IncidenceMatrix::Entry> e21;
  e21.reserve(4 * num_surfaces());
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const int s = surface(i, j);
      e21.push_back({s, xi_edge(i, j), 1});
      e21.push_back({s, xi_edge(i, j + 1), -1});
      e21.push_back({s, eta_edge(i, j), -1});
      e21.push_back({s, eta_edge(i + 1, j), 1});
    }
  }
  e21_ = IncidenceMatrix(num_surfaces(), num_edges(), std::move(e21));
}

int TensorCellComplex::num_cells(int k) const {
  switch (k) {
    case 0: return num_points();
    case 1: return num_edges();
    case 2: return num_surfaces();
    default: throw Error(ErrorKind::invalid_degree, "cell degree must be 0, 1 or 2");
  }
}

const IncidenceMatrix& TensorCellComplex::incidence(int k) const {
  if (k == 1) return e10_;
  if (k == 2) return e21_;
  throw Error(ErrorKind::invalid_degree,
              "incidence degree must satisfy 1 <= k <= 2, got " + std::to_string(k));
}

TensorCellComplex build_primal_complex(std::vector<double> nodes_xi,
                                       std::vector<double> nodes_eta) {
  return TensorCellComplex(std::move(nodes_xi), std::move(nodes_eta));
}

const IncidenceMatrix& incidence_matrix(const TensorCellComplex& complex, int k) {
  return complex.incidence(k);
}

Cochain coboundary(const Cochain& c, const TensorCellComplex& complex) {
  require(c.degree >= 0 && c.degree <= TensorCellComplex::dimension, ErrorKind::invalid_degree,
          "cochain degree out of range");
  require(c.degree < TensorCellComplex::dimension, ErrorKind::cannot_raise_degree,
          "coboundary of a top-degree cochain");
  require(c.coefficients.size() == complex.num_cells(c.degree), ErrorKind::invalid_input,
          "cochain length does not match the complex");
  return {c.degree + 1, complex.incidence(c.degree + 1).apply(c.coefficients)};
}

Chain boundary(const Chain& a, const TensorCellComplex& complex) {
  require(a.degree >= 1 && a.degree <= TensorCellComplex::dimension, ErrorKind::invalid_degree,
          "boundary needs a chain of degree 1 or 2");
  require(a.coefficients.size() == complex.num_cells(a.degree), ErrorKind::invalid_input,
          "chain length does not match the complex");
  return {a.degree - 1, complex.incidence(a.degree).apply_transpose(a.coefficients)};
}

double pairing(const Cochain& c, const Chain& a) {
  require(c.degree == a.degree && c.coefficients.size() == a.coefficients.size(),
          ErrorKind::invalid_input, "pairing of mismatched chain and cochain");
  return c.coefficients.dot(a.coefficients);
}

DualGrid::DualGrid(const TensorCellComplex& primal, std::vector<double> dual_nodes_xi,
                   std::vector<double> dual_nodes_eta)
    : primal_(primal),
      nodes_xi_(std::move(dual_nodes_xi)),
      nodes_eta_(std::move(dual_nodes_eta)) {
  const int nx = primal_.cells_xi();
  const int ny = primal_.cells_eta();
  auto check = [](const std::vector<double>& dual, const std::vector<double>& prim,
                  const char* name) {
    require(dual.size() + 1 == prim.size(), ErrorKind::invalid_input,
            std::string(name) + ": need exactly one dual node per primal cell");
    for (std::size_t i = 0; i < dual.size(); ++i) {
      require(dual[i] > prim[i] && dual[i] < prim[i + 1], ErrorKind::invalid_input,
              std::string(name) + ": dual node must lie strictly inside its primal cell");
    }
  };
  check(nodes_xi_, primal_.nodes_xi(), "dual_nodes_xi");
  check(nodes_eta_, primal_.nodes_eta(), "dual_nodes_eta");

  ext_xi_.reserve(nx + 2);
  ext_xi_.push_back(-1.0);
  ext_xi_.insert(ext_xi_.end(), nodes_xi_.begin(), nodes_xi_.end());
  ext_xi_.push_back(1.0);
  ext_eta_.reserve(ny + 2);
  ext_eta_.push_back(-1.0);
  ext_eta_.insert(ext_eta_.end(), nodes_eta_.begin(), nodes_eta_.end());
  ext_eta_.push_back(1.0);

  // E~(1,0): interior rows are E(2,1)^T plus one ghost column per boundary edge.
  std::vector<IncidenceMatrix::Entry> e10;
  for (const auto& e : primal_.incidence(2).entries()) e10.push_back({e.col, e.row, e.value});
  for (int i = 0; i < nx; ++i) {
    e10.push_back({primal_.xi_edge(i, 0), ghost_point(Side::bottom, i), -1});
    e10.push_back({primal_.xi_edge(i, ny), ghost_point(Side::top, i), 1});
  }
  for (int j = 0; j < ny; ++j) {
    e10.push_back({primal_.eta_edge(0, j), ghost_point(Side::left, j), 1});
    e10.push_back({primal_.eta_edge(nx, j), ghost_point(Side::right, j), -1});
  }

  // Ghost points in counter-clockwise order around the boundary.
  for (int i = 0; i < nx; ++i) ghost_cycle_.push_back(ghost_point(Side::bottom, i));
  for (int j = 0; j < ny; ++j) ghost_cycle_.push_back(ghost_point(Side::right, j));
  for (int i = nx - 1; i >= 0; --i) ghost_cycle_.push_back(ghost_point(Side::top, i));
  for (int j = ny - 1; j >= 0; --j) ghost_cycle_.push_back(ghost_point(Side::left, j));
  const int m = static_cast<int>(ghost_cycle_.size());
  const int ghost_edge0 = num_interior_edges();
  for (int t = 0; t < m; ++t) {
    e10.push_back({ghost_edge0 + t, ghost_cycle_[t], -1});
    e10.push_back({ghost_edge0 + t, ghost_cycle_[(t + 1) % m], 1});
  }
  e10_ = IncidenceMatrix(num_edges(), num_points(), std::move(e10));

  // E~(2,1): interior columns are E(1,0)^T; each boundary face is closed by the
  // single ghost edge that cancels the ghost-point residue of its interior part.
  std::map<std::pair<int, int>, int> e21;
  std::vector<std::map<int, int>> residue(num_faces());
  const auto e10_dense_rows = [&] {
    std::vector<std::vector<IncidenceMatrix::Entry>> rows(num_edges());
    for (const auto& e : e10_.entries()) rows[e.row].push_back(e);
    return rows;
  }();
  for (const auto& e : primal_.incidence(1).entries()) {
    e21[{e.col, e.row}] += e.value;
    for (const auto& d : e10_dense_rows[e.row]) {
      if (d.col >= num_interior_points()) residue[e.col][d.col] += e.value * d.value;
    }
  }
  std::map<std::pair<int, int>, int> cycle_edge;  // (tail, head) -> ghost edge
  for (int t = 0; t < m; ++t) cycle_edge[{ghost_cycle_[t], ghost_cycle_[(t + 1) % m]}] = t;
  for (int p = 0; p < num_faces(); ++p) {
    std::vector<std::pair<int, int>> nz;
    for (const auto& [g, v] : residue[p])
      if (v != 0) nz.emplace_back(g, v);
    if (nz.empty()) continue;
    require(nz.size() == 2, ErrorKind::numerical_failure, "dual face residue is not a 1-chain");
    int tail = nz[0].first, head = nz[1].first;
    auto it = cycle_edge.find({tail, head});
    if (it == cycle_edge.end()) {
      std::swap(tail, head);
      it = cycle_edge.find({tail, head});
    }
    require(it != cycle_edge.end(), ErrorKind::numerical_failure,
            "no ghost edge closes dual face");
    const int sign = -residue[p][head];
    e21[{p, ghost_edge0 + it->second}] += sign;
  }
  e21_ = from_map(num_faces(), num_edges(), e21);
}

int DualGrid::ghost_point(Side side, int index) const {
  const int nx = primal_.cells_xi();
  const int ny = primal_.cells_eta();
  const int base = num_interior_points();
  switch (side) {
    case Side::bottom:
      require(index >= 0 && index < nx, ErrorKind::invalid_index, "ghost index out of range");
      return base + index;
    case Side::top:
      require(index >= 0 && index < nx, ErrorKind::invalid_index, "ghost index out of range");
      return base + nx + index;
    case Side::left:
      require(index >= 0 && index < ny, ErrorKind::invalid_index, "ghost index out of range");
      return base + 2 * nx + index;
    case Side::right:
      require(index >= 0 && index < ny, ErrorKind::invalid_index, "ghost index out of range");
      return base + 2 * nx + ny + index;
  }
  throw Error(ErrorKind::invalid_index, "unknown side");
}

std::array<double, 2> DualGrid::point_coordinates(int p) const {
  const int nx = primal_.cells_xi();
  const int ny = primal_.cells_eta();
  require(p >= 0 && p < num_points(), ErrorKind::invalid_index, "dual point out of range");
  if (p < num_interior_points()) return {nodes_xi_[p % nx], nodes_eta_[p / nx]};
  int g = p - num_interior_points();
  if (g < nx) return {nodes_xi_[g], -1.0};
  g -= nx;
  if (g < nx) return {nodes_xi_[g], 1.0};
  g -= nx;
  if (g < ny) return {-1.0, nodes_eta_[g]};
  g -= ny;
  return {1.0, nodes_eta_[g]};
}

const IncidenceMatrix& DualGrid::incidence(int k) const {
  if (k == 1) return e10_;
  if (k == 2) return e21_;
  throw Error(ErrorKind::invalid_degree,
              "dual incidence degree must satisfy 1 <= k <= 2, got " + std::to_string(k));
}

IncidenceMatrix DualGrid::interior_coboundary() const {
  std::vector<IncidenceMatrix::Entry> out;
  for (const auto& e : e10_.entries()) {
    if (e.row < num_interior_edges() && e.col < num_interior_points()) out.push_back(e);
  }
  return IncidenceMatrix(num_interior_edges(), num_interior_points(), std::move(out));
}

IncidenceMatrix DualGrid::ghost_coboundary() const {
  std::vector<IncidenceMatrix::Entry> out;
  for (const auto& e : e10_.entries()) {
    if (e.row < num_interior_edges() && e.col >= num_interior_points()) {
      out.push_back({e.row, e.col - num_interior_points(), e.value});
    }
  }
  return IncidenceMatrix(num_interior_edges(), num_ghost_points(), std::move(out));
}

DualGrid build_dual_grid(const TensorCellComplex& primal, std::vector<double> dual_nodes_xi,
                         std::vector<double> dual_nodes_eta) {
  return DualGrid(primal, std::move(dual_nodes_xi), std::move(dual_nodes_eta));
}

}  // namespace mimetic
