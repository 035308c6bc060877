#pragma once

// Manufactured-solution experiments: error measurement, h- and p-sweeps,
// dual/single method comparison and the CSV record format.
//
// Mesh size convention: h = 1 / (elements per side).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mimetic/solvers.hpp"

namespace mimetic {

/// phi = sin(2 pi x) sin(2 pi y) = *omega, with f = Laplace(phi) and the flux
/// q = *d phi = -phi_y dx + phi_x dy.
struct ManufacturedSolution {
  ScalarField phi;
  ScalarField phi_x;
  ScalarField phi_y;
  ScalarField source;
  ScalarField flux_x;
  ScalarField flux_y;
};

ManufacturedSolution manufactured_solution();

ProblemSpec manufactured_problem(Method method, int order, int elements_x, int elements_y,
                                 double c, Domain domain = Domain::unit);

/// Default error quadrature: N + 4 Gauss points per direction and element.
inline int default_error_points(int order) { return order + 4; }

/// L2 norm of (*omega_h - phi) over the physical domain.
double l2_error_omega(const Solution& sol, const ScalarField& phi, int quad_points);
/// L2 norm of q_h - q over the physical domain (metric 1-form inner product).
double l2_error_q(const Solution& sol, const ScalarField& qx, const ScalarField& qy,
                  int quad_points);

struct ProjectionError {
  double omega = 0.0;
  double q = 0.0;
};

/// L2 errors of the mimetic projection (reduce then reconstruct) of the exact
/// omega and q on the given mesh.
ProjectionError projection_error(const SpectralMesh& mesh, const ManufacturedSolution& exact,
                                 int reduce_points, int error_points);

struct ErrorRecord {
  Method method = Method::single;
  int N = 0;
  int Mx = 0;
  int My = 0;
  double c = 0.0;
  int dof = 0;
  double l2_omega = 0.0;
  double l2_q = 0.0;
  double linf_conservation = 0.0;
  double runtime_s = 0.0;

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

/// Solves the manufactured problem described by `spec` and measures it.
ErrorRecord run_case(const ProblemSpec& spec);

struct ExperimentConfig {
  std::vector<Method> methods{Method::dual, Method::single};
  std::vector<int> orders{1, 2, 3};
  /// Elements per side.
  std::vector<int> mesh_levels{2, 4, 8, 16};
  std::vector<double> c_list{0.0, 0.1, 0.2};
  Domain domain = Domain::unit;
  /// 0 picks N + 3.
  int quad_points = 0;
  std::uint64_t seed = 0;
};

void validate(const ExperimentConfig& cfg);

/// Least-squares slope of log(error) against log(h) over the finest three
/// levels whose error is at least `floor`. NaN when fewer than two remain.
double fit_slope(const std::vector<double>& h, const std::vector<double>& error,
                 double floor = 1e-11);

struct SlopeFit {
  Method method;
  int N;
  double c;
  double slope_omega;
  double slope_q;
};

struct HConvergence {
  std::vector<ErrorRecord> records;
  std::vector<SlopeFit> slopes;
};

HConvergence run_h_convergence(const ExperimentConfig& cfg);

struct PConvergence {
  std::vector<ErrorRecord> records;
  /// Projection errors, aligned with records.
  std::vector<ProjectionError> projection;
};

/// Sweeps cfg.orders on every mesh level in cfg.mesh_levels.
PConvergence run_p_convergence(const ExperimentConfig& cfg);

struct MethodDifference {
  /// |*omega_a - *omega_b| on a samples x samples grid over the undeformed
  /// domain, row index along y.
  Eigen::MatrixXd field;
  double linf = 0.0;
};

/// Pointwise difference between two solutions on the same mesh.
MethodDifference solution_difference(const Solution& a, const Solution& b, int samples = 101);

/// Dual-grid against single-grid on the manufactured problem.
MethodDifference method_difference(int order, int elements_x, int elements_y, double c,
                                   Domain domain = Domain::unit, int samples = 101);

/// Shortest round-trip decimal form.
std::string format_double(double v);

inline const char* csv_header() {
  return "method,N,Mx,My,c,dof,l2_omega,l2_q,linf_conservation,runtime_s";
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records);
std::vector<ErrorRecord> parse_csv(std::istream& in);

}  // namespace mimetic
