#include "mimetic/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mimetic/errors.hpp"

namespace mimetic {

namespace {

constexpr double pi = std::numbers::pi;

template <class T>
T parse_number(const std::string& field, const char* what) {
  T value{};
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  require(ec == std::errc() && ptr == last, ErrorKind::invalid_input,
          std::string("bad ") + what + " field '" + field + "'");
  return value;
}

}  // namespace

ManufacturedSolution manufactured_solution() {
  ManufacturedSolution m;
  m.phi = [](double x, double y) { return std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  m.phi_x = [](double x, double y) { return 2 * pi * std::cos(2 * pi * x) * std::sin(2 * pi * y); };
  m.phi_y = [](double x, double y) { return 2 * pi * std::sin(2 * pi * x) * std::cos(2 * pi * y); };
  m.source = [](double x, double y) {
    return -8 * pi * pi * std::sin(2 * pi * x) * std::sin(2 * pi * y);
  };
  m.flux_x = [phi_y = m.phi_y](double x, double y) { return -phi_y(x, y); };
  m.flux_y = m.phi_x;
  return m;
}

ProblemSpec manufactured_problem(Method method, int order, int elements_x, int elements_y,
                                 double c, Domain domain) {
  const auto m = manufactured_solution();
  ProblemSpec spec;
  spec.method = method;
  spec.order = order;
  spec.elements_x = elements_x;
  spec.elements_y = elements_y;
  spec.deformation = c;
  spec.domain = domain;
  spec.source = m.source;
  spec.dirichlet = m.phi;
  spec.flux = std::array<ScalarField, 2>{m.flux_x, m.flux_y};
  return spec;
}

namespace {

template <class Integrand>
double integrate_mesh(const SpectralMesh& mesh, int quad_points, Integrand&& integrand) {
  const auto rule = gauss_legendre(quad_points);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int b = 0; b < rule.size(); ++b)
      for (int a = 0; a < rule.size(); ++a)
        sum += rule.weights[a] * rule.weights[b] * integrand(e, rule.nodes[a], rule.nodes[b]);
  }
  return sum;
}

double omega_error_sq(const DiscreteForm& w, const CurvilinearMap& map, const ScalarField& phi,
                      double xi, double eta) {
  const double det = map.det_jacobian(xi, eta);
  const auto x = map(xi, eta);
  const double d = w.evaluate(xi, eta)[0] / det - phi(x[0], x[1]);
  return d * d * det;
}

double q_error_sq(const DiscreteForm& q, const CurvilinearMap& map, const ScalarField& qx,
                  const ScalarField& qy, double xi, double eta) {
  const auto g = metric_point(map, xi, eta);
  const auto x = map(xi, eta);
  const auto u = q.evaluate(xi, eta);
  const Eigen::Vector2d exact = g.jacobian.transpose() * Eigen::Vector2d(qx(x[0], x[1]), qy(x[0], x[1]));
  const Eigen::Vector2d d = Eigen::Vector2d(u[0], u[1]) - exact;
  return d.dot(g.inverse_metric * d) * g.det;
}

}  // namespace

double l2_error_omega(const Solution& sol, const ScalarField& phi, int quad_points) {
  const auto& mesh = sol.mesh();
  std::vector<DiscreteForm> forms;
  for (int e = 0; e < mesh.num_elements(); ++e) forms.push_back(sol.element_omega(e));
  return std::sqrt(integrate_mesh(mesh, quad_points, [&](int e, double xi, double eta) {
    return omega_error_sq(forms[e], mesh.map(e), phi, xi, eta);
  }));
}

double l2_error_q(const Solution& sol, const ScalarField& qx, const ScalarField& qy,
                  int quad_points) {
  const auto& mesh = sol.mesh();
  std::vector<DiscreteForm> forms;
  for (int e = 0; e < mesh.num_elements(); ++e) forms.push_back(sol.element_q(e));
  return std::sqrt(integrate_mesh(mesh, quad_points, [&](int e, double xi, double eta) {
    return q_error_sq(forms[e], mesh.map(e), qx, qy, xi, eta);
  }));
}

ProjectionError projection_error(const SpectralMesh& mesh, const ManufacturedSolution& exact,
                                 int reduce_points, int error_points) {
  std::vector<DiscreteForm> w, q;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& map = mesh.map(e);
    w.push_back(project(pullback(FormField::two_form(exact.phi), map), mesh.family(), reduce_points));
    q.push_back(project(pullback(FormField::one_form(exact.flux_x, exact.flux_y), map),
                        mesh.family(), reduce_points));
  }
  ProjectionError out;
  out.omega = std::sqrt(integrate_mesh(mesh, error_points, [&](int e, double xi, double eta) {
    return omega_error_sq(w[e], mesh.map(e), exact.phi, xi, eta);
  }));
  out.q = std::sqrt(integrate_mesh(mesh, error_points, [&](int e, double xi, double eta) {
    return q_error_sq(q[e], mesh.map(e), exact.flux_x, exact.flux_y, xi, eta);
  }));
  return out;
}

ErrorRecord run_case(const ProblemSpec& spec) {
  const auto exact = manufactured_solution();
  const auto start = std::chrono::steady_clock::now();
  const Solution sol = solve(spec);
  const auto stop = std::chrono::steady_clock::now();
  const int ep = default_error_points(spec.order);

  ErrorRecord r;
  r.method = spec.method;
  r.N = spec.order;
  r.Mx = spec.elements_x;
  r.My = spec.elements_y;
  r.c = spec.deformation;
  r.dof = sol.dof();
  r.l2_omega = l2_error_omega(sol, exact.phi, ep);
  r.l2_q = l2_error_q(sol, exact.flux_x, exact.flux_y, ep);
  r.linf_conservation = conservation_residual(sol, sol.source());
  r.runtime_s = std::chrono::duration<double>(stop - start).count();
  return r;
}

void validate(const ExperimentConfig& cfg) {
  require(!cfg.methods.empty() && !cfg.orders.empty() && !cfg.mesh_levels.empty() &&
              !cfg.c_list.empty(),
          ErrorKind::invalid_input, "experiment ranges must be nonempty");
  for (int n : cfg.orders) require(n >= 1, ErrorKind::invalid_order, "order must be at least 1");
  for (int m : cfg.mesh_levels)
    require(m >= 1, ErrorKind::invalid_input, "mesh level must be at least 1 element per side");
  for (double c : cfg.c_list)
    require(std::abs(c) < 1.0 / pi, ErrorKind::invalid_deformation,
            "deformation coefficient must satisfy |c| < 1/pi");
  for (int n : cfg.orders)
    require(cfg.quad_points == 0 || cfg.quad_points >= n + 3, ErrorKind::invalid_input,
            "quadrature needs at least N + 3 points");
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& error, double floor) {
  require(h.size() == error.size(), ErrorKind::invalid_input, "h and error lengths differ");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (error[k] >= floor) pts.emplace_back(h[k], error[k]);
  std::sort(pts.begin(), pts.end());
  if (pts.size() > 3) pts.resize(3);
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HConvergence run_h_convergence(const ExperimentConfig& cfg) {
  validate(cfg);
  require(cfg.mesh_levels.size() >= 3, ErrorKind::invalid_input, "need at least 3 mesh levels");
  HConvergence out;
  for (double c : cfg.c_list) {
    for (int n : cfg.orders) {
      for (Method method : cfg.methods) {
        std::vector<double> h, ew, eq;
        for (int m : cfg.mesh_levels) {
          auto spec = manufactured_problem(method, n, m, m, c, cfg.domain);
          spec.quad_points = cfg.quad_points;
          const auto r = run_case(spec);
          out.records.push_back(r);
          h.push_back(1.0 / m);
          ew.push_back(r.l2_omega);
          eq.push_back(r.l2_q);
        }
        out.slopes.push_back({method, n, c, fit_slope(h, ew), fit_slope(h, eq)});
      }
    }
  }
  return out;
}

PConvergence run_p_convergence(const ExperimentConfig& cfg) {
  validate(cfg);
  PConvergence out;
  const auto exact = manufactured_solution();
  for (double c : cfg.c_list) {
    for (int m : cfg.mesh_levels) {
      for (int n : cfg.orders) {
        const SpectralMesh mesh(n, m, m, c, cfg.domain);
        const int qp = cfg.quad_points > 0 ? cfg.quad_points : default_quad_points(n);
        const auto proj = projection_error(mesh, exact, qp, default_error_points(n));
        for (Method method : cfg.methods) {
          auto spec = manufactured_problem(method, n, m, m, c, cfg.domain);
          spec.quad_points = cfg.quad_points;
          out.records.push_back(run_case(spec));
          out.projection.push_back(proj);
        }
      }
    }
  }
  return out;
}

MethodDifference solution_difference(const Solution& a, const Solution& b, int samples) {
  const auto& mesh = a.mesh();
  require(mesh.order() == b.mesh().order() && mesh.elements_x() == b.mesh().elements_x() &&
              mesh.elements_y() == b.mesh().elements_y() &&
              mesh.deformation() == b.mesh().deformation() && mesh.domain() == b.mesh().domain(),
          ErrorKind::invalid_input, "solutions live on different meshes");
  require(samples >= 2, ErrorKind::invalid_input, "need at least 2 samples per direction");
  std::vector<DiscreteForm> wa, wb;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    wa.push_back(a.element_omega(e));
    wb.push_back(b.element_omega(e));
  }
  MethodDifference out;
  out.field.resize(samples, samples);
  const int mx = mesh.elements_x();
  const int my = mesh.elements_y();
  for (int r = 0; r < samples; ++r) {
    const double t = static_cast<double>(r) / (samples - 1);
    const int ey = std::min(static_cast<int>(t * my), my - 1);
    const double eta = std::clamp(2.0 * (t * my - ey) - 1.0, -1.0, 1.0);
    for (int s = 0; s < samples; ++s) {
      const double u = static_cast<double>(s) / (samples - 1);
      const int ex = std::min(static_cast<int>(u * mx), mx - 1);
      const double xi = std::clamp(2.0 * (u * mx - ex) - 1.0, -1.0, 1.0);
      const int e = mesh.element(ex, ey);
      const double det = mesh.map(e).det_jacobian(xi, eta);
      out.field(r, s) = std::abs(wa[e].evaluate(xi, eta)[0] - wb[e].evaluate(xi, eta)[0]) / det;
    }
  }
  out.linf = out.field.maxCoeff();
  return out;
}

MethodDifference method_difference(int order, int elements_x, int elements_y, double c,
                                   Domain domain, int samples) {
  const auto dual = solve(manufactured_problem(Method::dual, order, elements_x, elements_y, c, domain));
  const auto single =
      solve(manufactured_problem(Method::single, order, elements_x, elements_y, c, domain));
  return solution_difference(dual, single, samples);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << r.N << ',' << r.Mx << ',' << r.My << ','
        << format_double(r.c) << ',' << r.dof << ',' << format_double(r.l2_omega) << ','
        << format_double(r.l2_q) << ',' << format_double(r.linf_conservation) << ','
        << format_double(r.runtime_s) << '\n';
  }
}

std::vector<ErrorRecord> parse_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::invalid_input, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == csv_header(), ErrorKind::invalid_input, "unexpected CSV header");
  std::vector<ErrorRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    require(f.size() == 10, ErrorKind::invalid_input, "CSV row needs 10 fields");
    ErrorRecord r;
    r.method = parse_method(f[0]);
    r.N = parse_number<int>(f[1], "N");
    r.Mx = parse_number<int>(f[2], "Mx");
    r.My = parse_number<int>(f[3], "My");
    r.c = parse_number<double>(f[4], "c");
    r.dof = parse_number<int>(f[5], "dof");
    r.l2_omega = parse_number<double>(f[6], "l2_omega");
    r.l2_q = parse_number<double>(f[7], "l2_q");
    r.linf_conservation = parse_number<double>(f[8], "linf_conservation");
    r.runtime_s = parse_number<double>(f[9], "runtime_s");
    out.push_back(r);
  }
  return out;
}

}  // namespace mimetic
