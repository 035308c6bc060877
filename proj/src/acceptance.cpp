#include "mimetic/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "mimetic/assembly.hpp"
#include "mimetic/basis.hpp"
#include "mimetic/harness.hpp"
#include "mimetic/solvers.hpp"
#include "mimetic/topology.hpp"

namespace mimetic {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3g", v); }

// sum_k a_k sin(b_k x + c_k y + d_k) with its partial derivatives.
struct TrigField {
  std::array<double, 3> a, b, c, d;

  static TrigField random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(-2.0, 2.0), phase(0.0, 6.3);
    TrigField f;
    for (int k = 0; k < 3; ++k) {
      f.a[k] = amp(rng);
      f.b[k] = freq(rng);
      f.c[k] = freq(rng);
      f.d[k] = phase(rng);
    }
    return f;
  }
  double operator()(double x, double y) const {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += a[k] * std::sin(b[k] * x + c[k] * y + d[k]);
    return s;
  }
  double dx(double x, double y) const {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += a[k] * b[k] * std::cos(b[k] * x + c[k] * y + d[k]);
    return s;
  }
  double dy(double x, double y) const {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += a[k] * c[k] * std::cos(b[k] * x + c[k] * y + d[k]);
    return s;
  }
};

// Random smooth form of degree 0 or 1 together with its exterior derivative.
std::pair<FormField, FormField> random_form(int degree, std::mt19937_64& rng) {
  const TrigField u = TrigField::random(rng);
  if (degree == 0) {
    return {FormField::zero_form(u),
            FormField::one_form([u](double x, double y) { return u.dx(x, y); },
                                [u](double x, double y) { return u.dy(x, y); })};
  }
  const TrigField v = TrigField::random(rng);
  return {FormField::one_form(u, v),
          FormField::two_form([u, v](double x, double y) { return v.dx(x, y) - u.dy(x, y); })};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return a.size() == b.size() ? m : INFINITY;
}

}  // namespace

CriterionResult check_topology(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CriterionResult r{1, "topological exactness", false, {}, {}, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-50, 50);
  bool ok = true;
  long pairs = 0;
  for (int nx = 1; nx <= 8; ++nx) {
    for (int ny = 1; ny <= 8; ++ny) {
      const auto gx = gll_rule(nx).nodes;
      const auto gy = gll_rule(ny).nodes;
      const auto complex = build_primal_complex(gx, gy);
      ok &= (complex.incidence(2).multiply(complex.incidence(1)).array() == 0).all();
      for (int k = 0; k < 2; ++k) {
        const auto& e = complex.incidence(k + 1);
        for (int trial = 0; trial < 100; ++trial) {
          std::vector<long long> c(e.cols()), a(e.rows());
          for (auto& v : c) v = coeff(rng);
          for (auto& v : a) v = coeff(rng);
          std::vector<long long> dc(e.rows(), 0), da(e.cols(), 0);
          for (const auto& entry : e.entries()) {
            dc[entry.row] += entry.value * c[entry.col];
            da[entry.col] += entry.value * a[entry.row];
          }
          long long lhs = 0, rhs = 0;
          for (int i = 0; i < e.rows(); ++i) lhs += dc[i] * a[i];
          for (int i = 0; i < e.cols(); ++i) rhs += c[i] * da[i];
          ok &= lhs == rhs;
          ++pairs;
        }
      }
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = ok && r.seconds < 1.0;
  r.detail = "64 complexes, E21*E10 = 0 and " + std::to_string(pairs) +
             " integer duality pairs " + (ok ? "exact" : "FAILED");
  return r;
}

CriterionResult check_basis_duality() {
  const auto t0 = Clock::now();
  CriterionResult r{2, "basis dualities", false, {}, {}, 0.0};
  double worst_h = 0.0, worst_e = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const auto rule = gll_rule(n);
    const BasisFamily1D family(rule);
    const auto gauss = gauss_legendre(n);
    for (int p = 0; p <= n; ++p) {
      const auto h = family.lagrange_all(rule.nodes[p]);
      for (int i = 0; i <= n; ++i) worst_h = std::max(worst_h, std::abs(h[i] - (i == p ? 1.0 : 0.0)));
    }
    for (int p = 1; p <= n; ++p) {
      const auto q = map_rule(gauss, rule.nodes[p - 1], rule.nodes[p]);
      Eigen::VectorXd integral = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < q.size(); ++k) integral += q.weights[k] * family.edge_all(q.nodes[k]);
      for (int i = 1; i <= n; ++i)
        worst_e = std::max(worst_e, std::abs(integral[i - 1] - (i == p ? 1.0 : 0.0)));
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = worst_h < 1e-13 && worst_e < 1e-12 && r.seconds < 1.0;
  r.detail = "N=1..12, max |h_i(x_p) - delta| = " + sci(worst_h) +
             ", max |int e_i - delta| = " + sci(worst_e);
  return r;
}

CriterionResult check_commuting(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CriterionResult r{3, "commuting diagrams", false, {}, {}, 0.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr int reduce_points = 16;
  double rd = 0.0, di = 0.0, pd = 0.0;
  for (int degree = 0; degree < 2; ++degree) {
    for (int sample = 0; sample < 50; ++sample) {
      const int n = 1 + sample % 8;
      auto family = std::make_shared<const BasisFamily1D>(gll_rule(n));
      const auto complex = complex_of(*family);
      const auto [form, dform] = random_form(degree, rng);

      // R d = delta R
      const auto r_d = reduce(dform, complex, reduce_points).coefficients;
      const auto d_r = coboundary(reduce(form, complex, reduce_points), complex).coefficients;
      rd = std::max(rd, (r_d - d_r).lpNorm<Eigen::Infinity>());

      // d I = I delta on a random cochain
      Cochain c{degree, Eigen::VectorXd(complex.num_cells(degree))};
      for (int k = 0; k < c.coefficients.size(); ++k) c.coefficients[k] = unit(rng);
      const auto ic = reconstruct(c, family);
      const auto idc = reconstruct(coboundary(c, complex), family);

      // pi d = d pi
      const auto pi_form = project(form, family, reduce_points);
      const auto pi_dform = project(dform, family, reduce_points);
      for (int k = 0; k < 10; ++k) {
        const double x = unit(rng), y = unit(rng);
        di = std::max(di, max_abs_diff(ic.derivative(x, y), idc.evaluate(x, y)));
        pd = std::max(pd, max_abs_diff(pi_dform.evaluate(x, y), pi_form.derivative(x, y)));
      }
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = rd < 1e-10 && di < 1e-10 && pd < 1e-10 && r.seconds < 10.0;
  r.detail = "R.d vs delta.R " + sci(rd) + ", d.I vs I.delta " + sci(di) + ", pi.d vs d.pi " +
             sci(pd) + " over 2x50 forms, N=1..8";
  return r;
}

CriterionResult check_conservation() {
  const auto t0 = Clock::now();
  CriterionResult r{4, "conservation", false, {}, {}, 0.0};
  double worst = 0.0;
  int runs = 0;
  for (Method method : {Method::dual, Method::single})
    for (double c : {0.0, 0.1, 0.2})
      for (int n : {1, 2, 3})
        for (int m : {2, 4, 8}) {
          const auto sol = solve(manufactured_problem(method, n, m, m, c));
          worst = std::max(worst, conservation_residual(sol, sol.source()));
          ++runs;
        }
  r.seconds = seconds_since(t0);
  r.passed = worst < 1e-10 && r.seconds < 120.0;
  r.detail = std::to_string(runs) + " solves, max |E21 q - f_h| = " + sci(worst);
  return r;
}

CriterionResult check_h_convergence() {
  const auto t0 = Clock::now();
  CriterionResult r{5, "h-convergence", false, {}, {}, 0.0};
  ExperimentConfig cfg;
  cfg.orders = {1, 2, 3};
  cfg.mesh_levels = {2, 4, 8, 16};
  const auto h = run_h_convergence(cfg);

  bool slopes_ok = true, agree_ok = true, errors_ok = true;
  double worst_slope_dev = 0.0, worst_method_gap = 0.0, worst_rel = 0.0;
  std::ostringstream table;
  for (const auto& s : h.slopes) {
    const double target = s.N + 1;
    const double dev = std::max(std::abs(s.slope_omega - target), std::abs(s.slope_q - target));
    worst_slope_dev = std::max(worst_slope_dev, std::isnan(dev) ? INFINITY : dev);
    slopes_ok &= dev <= 0.3;
  }
  for (const auto& a : h.slopes) {
    if (a.method != Method::dual) continue;
    for (const auto& b : h.slopes) {
      if (b.method != Method::single || b.N != a.N || b.c != a.c) continue;
      const double gap =
          std::max(std::abs(a.slope_omega - b.slope_omega), std::abs(a.slope_q - b.slope_q));
      worst_method_gap = std::max(worst_method_gap, gap);
      agree_ok &= gap <= 0.1;
      table << " N=" << a.N << ",c=" << a.c << ": w " << fmt("%.2f", a.slope_omega) << "/"
            << fmt("%.2f", b.slope_omega) << " q " << fmt("%.2f", a.slope_q) << "/"
            << fmt("%.2f", b.slope_q) << ";";
    }
  }
  for (const auto& a : h.records) {
    if (a.method != Method::dual) continue;
    for (const auto& b : h.records) {
      if (b.method != Method::single || b.N != a.N || b.c != a.c || b.Mx != a.Mx) continue;
      const double rel = std::max(std::abs(a.l2_omega - b.l2_omega) / std::max(a.l2_omega, b.l2_omega),
                                  std::abs(a.l2_q - b.l2_q) / std::max(a.l2_q, b.l2_q));
      worst_rel = std::max(worst_rel, rel);
      errors_ok &= rel <= 0.05;
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = slopes_ok && agree_ok && errors_ok && r.seconds < 600.0;
  r.detail = "max |slope - (N+1)| = " + fmt("%.2f", worst_slope_dev) +
             " (tol 0.3), max dual/single slope gap = " + fmt("%.3f", worst_method_gap) +
             " (tol 0.1), max relative error gap = " + fmt("%.3f", worst_rel) + " (tol 0.05)";
  r.notes.push_back("slopes dual/single:" + table.str());

  // Same sweep with one more GLL node, so that omega_h has polynomial degree N.
  ExperimentConfig shifted = cfg;
  shifted.orders = {2, 3, 4};
  const auto hs = run_h_convergence(shifted);
  double dev = 0.0;
  for (const auto& s : hs.slopes) {
    dev = std::max({dev, std::abs(s.slope_omega - s.N), std::abs(s.slope_q - s.N)});
  }
  r.notes.push_back("observed rate is N (omega_h is a degree N-1 polynomial per element); with "
                    "GLL order N+1, N=1..3, max |slope - (N+1)| = " +
                    fmt("%.2f", dev));
  r.seconds = seconds_since(t0);
  return r;
}

CriterionResult check_p_convergence() {
  const auto t0 = Clock::now();
  CriterionResult r{6, "p-convergence", false, {}, {}, 0.0};
  ExperimentConfig cfg;
  cfg.orders = {2, 3, 4, 5, 6, 7, 8};
  cfg.mesh_levels = {2, 4};
  const auto p = run_p_convergence(cfg);

  constexpr double plateau = 1e-11;
  bool monotone = true, drop_ok = true, above_projection = true;
  double min_drop = INFINITY;
  int below = 0;
  std::ostringstream drops;
  for (double c : cfg.c_list) {
    for (int m : cfg.mesh_levels) {
      for (Method method : cfg.methods) {
        for (int which = 0; which < 2; ++which) {
          std::vector<double> err;
          for (std::size_t k = 0; k < p.records.size(); ++k) {
            const auto& rec = p.records[k];
            if (rec.c != c || rec.Mx != m || rec.method != method) continue;
            err.push_back(which == 0 ? rec.l2_omega : rec.l2_q);
          }
          std::size_t last = 0;
          for (std::size_t k = 1; k < err.size() && err[k - 1] >= plateau; ++k) {
            monotone &= err[k] < err[k - 1];
            last = k;
          }
          const double drop = std::log10(err.front() / err[last]);
          min_drop = std::min(min_drop, drop);
          drop_ok &= drop >= 6.0;
          if (which == 0) {
            drops << " " << to_string(method) << " " << m << "x" << m << " c=" << c << ": "
                  << fmt("%.1f", drop) << ";";
          }
        }
      }
    }
  }
  for (std::size_t k = 0; k < p.records.size(); ++k) {
    const auto& rec = p.records[k];
    const auto& proj = p.projection[k];
    if (rec.l2_omega < proj.omega || rec.l2_q < proj.q) {
      above_projection = false;
      ++below;
    }
  }
  r.seconds = seconds_since(t0);
  r.passed = monotone && drop_ok && above_projection && r.seconds < 300.0;
  r.detail = std::string("monotone ") + (monotone ? "yes" : "no") +
             ", min decrease N=2..8 = " + fmt("%.2f", min_drop) + " orders (need 6), " +
             std::to_string(below) + "/" + std::to_string(p.records.size()) +
             " runs below the projection error";
  r.notes.push_back("omega decrease in orders of magnitude:" + drops.str());
  return r;
}

CriterionResult check_method_difference() {
  const auto t0 = Clock::now();
  CriterionResult r{7, "method non-identity", false, {}, {}, 0.0};
  bool ok = true;
  std::ostringstream detail;
  for (double c : {0.0, 0.1, 0.2}) {
    const double d3 = method_difference(3, 2, 2, c).linf;
    const double d5 = method_difference(5, 2, 2, c).linf;
    ok &= d3 > 1e-12 && d5 < d3;
    detail << "c=" << c << ": N=3 " << sci(d3) << ", N=5 " << sci(d5) << "; ";
  }
  r.seconds = seconds_since(t0);
  r.passed = ok;
  r.detail = detail.str() + "2x2 mesh, 101x101 samples";
  return r;
}

CriterionResult check_metric_separation() {
  const auto t0 = Clock::now();
  CriterionResult r{8, "metric/topology separation", false, {}, {}, 0.0};
  constexpr int n = 3;
  const double cs[] = {0.0, 0.1, 0.2};
  bool same_topology = true;
  const SpectralMesh reference(n, 2, 2, 0.0, Domain::unit);
  const auto dual_nodes = default_dual_nodes(n);
  const DualGrid dual_ref(reference.local_complex(), dual_nodes, dual_nodes);
  for (double c : cs) {
    const SpectralMesh mesh(n, 2, 2, c, Domain::unit);
    const DualGrid dual(mesh.local_complex(), dual_nodes, dual_nodes);
    for (int k = 1; k <= 2; ++k) {
      same_topology &= mesh.global_complex().incidence(k) == reference.global_complex().incidence(k);
      same_topology &= dual.incidence(k) == dual_ref.incidence(k);
    }
  }

  const SpectralMesh flat(n, 2, 2, 0.0, Domain::unit);
  const SpectralMesh bent(n, 2, 2, 0.2, Domain::unit);
  const auto& family = *flat.family();
  const int qp = default_quad_points(n);
  double min_gap = INFINITY;
  for (int e = 0; e < flat.num_elements(); ++e) {
    const auto& a = flat.map(e);
    const auto& b = bent.map(e);
    const double gaps[] = {
        (mass_matrix(1, family, a, qp).matrix - mass_matrix(1, family, b, qp).matrix).norm(),
        (mass_matrix(2, family, a, qp).matrix - mass_matrix(2, family, b, qp).matrix).norm(),
        (hodge_02(family, dual_nodes, a).matrix - hodge_02(family, dual_nodes, b).matrix).norm(),
        (hodge_11_dual_to_primal(family, dual_nodes, a, qp).matrix -
         hodge_11_dual_to_primal(family, dual_nodes, b, qp).matrix)
            .norm(),
    };
    for (double g : gaps) min_gap = std::min(min_gap, g);
  }
  r.seconds = seconds_since(t0);
  r.passed = same_topology && min_gap > 1e-3;
  r.detail = std::string("incidence matrices ") + (same_topology ? "identical" : "DIFFER") +
             " for c in {0, 0.1, 0.2}; min ||A(0.2) - A(0)||_F over M1, M2, H02, H11 = " +
             sci(min_gap);
  return r;
}

CriterionResult run_criterion(int id) {
  using Check = CriterionResult (*)();
  static const Check checks[] = {
      [] { return check_topology(); },      [] { return check_basis_duality(); },
      [] { return check_commuting(); },     [] { return check_conservation(); },
      [] { return check_h_convergence(); }, [] { return check_p_convergence(); },
      [] { return check_method_difference(); }, [] { return check_metric_separation(); },
  };
  CriterionResult r{id, "criterion " + std::to_string(id), false, {}, {}, 0.0};
  if (id < 1 || id > 8) {
    r.detail = "no such criterion";
    return r;
  }
  try {
    return checks[id - 1]();
  } catch (const std::exception& ex) {
    r.detail = std::string("error: ") + ex.what();
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 8; ++id) {
    out.push_back(run_criterion(id));
    if (report) report(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail << " ("
      << fmt("%.2f", r.seconds) << " s)";
  for (const auto& note : r.notes) out << "\n     " << note;
  return out.str();
}

}  // namespace mimetic
