// Command line driver for the manufactured-solution experiments.
//
//   mimetic solve --method dual --order 3 --elements 4x4 --c 0.1 --out run.csv
//   mimetic convergence --sweep h --method both --orders 1,2,3
//       --mesh-levels 2,4,8,16 --c-list 0,0.1,0.2 --out h.csv
//   mimetic verify

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimetic/acceptance.hpp"
#include "mimetic/errors.hpp"
#include "mimetic/harness.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_acceptance = 4;

using namespace mimetic;

Domain parse_domain(const std::string& name) {
  if (name == "unit") return Domain::unit;
  if (name == "biunit") return Domain::biunit;
  throw Error(ErrorKind::invalid_input, "unknown domain '" + name + "'");
}

// "4x4", "4x2" or plain "4".
std::pair<int, int> parse_elements(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      const int m = std::stoi(text, &used);
      if (used == text.size()) return {m, m};
    } else {
      const std::string a = text.substr(0, x), b = text.substr(x + 1);
      std::size_t ua = 0, ub = 0;
      const int mx = std::stoi(a, &ua);
      const int my = std::stoi(b, &ub);
      if (ua == a.size() && ub == b.size()) return {mx, my};
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::invalid_input, "elements must look like MxM, got '" + text + "'");
}

void write_records(const std::string& path, const std::vector<ErrorRecord>& records) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::invalid_input, "cannot open '" + path + "' for writing");
  write_csv(out, records);
  require(static_cast<bool>(out), ErrorKind::invalid_input, "failed writing '" + path + "'");
}

void print_record(const ErrorRecord& r) {
  std::printf("%-6s N=%d %dx%d c=%s dof=%d l2_omega=%.6e l2_q=%.6e conservation=%.3e (%.3f s)\n",
              to_string(r.method).c_str(), r.N, r.Mx, r.My, format_double(r.c).c_str(), r.dof,
              r.l2_omega, r.l2_q, r.linf_conservation, r.runtime_s);
}

struct SolveArgs {
  std::string method = "single";
  int order = 2;
  std::string elements = "2x2";
  double c = 0.0;
  std::string domain = "unit";
  std::string out;
  int quad_order = 0;
};

int run_solve(const SolveArgs& a) {
  const auto [mx, my] = parse_elements(a.elements);
  auto spec = manufactured_problem(parse_method(a.method), a.order, mx, my, a.c, parse_domain(a.domain));
  spec.quad_points = a.quad_order;
  validate(spec);
  const auto record = run_case(spec);
  print_record(record);
  write_records(a.out, {record});
  return exit_ok;
}

struct ConvergenceArgs {
  std::string sweep = "h";
  std::string method = "both";
  std::vector<int> orders{1, 2, 3};
  std::vector<int> mesh_levels{2, 4, 8, 16};
  std::vector<double> c_list{0.0, 0.1, 0.2};
  std::string domain = "unit";
  std::string out;
  int quad_order = 0;
};

int run_convergence(const ConvergenceArgs& a) {
  ExperimentConfig cfg;
  if (a.method == "both") cfg.methods = {Method::dual, Method::single};
  else cfg.methods = {parse_method(a.method)};
  cfg.orders = a.orders;
  cfg.mesh_levels = a.mesh_levels;
  cfg.c_list = a.c_list;
  cfg.domain = parse_domain(a.domain);
  cfg.quad_points = a.quad_order;
  validate(cfg);

  std::vector<ErrorRecord> records;
  if (a.sweep == "h") {
    const auto h = run_h_convergence(cfg);
    records = h.records;
    for (const auto& r : records) print_record(r);
    std::printf("slopes over the finest 3 levels (h = 1/elements per side):\n");
    for (const auto& s : h.slopes) {
      std::printf("  %-6s N=%d c=%s omega %.3f q %.3f\n", to_string(s.method).c_str(), s.N,
                  format_double(s.c).c_str(), s.slope_omega, s.slope_q);
    }
  } else if (a.sweep == "p") {
    const auto p = run_p_convergence(cfg);
    records = p.records;
    for (std::size_t k = 0; k < records.size(); ++k) {
      print_record(records[k]);
      std::printf("       projection l2_omega=%.6e l2_q=%.6e\n", p.projection[k].omega,
                  p.projection[k].q);
    }
  } else {
    throw Error(ErrorKind::invalid_input, "sweep must be h or p");
  }
  write_records(a.out, records);
  return exit_ok;
}

int run_verify() {
  const auto results = run_acceptance([](const CriterionResult& r) {
    std::cout << format_result(r) << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? exit_ok : exit_acceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mimetic spectral element Poisson solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve the manufactured problem once");
  solve->add_option("--method", solve_args.method, "dual or single")
      ->check(CLI::IsMember({"dual", "single"}))
      ->required();
  solve->add_option("--order", solve_args.order, "Polynomial order N")->required();
  solve->add_option("--elements", solve_args.elements, "Elements, MxM")->required();
  solve->add_option("--c", solve_args.c, "Deformation coefficient")->required();
  solve->add_option("--domain", solve_args.domain, "unit ([0,1]^2) or biunit ([-1,1]^2)")
      ->check(CLI::IsMember({"unit", "biunit"}))
      ->capture_default_str();
  solve->add_option("--out", solve_args.out, "Output CSV")->required();
  solve->add_option("--quad-order", solve_args.quad_order, "Gauss points per direction (>= N+3)");

  ConvergenceArgs conv_args;
  auto* conv = app.add_subcommand("convergence", "Run an h or p convergence sweep");
  conv->add_option("--sweep", conv_args.sweep, "h or p")
      ->check(CLI::IsMember({"h", "p"}))
      ->required();
  conv->add_option("--method", conv_args.method, "dual, single or both")
      ->check(CLI::IsMember({"dual", "single", "both"}))
      ->capture_default_str();
  conv->add_option("--orders", conv_args.orders, "Comma separated orders")
      ->delimiter(',')
      ->capture_default_str();
  conv->add_option("--mesh-levels", conv_args.mesh_levels, "Comma separated elements per side")
      ->delimiter(',')
      ->capture_default_str();
  conv->add_option("--c-list", conv_args.c_list, "Comma separated deformation coefficients")
      ->delimiter(',')
      ->capture_default_str();
  conv->add_option("--domain", conv_args.domain, "unit or biunit")
      ->check(CLI::IsMember({"unit", "biunit"}))
      ->capture_default_str();
  conv->add_option("--out", conv_args.out, "Output CSV")->required();
  conv->add_option("--quad-order", conv_args.quad_order, "Gauss points per direction (>= N+3)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (*solve) return run_solve(solve_args);
    if (*conv) return run_convergence(conv_args);
    if (*verify) return run_verify();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::solver_failure:
      case ErrorKind::numerical_failure:
      case ErrorKind::singular_map:
        return exit_solver;
      default:
        return exit_config;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_solver;
  }
  return exit_config;
}
