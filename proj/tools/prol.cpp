// prol: generalized prolate spheroidal functions on the unit ball.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "prol/cli.hpp"
#include "prol/errors.hpp"
#include "prol/io.hpp"

namespace {

struct SharedFlags {
  int dim = 3;
  int p = -1;
  std::string c = "20pi";
  std::vector<int> N;
  int n_max = 10;
  int grid = 200;
  std::string format = "json";
  std::string out;
  int quad_size = 0;
  double trunc_tol = 1e-14;
  bool inject_fault = false;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("-D,--dim", f.dim, "ambient dimension D >= 2")->capture_default_str();
  cmd->add_option("--p", f.p, "p = D - 2 (overrides --dim)");
  cmd->add_option("--c", f.c, "bandlimit, decimal or <number>pi")->capture_default_str();
  cmd->add_option("--N", f.N, "angular order, repeatable");
  cmd->add_option("--n-max", f.n_max, "largest radial index")->capture_default_str();
  cmd->add_option("--grid", f.grid, "sample points on [0,1] for eval")->capture_default_str();
  cmd->add_option("--format", f.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--quad-size", f.quad_size, "quadrature nodes for oracle checks (0: default)");
  cmd->add_option("--trunc-tol", f.trunc_tol, "tail tolerance for the truncation")->capture_default_str();
  cmd->add_flag("--inject-fault", f.inject_fault)->group("");
}

prol::JobSpec to_spec(const SharedFlags& f, std::vector<int> default_N) {
  prol::JobSpec s;
  if (f.p >= 0) {
    s.p = f.p;
  } else {
    if (f.dim < 2) throw prol::ParameterError("--dim must be at least 2");
    s.p = f.dim - 2;
  }
  s.c = prol::parse_bandlimit(f.c);
  s.N_list = f.N.empty() ? std::move(default_N) : f.N;
  s.n_max = f.n_max;
  s.grid_points = f.grid;
  s.format = f.format == "csv" ? prol::OutputFormat::csv : prol::OutputFormat::json;
  s.output_path = f.out;
  s.quad_size = f.quad_size;
  s.trunc_tol = f.trunc_tol;
  s.inject_fault = f.inject_fault;
  s.validate();
  return s;
}

int exit_code(const prol::Error& e) {
  if (dynamic_cast<const prol::ParameterError*>(&e) || dynamic_cast<const prol::DomainError*>(&e)) return 2;
  if (dynamic_cast<const prol::IoError*>(&e)) return 3;
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized prolate spheroidal functions: eigensystems, samples, eigenvalue tables, checks"};
  app.set_version_flag("--version", PROL_VERSION);
  app.require_subcommand(1);

  SharedFlags f_sys, f_eval, f_table, f_verify;
  auto* sys = app.add_subcommand("eigensystem", "coefficient vectors and eigenvalues per (N, n)");
  add_shared(sys, f_sys);
  auto* eval = app.add_subcommand("eval", "radial functions sampled on a uniform grid");
  add_shared(eval, f_eval);
  std::string which = "radial";
  eval->add_option("--which", which, "radial (Phi) or weighted (phi)")
      ->check(CLI::IsMember({"radial", "weighted"}))
      ->capture_default_str();
  auto* table = app.add_subcommand("eigentable", "eigenvalue decay table");
  add_shared(table, f_table);
  auto* verify = app.add_subcommand("verify", "run the numerical checks; exit 0 iff all pass");
  add_shared(verify, f_verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sys->parsed()) {
      prol::cmd_eigensystem(to_spec(f_sys, {0}));
    } else if (eval->parsed()) {
      prol::cmd_eval(to_spec(f_eval, {0}), which == "weighted" ? prol::EvalKind::weighted : prol::EvalKind::radial);
    } else if (table->parsed()) {
      prol::cmd_eigentable(to_spec(f_table, {0}));
    } else if (verify->parsed()) {
      return prol::cmd_verify(to_spec(f_verify, {0, 1}), std::cout);
    }
  } catch (const prol::Error& e) {
    std::cerr << "prol: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}
