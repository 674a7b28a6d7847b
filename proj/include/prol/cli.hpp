#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "prol/gpsf.hpp"
#include "prol/io.hpp"
#include "prol/spectral_core.hpp"

namespace prol {

enum class OutputFormat { json, csv };

struct VerifyTolerances {
  double orthonormality = 1e-12;
  /// relative to ||B||_inf
  double eigen_residual = 1e-12;
  double l_identity = 1e-5;
  double integral_residual = 1e-10;
  double dual_path = 1e-9;
  /// dual-path agreement is only required where |gamma| exceeds this
  double dual_path_floor = 1e-12;
  double small_c = 1e-3;
  /// small-c comparison is run when c is at most this
  double small_c_threshold = 1e-2;
};

struct JobSpec {
  int p = 1;
  double c = 20.0 * 3.14159265358979323846;
  std::vector<int> N_list{0};
  int n_max = 10;
  int grid_points = 200;
  OutputFormat format = OutputFormat::json;
  /// empty: standard output
  std::string output_path;
  double trunc_tol = 1e-14;
  /// 0: oracle default
  int quad_size = 0;
  VerifyTolerances tolerances;
  /// Adds 1e-4 to the last coefficient of n = 0 for the first N.
  bool inject_fault = false;

  void validate() const;
};

/// Everything computed for one angular order.
struct OrderSolution {
  ProblemParams params;
  std::size_t K = 0;
  EigenSystem system;
  EigenvalueTable table;
  std::vector<RadialGpsf> gpsfs;
};

/// Solves each N of spec.N_list, in parallel up to PROL_NUM_THREADS; results
/// are in N_list order.
std::vector<OrderSolution> solve_orders(const JobSpec& spec);

int thread_limit();

CoefficientFile eigensystem_file(const JobSpec& spec, const std::vector<OrderSolution>& sols);
enum class EvalKind { radial, weighted };
Table eval_table(const JobSpec& spec, const std::vector<OrderSolution>& sols, EvalKind which);
Table eigen_table(const std::vector<OrderSolution>& sols);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

VerifyReport run_verification(const JobSpec& spec);

/// gamma_{N,0} ~ c^{N+(p+1)/2} / (2^{N+p/2+1} Gamma(N+p/2+2)) as c -> 0.
double small_c_gamma(int p, int N, double c);

void cmd_eigensystem(const JobSpec& spec);
void cmd_eval(const JobSpec& spec, EvalKind which);
void cmd_eigentable(const JobSpec& spec);
/// Prints the report to out; returns 0 iff every check passes.
int cmd_verify(const JobSpec& spec, std::ostream& out);

}  // namespace prol
