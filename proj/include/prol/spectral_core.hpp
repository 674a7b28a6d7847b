#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace prol {

/// One radial eigenproblem: p = D - 2, bandlimit c, angular order N.
struct ProblemParams {
  int p = 1;
  double c = 1.0;
  int N = 0;

  void validate() const;
  /// Bessel order N + p/2 of the radial kernel.
  double order() const { return N + 0.5 * p; }
  int dimension() const { return p + 2; }
};

/// Symmetric tridiagonal matrix B_N^{p,c} truncated to K x K.
struct TridiagonalOperator {
  ProblemParams params;
  std::vector<double> diag;     // B(n,n), n = 0..K-1
  std::vector<double> offdiag;  // B(n,n+1) = B(n+1,n), n = 0..K-2

  std::size_t size() const { return diag.size(); }
  double inf_norm() const;
  /// y = B x
  std::vector<double> apply(const std::vector<double>& x) const;
};

/// The n_keep eigenpairs of smallest |chi|; vectors[n] is h^{p,c,N,n}.
struct EigenSystem {
  TridiagonalOperator op;
  std::vector<double> chi;
  std::vector<std::vector<double>> vectors;
  /// Non-fatal findings (near-degenerate eigenvalues, sign fallbacks).
  std::vector<std::string> diagnostics;

  std::size_t size() const { return chi.size(); }
  std::size_t truncation() const { return op.size(); }
};

/// (2n+N+p/2+1/2)(2n+N+p/2+3/2)
double kappa(int p, int N, int n);

TridiagonalOperator build_operator(const ProblemParams& params, std::size_t K);

/// Bisection on Sturm counts, inverse iteration, then one more inverse-power
/// step shifted by the Rayleigh quotient. Signs are fixed so that h_0 > 0 for
/// even n and h_0 < 0 for odd n.
EigenSystem eigendecompose(const TridiagonalOperator& op, std::size_t n_keep);

/// Starting size max(2 n_max + 32, ceil(c) + n_max + 32).
std::size_t initial_truncation(const ProblemParams& params, int n_max);

/// True when the last two coefficients of every retained vector are at most
/// tol * ||h||.
bool tail_is_small(const EigenSystem& system, double tol);

struct TruncatedSystem {
  std::size_t K = 0;
  EigenSystem system;
};

/// Doubles K from the initial guess until the tail test passes (at most six
/// doublings), returning the accepted size and its eigensystem.
TruncatedSystem solve_truncated(const ProblemParams& params, int n_max, double tol);

std::size_t choose_truncation(const ProblemParams& params, int n_max, double tol);

}  // namespace prol
