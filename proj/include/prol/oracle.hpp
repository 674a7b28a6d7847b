#pragma once

#include <functional>
#include <span>
#include <vector>

#include "prol/extended_real.hpp"
#include "prol/gpsf.hpp"
#include "prol/spectral_core.hpp"

namespace prol {

struct OracleConfig {
  int quadrature_size = 0;
  double fd_step = 1e-6;
  /// Abscissae in (0,1) at which operator equations are compared.
  std::vector<double> grid;

  /// 60 + ceil(1.5 c) nodes, step 1e-6, 50 cell-centred grid points.
  static OracleConfig defaults(const ProblemParams& params);
  void validate() const;
};

/// (M f)(y) = ∫_0^1 J_{N+p/2}(c y r) sqrt(c y r) f(r) dr by Gauss-Legendre.
double apply_M(const ProblemParams& params, const std::function<double(double)>& f, double y,
               const OracleConfig& config);

/// Quadrature form of M on a fixed grid, in extended precision.
///
/// The weighted radial function is summed term by term from its
/// coefficients (upward Jacobi recurrence), so nothing here shares the
/// Clenshaw or eigenvalue-chain code paths.
class IntegralOperatorOracle {
 public:
  IntegralOperatorOracle(const ProblemParams& params, OracleConfig config);

  const ProblemParams& params() const { return params_; }
  const OracleConfig& config() const { return config_; }

  /// φ = sum_k h_k T_{N,k}^p at arbitrary points.
  std::vector<ExtendedReal> weighted_values(std::span<const ExtendedReal> h, std::span<const ExtendedReal> xs) const;
  std::vector<ExtendedReal> weighted_values(const ZernikeExpansion& h, std::span<const ExtendedReal> xs) const;
  std::vector<ExtendedReal> phi_on_grid(const ZernikeExpansion& h) const;
  std::vector<ExtendedReal> apply_on_grid(const ZernikeExpansion& h) const;

  /// Inverse iteration in extended precision on B (same size as h), started
  /// from h and shifted by chi. Removes the double rounding in h, which
  /// otherwise dominates (Mφ)(y) once |gamma| is far below |gamma_0|.
  std::vector<ExtendedReal> refine(const ZernikeExpansion& h, double chi) const;

  /// (Mφ)(y*) / φ(y*) at the grid points of largest |φ|, best first.
  std::vector<double> gamma_probes(std::span<const ExtendedReal> h, std::size_t count) const;
  std::vector<double> gamma_probes(const ZernikeExpansion& h, std::size_t count) const;
  double gamma(const ZernikeExpansion& h) const;
  /// gamma of the refined eigenvector.
  double gamma(const ZernikeExpansion& h, double chi) const;

  /// max over the grid of |(Mφ)(y) - gamma φ(y)|.
  double residual(const ZernikeExpansion& h, double gamma) const;

 private:
  ProblemParams params_;
  OracleConfig config_;
  std::vector<ExtendedReal> nodes_;
  std::vector<ExtendedReal> grid_;
  std::vector<ExtendedReal> weighted_kernel_;  // grid-major: w_j J(c y_i r_j) sqrt(c y_i r_j)

  std::vector<ExtendedReal> apply_on_grid(std::span<const ExtendedReal> h) const;
};

/// Oracle gamma of g, computed from its refined eigenvector.
double gamma_by_quadrature(const ProblemParams& params, const RadialGpsf& g, const OracleConfig& config);

/// Max |L T_{N,n} - (B(n,n-1) T_{n-1} + B(n,n) T_n + B(n,n+1) T_{n+1})| over
/// the samples, with L applied by second-order central differences.
double check_L_identity(const ProblemParams& params, int n, std::span<const double> x_samples, double fd_step = 1e-6);

struct IntegralResidual {
  int n = 0;
  double gamma = 0.0;
  double residual = 0.0;
};

std::vector<IntegralResidual> check_integral_residual(const ProblemParams& params, const EigenvalueTable& table,
                                                      const EigenSystem& system, const OracleConfig& config);

}  // namespace prol
