#pragma once

#include <span>
#include <vector>

namespace prol {

struct JacobiParams {
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;

  /// Throws ParameterError unless n >= 0, alpha > -1, beta > -1.
  void validate() const;
};

/// Index of R̄_{N,n}^p / T_{N,n}^p; p = D - 2.
struct ZernikeIndex {
  int p = 0;
  int N = 0;
  int n = 0;
};

/// Gauss-Legendre rule on [0,1]. Immutable once built.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// P_n^{(alpha,beta)}(x) by the three-term degree recurrence, x in [-1,1].
double jacobi_eval(const JacobiParams& params, double x);

/// d/dx P_n^{(alpha,beta)}(x) = (n+alpha+beta+1)/2 P_{n-1}^{(alpha+1,beta+1)}(x).
double jacobi_derivative(const JacobiParams& params, double x);

/// Normalized radial Zernike polynomial R̄_{N,n}^p(x), x in [0,1]; orthonormal
/// with weight x^{p+1}.
double zernike_normalized_eval(const ZernikeIndex& idx, double x);

/// Weighted radial Zernike polynomial T_{N,n}^p(x) = x^{(p+1)/2} R̄_{N,n}^p(x).
double zernike_weighted_eval(const ZernikeIndex& idx, double x);

/// ln Gamma(z) for z > 0.
double log_gamma(double z);

/// J_order(x) for order >= 0, x >= 0.
double bessel_j(double order, double x);

/// J_{order+k}(x) for k = 0..count-1 from a single recurrence sweep.
std::vector<double> bessel_j_orders(double order, int count, double x);

/// m-point Gauss-Legendre rule mapped to [0,1].
QuadratureRule gauss_legendre_01(int m);

}  // namespace prol
