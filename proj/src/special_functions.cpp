#include "prol/special_functions.hpp"

#include <cmath>
#include <string>

#include "prol/errors.hpp"
#include "prol/kernels.hpp"

namespace prol {

void JacobiParams::validate() const {
  if (n < 0) throw ParameterError("jacobi: degree must be non-negative, got " + std::to_string(n));
  if (!(alpha > -1.0)) throw ParameterError("jacobi: alpha must exceed -1, got " + std::to_string(alpha));
  if (!(beta > -1.0)) throw ParameterError("jacobi: beta must exceed -1, got " + std::to_string(beta));
}

namespace {

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + ": x must lie in [0,1], got " + std::to_string(x));
}

void check_index(const ZernikeIndex& idx) {
  if (idx.p < 0 || idx.N < 0 || idx.n < 0) throw ParameterError("zernike: p, N and n must be non-negative");
}

}  // namespace

double jacobi_eval(const JacobiParams& params, double x) {
  params.validate();
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("jacobi: x must lie in [-1,1], got " + std::to_string(x));
  return kernels::jacobi<double>(params.n, params.alpha, params.beta, x);
}

double jacobi_derivative(const JacobiParams& params, double x) {
  params.validate();
  if (params.n == 0) return 0.0;
  const JacobiParams shifted{params.n - 1, params.alpha + 1.0, params.beta + 1.0};
  return 0.5 * (params.n + params.alpha + params.beta + 1.0) * jacobi_eval(shifted, x);
}

double zernike_normalized_eval(const ZernikeIndex& idx, double x) {
  check_index(idx);
  check_unit_interval(x, "zernike_normalized_eval");
  return kernels::zernike_normalized<double>(idx.p, idx.N, idx.n, x);
}

double zernike_weighted_eval(const ZernikeIndex& idx, double x) {
  check_index(idx);
  check_unit_interval(x, "zernike_weighted_eval");
  return kernels::zernike_weighted<double>(idx.p, idx.N, idx.n, x);
}

double log_gamma(double z) {
  if (!(z > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(z));
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(z, &sign);
#else
  return std::lgamma(z);
#endif
}

std::vector<double> bessel_j_orders(double order, int count, double x) {
  if (!(order >= 0.0)) throw DomainError("bessel_j: order must be non-negative");
  if (!(x >= 0.0)) throw DomainError("bessel_j: x must be non-negative, got " + std::to_string(x));
  if (count <= 0) return {};
  const double base = std::floor(order);
  const double mu = order - base;
  const int skip = static_cast<int>(base);
  const auto seq = kernels::bessel_j_sequence<double>(mu, log_gamma(mu + 1.0), skip + count, x);
  return {seq.begin() + skip, seq.end()};
}

double bessel_j(double order, double x) { return bessel_j_orders(order, 1, x).front(); }

QuadratureRule gauss_legendre_01(int m) {
  if (m < 1) throw ParameterError("gauss_legendre_01: rule size must be positive");
  QuadratureRule rule;
  kernels::gauss_legendre_01<double>(m, rule.nodes, rule.weights);
  return rule;
}

}  // namespace prol
