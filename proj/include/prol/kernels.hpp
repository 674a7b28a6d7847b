#pragma once

// Precision-generic numerical kernels. The double-precision public API in
// special_functions.hpp wraps these; the quadrature oracle instantiates them
// with an extended-precision type.

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace prol::kernels {

/// Three-term recurrence P_{k+1} = (a_k x + b_k) P_k - c_k P_{k-1} for
/// P_k^{(alpha,beta)}, with P_0 = 1 and P_{-1} = 0.
template <class Real>
struct JacobiRecurrence {
  Real alpha;
  Real beta;

  void coefficients(int k, Real& a, Real& b, Real& c) const {
    if (k == 0) {
      a = (alpha + beta + 2) / 2;
      b = (alpha - beta) / 2;
      c = 0;
      return;
    }
    const Real s = 2 * k + alpha + beta;
    const Real denom = 2 * (k + 1) * (k + alpha + beta + 1) * s;
    a = (s + 1) * (s + 2) * s / denom;
    b = (s + 1) * (alpha * alpha - beta * beta) / denom;
    c = 2 * (k + alpha) * (k + beta) * (s + 2) / denom;
  }
};

template <class Real>
Real jacobi(int n, Real alpha, Real beta, Real x) {
  if (n == 0) return Real(1);
  const JacobiRecurrence<Real> rec{alpha, beta};
  Real prev = 0;
  Real cur = 1;
  for (int k = 0; k < n; ++k) {
    Real a, b, c;
    rec.coefficients(k, a, b, c);
    const Real next = (a * x + b) * cur - c * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Clenshaw summation of sum_k coeffs[k] P_k^{(alpha,beta)}(x).
template <class Real, class Coeffs>
Real jacobi_series(const Coeffs& coeffs, Real alpha, Real beta, Real x) {
  const JacobiRecurrence<Real> rec{alpha, beta};
  Real b1 = 0;  // b_{k+1}
  Real b2 = 0;  // b_{k+2}
  Real c_next = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const int k = static_cast<int>(i);
    Real a, b, c;
    rec.coefficients(k, a, b, c);
    const Real bk = Real(coeffs[i]) + (a * x + b) * b1 - c_next * b2;
    b2 = b1;
    b1 = bk;
    c_next = c;
  }
  return b1;
}

/// x^N, switching to exp(N log x) once N |log x| is large.
template <class Real>
Real power_of_x(Real x, int N) {
  using std::exp;
  using std::log;
  using std::pow;
  if (N == 0) return Real(1);
  if (x == 0) return Real(0);
  const Real lx = log(x);
  if (Real(N) * (lx < 0 ? -lx : lx) > 300) return exp(Real(N) * lx);
  return pow(x, N);
}

/// Normalized radial Zernike polynomial
/// sqrt(2) (-1)^n x^N sqrt(2n+N+p/2+1) P_n^{(N+p/2,0)}(1-2x^2).
template <class Real>
Real zernike_normalized(int p, int N, int n, Real x) {
  using std::sqrt;
  const Real order = Real(N) + Real(p) / 2;
  const Real jac = jacobi<Real>(n, order, Real(0), 1 - 2 * x * x);
  const Real sign = (n % 2 == 0) ? Real(1) : Real(-1);
  return sqrt(Real(2)) * sign * power_of_x(x, N) * sqrt(2 * n + order + 1) * jac;
}

/// x^{(p+1)/2} for the weighted Zernike / GPSF functions.
template <class Real>
Real radial_weight(int p, Real x) {
  using std::pow;
  using std::sqrt;
  if (x == 0) return Real(0);
  if (p % 2 == 1) return pow(x, (p + 1) / 2);
  return pow(x, p / 2) * sqrt(x);
}

template <class Real>
Real zernike_weighted(int p, int N, int n, Real x) {
  if (x == 0) return Real(0);
  return radial_weight(p, x) * zernike_normalized<Real>(p, N, n, x);
}

/// Bessel functions J_{mu+k}(x), k = 0..count-1, for mu in [0,1) and x >= 0.
///
/// `log_gamma_mu_plus_1` is ln Gamma(mu+1) in the working precision (0 for
/// integer orders, ln(sqrt(pi)/2) for half-integer orders).
///
/// Small arguments use the power series. Otherwise Miller's downward
/// recurrence is normalized with the Neumann identity
///   (x/2)^mu / Gamma(mu+1) = J_mu + sum_{k>=1} (mu+2k) e_k J_{mu+2k},
///   e_1 = 1, e_{k+1} = e_k (mu+k)/(k+1),
/// which reduces to J_0 + 2 sum J_{2k} = 1 for integer orders.
template <class Real>
std::vector<Real> bessel_j_sequence(Real mu, Real log_gamma_mu_plus_1, int count, Real x) {
  using std::cbrt;
  using std::ceil;
  using std::exp;
  using std::log;
  std::vector<Real> out(static_cast<std::size_t>(count), Real(0));
  if (count <= 0) return out;
  if (x == 0) {
    if (mu == 0) out[0] = 1;
    return out;
  }

  if (x <= 2) {
    const Real half = x / 2;
    const Real q = -half * half;
    Real log_gamma = log_gamma_mu_plus_1;  // ln Gamma(mu+k+1)
    const Real log_half = log(half);
    for (int k = 0; k < count; ++k) {
      const Real order = mu + k;
      if (k > 0) log_gamma += log(order);
      const Real lead_log = order * log_half - log_gamma;
      if (lead_log < -700) break;  // remaining orders underflow
      Real term = 1;
      Real sum = 1;
      for (int j = 1; j < 200; ++j) {
        term *= q / (Real(j) * (order + j));
        sum += term;
        if ((term < 0 ? -term : term) <= std::numeric_limits<Real>::epsilon() * (sum < 0 ? -sum : sum)) break;
      }
      out[static_cast<std::size_t>(k)] = exp(lead_log) * sum;
    }
    return out;
  }

  const double xd = static_cast<double>(x);
  const int start = static_cast<int>(std::ceil(std::max(static_cast<double>(count), xd))) + 60 +
                    static_cast<int>(std::ceil(10.0 * std::cbrt(xd)));
  const int half_start = start / 2 + 1;
  std::vector<Real> e(static_cast<std::size_t>(half_start + 1), Real(0));
  e[1] = 1;
  for (int k = 1; k < half_start; ++k) e[static_cast<std::size_t>(k + 1)] = e[static_cast<std::size_t>(k)] * (mu + k) / (k + 1);

  const Real big = Real(1e250);
  const Real shrink = Real(1e-250);
  Real upper = 0;            // J_{mu+k+1}
  Real cur = Real(1e-30);    // J_{mu+k}, k = start
  Real norm = 0;
  for (int k = start; k >= 0; --k) {
    if (k < count) out[static_cast<std::size_t>(k)] = cur;
    if (k % 2 == 0) norm += (k == 0) ? cur : (mu + k) * e[static_cast<std::size_t>(k / 2)] * cur;
    if (k == 0) break;
    const Real lower = 2 * (mu + k) / x * cur - upper;
    upper = cur;
    cur = lower;
    if ((cur < 0 ? -cur : cur) > big) {
      cur *= shrink;
      upper *= shrink;
      norm *= shrink;
      for (int j = k; j < count; ++j) out[static_cast<std::size_t>(j)] *= shrink;
    }
  }
  const Real scale = exp(mu * log(x / 2) - log_gamma_mu_plus_1) / norm;
  for (auto& v : out) v *= scale;
  return out;
}

/// m-point Gauss-Legendre rule on [0,1], nodes ascending.
template <class Real>
void gauss_legendre_01(int m, std::vector<Real>& nodes, std::vector<Real>& weights) {
  using std::cos;
  const Real pi = boost::math::constants::pi<Real>();
  const Real tol = 4 * std::numeric_limits<Real>::epsilon();
  nodes.assign(static_cast<std::size_t>(m), Real(0));
  weights.assign(static_cast<std::size_t>(m), Real(0));
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real z = cos(pi * (Real(i) + Real(0.75)) / (Real(m) + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p1 = 1;
      Real p2 = 0;
      for (int j = 1; j <= m; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      dp = m * (z * p1 - p2) / (z * z - 1);
      const Real dz = p1 / dp;
      z -= dz;
      if ((dz < 0 ? -dz : dz) <= tol) {
        // one more evaluation of the derivative at the converged node
        p1 = 1;
        p2 = 0;
        for (int j = 1; j <= m; ++j) {
          const Real p3 = p2;
          p2 = p1;
          p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
        }
        dp = m * (z * p1 - p2) / (z * z - 1);
        break;
      }
    }
    const Real w = 1 / ((1 - z * z) * dp * dp);  // half of the [-1,1] weight
    // z is the i-th largest root; map t = (1+z)/2
    nodes[static_cast<std::size_t>(m - 1 - i)] = (1 + z) / 2;
    nodes[static_cast<std::size_t>(i)] = (1 - z) / 2;
    weights[static_cast<std::size_t>(m - 1 - i)] = w;
    weights[static_cast<std::size_t>(i)] = w;
  }
  if (m % 2 == 1) nodes[static_cast<std::size_t>(m / 2)] = Real(0.5);
}

/// Entries of B_N^{p,c}: diag[n] = B(n,n) for n < K, off[n] = B(n,n+1).
template <class Real>
void operator_entries(int p, int N, Real c, std::size_t K, std::vector<Real>& diag, std::vector<Real>& off) {
  using std::sqrt;
  diag.assign(K, Real(0));
  off.assign(K > 0 ? K - 1 : 0, Real(0));
  const Real c2 = c * c;
  const Real nu = Real(N) + Real(p) / 2;
  for (std::size_t i = 0; i < K; ++i) {
    const Real n = Real(static_cast<double>(i));
    const Real s = 2 * n + nu;
    const Real kap = (s + Real(0.5)) * (s + Real(1.5));
    if (i == 0 && N == 0 && p == 0) {
      // limit nu -> 0 of the general entry; <T_0, x^2 T_0> = 1/2
      diag[i] = -kap - c2 / 2;
      continue;
    }
    diag[i] = -(((s + 1) * nu + 2 * (n + 1) * n) * c2 / (s * (s + 2)) + kap);
  }
  for (std::size_t i = 1; i < K; ++i) {
    const Real n = Real(static_cast<double>(i));
    const Real s = 2 * n + nu;
    off[i - 1] = -c2 * n * (n + nu) / (sqrt(1 - 2 / (s + 1)) * s * (s + 1));
  }
}

}  // namespace prol::kernels
