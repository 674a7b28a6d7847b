#include "prol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prol/errors.hpp"
#include "prol/kernels.hpp"
#include "prol/special_functions.hpp"

namespace prol {

OracleConfig OracleConfig::defaults(const ProblemParams& params) {
  OracleConfig cfg;
  cfg.quadrature_size = 60 + static_cast<int>(std::ceil(1.5 * params.c));
  cfg.fd_step = 1e-6;
  constexpr int kGrid = 50;
  cfg.grid.resize(kGrid);
  for (int i = 0; i < kGrid; ++i) cfg.grid[static_cast<std::size_t>(i)] = (i + 0.5) / kGrid;
  return cfg;
}

void OracleConfig::validate() const {
  if (quadrature_size < 2) throw ParameterError("oracle: quadrature size must be at least 2");
  if (!(fd_step > 0.0 && fd_step < 1e-3)) throw ParameterError("oracle: finite-difference step must lie in (0, 1e-3)");
  for (double y : grid)
    if (!(y > 0.0 && y < 1.0)) throw ParameterError("oracle: grid abscissae must lie in (0,1)");
}

double apply_M(const ProblemParams& params, const std::function<double(double)>& f, double y,
               const OracleConfig& config) {
  params.validate();
  if (config.quadrature_size < 2) throw ParameterError("apply_M: quadrature size must be at least 2");
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("apply_M: y must lie in [0,1]");
  if (y == 0.0) return 0.0;
  const auto rule = gauss_legendre_01(config.quadrature_size);
  const double order = params.order();
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double z = params.c * y * rule.nodes[j];
    sum += rule.weights[j] * bessel_j(order, z) * std::sqrt(z) * f(rule.nodes[j]);
  }
  return sum;
}

namespace {

ExtendedReal log_gamma_of_fraction_plus_one(double mu) {
  if (mu == 0.0) return ExtendedReal(0);
  if (mu == 0.5) return log(sqrt(boost::math::constants::pi<ExtendedReal>()) / 2);
  throw ParameterError("oracle: Bessel orders must be integers or half-integers");
}

ExtendedReal magnitude(const ExtendedReal& v) { return v < 0 ? ExtendedReal(-v) : v; }

std::vector<ExtendedReal> extend(const ZernikeExpansion& h) { return {h.coeffs.begin(), h.coeffs.end()}; }

// Solves (T - shift) y = rhs for symmetric tridiagonal T with partial pivoting.
std::vector<ExtendedReal> shifted_solve(const std::vector<ExtendedReal>& diag, const std::vector<ExtendedReal>& off,
                                        const ExtendedReal& shift, std::vector<ExtendedReal> rhs) {
  const std::size_t K = diag.size();
  std::vector<ExtendedReal> d(K), du(K, ExtendedReal(0)), du2(K, ExtendedReal(0)), dl(K, ExtendedReal(0));
  for (std::size_t i = 0; i < K; ++i) d[i] = diag[i] - shift;
  for (std::size_t i = 0; i + 1 < K; ++i) {
    du[i] = off[i];
    dl[i] = off[i];
  }
  const ExtendedReal tiny = std::numeric_limits<ExtendedReal>::epsilon() * ExtendedReal(1e-8);
  for (std::size_t i = 0; i + 1 < K; ++i) {
    if (magnitude(d[i]) >= magnitude(dl[i])) {
      if (d[i] == 0) d[i] = tiny;
      const ExtendedReal f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      rhs[i + 1] -= f * rhs[i];
    } else {
      const ExtendedReal f = d[i] / dl[i];
      d[i] = dl[i];
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= f * rhs[i];
      const ExtendedReal t = d[i + 1];
      d[i + 1] = du[i] - f * t;
      du[i] = t;
      if (i + 2 < K) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
    }
  }
  if (d[K - 1] == 0) d[K - 1] = tiny;
  std::vector<ExtendedReal> y(K);
  for (std::size_t j = K; j-- > 0;) {
    ExtendedReal v = rhs[j];
    if (j + 1 < K) v -= du[j] * y[j + 1];
    if (j + 2 < K) v -= du2[j] * y[j + 2];
    y[j] = v / d[j];
  }
  return y;
}


}  // namespace

IntegralOperatorOracle::IntegralOperatorOracle(const ProblemParams& params, OracleConfig config)
    : params_(params), config_(std::move(config)) {
  params_.validate();
  config_.validate();
  std::vector<ExtendedReal> weights;
  kernels::gauss_legendre_01<ExtendedReal>(config_.quadrature_size, nodes_, weights);
  grid_.assign(config_.grid.begin(), config_.grid.end());

  const double order = params_.order();
  const int base = static_cast<int>(std::floor(order));
  const double mu = order - base;
  const ExtendedReal mu_ext(mu);
  const ExtendedReal lg = log_gamma_of_fraction_plus_one(mu);
  const ExtendedReal c(params_.c);
  const std::size_t m = nodes_.size();
  weighted_kernel_.resize(grid_.size() * m);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const ExtendedReal z = c * grid_[i] * nodes_[j];
      const auto seq = kernels::bessel_j_sequence<ExtendedReal>(mu_ext, lg, base + 1, z);
      weighted_kernel_[i * m + j] = weights[j] * seq.back() * sqrt(z);
    }
  }
}

std::vector<ExtendedReal> IntegralOperatorOracle::weighted_values(std::span<const ExtendedReal> h,
                                                                  std::span<const ExtendedReal> xs) const {
  const int p = params_.p;
  const int N = params_.N;
  const ExtendedReal nu = ExtendedReal(N) + ExtendedReal(p) / 2;
  const kernels::JacobiRecurrence<ExtendedReal> rec{nu, ExtendedReal(0)};
  const ExtendedReal root2 = sqrt(ExtendedReal(2));
  std::vector<ExtendedReal> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    if (x == 0) {
      out.emplace_back(0);
      continue;
    }
    const ExtendedReal t = 1 - 2 * x * x;
    ExtendedReal prev = 0;
    ExtendedReal cur = 1;
    ExtendedReal sum = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const ExtendedReal scale = sqrt(2 * ExtendedReal(static_cast<double>(k)) + nu + 1);
      const ExtendedReal term = h[k] * scale * cur;
      sum += (k % 2 == 0) ? term : ExtendedReal(-term);
      ExtendedReal a, b, cc;
      rec.coefficients(static_cast<int>(k), a, b, cc);
      const ExtendedReal next = (a * t + b) * cur - cc * prev;
      prev = cur;
      cur = next;
    }
    out.push_back(root2 * kernels::power_of_x(x, N) * kernels::radial_weight(p, x) * sum);
  }
  return out;
}

std::vector<ExtendedReal> IntegralOperatorOracle::weighted_values(const ZernikeExpansion& h,
                                                                  std::span<const ExtendedReal> xs) const {
  if (h.p != params_.p || h.N != params_.N) throw ParameterError("oracle: expansion does not match (p, N)");
  return weighted_values(extend(h), xs);
}

std::vector<ExtendedReal> IntegralOperatorOracle::phi_on_grid(const ZernikeExpansion& h) const {
  return weighted_values(h, grid_);
}

std::vector<ExtendedReal> IntegralOperatorOracle::apply_on_grid(std::span<const ExtendedReal> h) const {
  const auto phi = weighted_values(h, nodes_);
  const std::size_t m = nodes_.size();
  std::vector<ExtendedReal> out(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    ExtendedReal sum = 0;
    for (std::size_t j = 0; j < m; ++j) sum += weighted_kernel_[i * m + j] * phi[j];
    out[i] = sum;
  }
  return out;
}

std::vector<ExtendedReal> IntegralOperatorOracle::apply_on_grid(const ZernikeExpansion& h) const {
  if (h.p != params_.p || h.N != params_.N) throw ParameterError("oracle: expansion does not match (p, N)");
  return apply_on_grid(std::span<const ExtendedReal>(extend(h)));
}

std::vector<ExtendedReal> IntegralOperatorOracle::refine(const ZernikeExpansion& h, double chi) const {
  if (h.p != params_.p || h.N != params_.N) throw ParameterError("oracle: expansion does not match (p, N)");
  if (h.size() < 2) throw ParameterError("oracle: refinement needs at least two coefficients");
  std::vector<ExtendedReal> diag, off;
  kernels::operator_entries<ExtendedReal>(params_.p, params_.N, ExtendedReal(params_.c), h.size(), diag, off);
  auto x = extend(h);
  auto normalize = [](std::vector<ExtendedReal>& v) {
    ExtendedReal ss = 0;
    for (const auto& e : v) ss += e * e;
    const ExtendedReal r = sqrt(ss);
    for (auto& e : v) e /= r;
  };
  normalize(x);
  ExtendedReal shift(chi);
  for (int it = 0; it < 3; ++it) {
    auto y = shifted_solve(diag, off, shift, x);
    normalize(y);
    ExtendedReal align = 0;
    for (std::size_t k = 0; k < y.size(); ++k) align += y[k] * x[k];
    if (align < 0)
      for (auto& e : y) e = -e;
    x = std::move(y);
    ExtendedReal rq = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      ExtendedReal bx = diag[k] * x[k];
      if (k > 0) bx += off[k - 1] * x[k - 1];
      if (k + 1 < x.size()) bx += off[k] * x[k + 1];
      rq += x[k] * bx;
    }
    shift = rq;
  }
  return x;
}

std::vector<double> IntegralOperatorOracle::gamma_probes(std::span<const ExtendedReal> h, std::size_t count) const {
  const auto phi = weighted_values(h, grid_);
  const auto mphi = apply_on_grid(h);
  std::vector<std::size_t> order(phi.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return magnitude(phi[a]) > magnitude(phi[b]); });
  if (order.empty() || magnitude(phi[order.front()]) < ExtendedReal(1e-200))
    throw DegenerateError("gamma_by_quadrature: weighted function vanishes on the grid");
  std::vector<double> out;
  for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
    const std::size_t k = order[i];
    out.push_back(static_cast<double>(mphi[k] / phi[k]));
  }
  return out;
}

std::vector<double> IntegralOperatorOracle::gamma_probes(const ZernikeExpansion& h, std::size_t count) const {
  if (h.p != params_.p || h.N != params_.N) throw ParameterError("oracle: expansion does not match (p, N)");
  return gamma_probes(std::span<const ExtendedReal>(extend(h)), count);
}

double IntegralOperatorOracle::gamma(const ZernikeExpansion& h) const { return gamma_probes(h, 1).front(); }

double IntegralOperatorOracle::gamma(const ZernikeExpansion& h, double chi) const {
  const auto x = refine(h, chi);
  return gamma_probes(std::span<const ExtendedReal>(x), 1).front();
}

double IntegralOperatorOracle::residual(const ZernikeExpansion& h, double gamma) const {
  const auto phi = phi_on_grid(h);
  const auto mphi = apply_on_grid(h);
  const ExtendedReal g(gamma);
  ExtendedReal worst = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) worst = std::max(worst, magnitude(mphi[i] - g * phi[i]));
  return static_cast<double>(worst);
}

double gamma_by_quadrature(const ProblemParams& params, const RadialGpsf& g, const OracleConfig& config) {
  return IntegralOperatorOracle(params, config).gamma(g.expansion, g.chi);
}

double check_L_identity(const ProblemParams& params, int n, std::span<const double> x_samples, double fd_step) {
  params.validate();
  if (n < 0) throw ParameterError("check_L_identity: n must be non-negative");
  if (!(fd_step > 0.0 && fd_step < 1e-3)) throw ParameterError("check_L_identity: step must lie in (0, 1e-3)");
  std::vector<ExtendedReal> diag, off;
  kernels::operator_entries<ExtendedReal>(params.p, params.N, ExtendedReal(params.c), static_cast<std::size_t>(n) + 2,
                                          diag, off);
  const auto idx = static_cast<std::size_t>(n);
  const ExtendedReal b_lower = n > 0 ? off[idx - 1] : ExtendedReal(0);
  const ExtendedReal b_mid = diag[idx];
  const ExtendedReal b_upper = off[idx];

  const int p = params.p;
  const int N = params.N;
  const ExtendedReal nu = ExtendedReal(N) + ExtendedReal(p) / 2;
  const ExtendedReal c(params.c);
  const ExtendedReal h(fd_step);
  auto T = [&](int k, const ExtendedReal& x) { return kernels::zernike_weighted<ExtendedReal>(p, N, k, x); };

  ExtendedReal worst = 0;
  for (double xd : x_samples) {
    if (!(xd >= 1e-3 && xd <= 1.0 - 1e-3))
      throw DomainError("check_L_identity: samples must stay at least 1e-3 away from 0 and 1");
    const ExtendedReal x(xd);
    const ExtendedReal t_minus = T(n, x - h);
    const ExtendedReal t_mid = T(n, x);
    const ExtendedReal t_plus = T(n, x + h);
    const ExtendedReal right = 1 - (x + h / 2) * (x + h / 2);
    const ExtendedReal left = 1 - (x - h / 2) * (x - h / 2);
    const ExtendedReal flux = (right * (t_plus - t_mid) - left * (t_mid - t_minus)) / (h * h);
    const ExtendedReal potential = (ExtendedReal(0.25) - nu * nu) / (x * x) - c * c * x * x;
    const ExtendedReal lhs = flux + potential * t_mid;
    ExtendedReal rhs = b_mid * t_mid + b_upper * T(n + 1, x);
    if (n > 0) rhs += b_lower * T(n - 1, x);
    worst = std::max(worst, magnitude(lhs - rhs));
  }
  return static_cast<double>(worst);
}

std::vector<IntegralResidual> check_integral_residual(const ProblemParams& params, const EigenvalueTable& table,
                                                      const EigenSystem& system, const OracleConfig& config) {
  const IntegralOperatorOracle oracle(params, config);
  std::vector<IntegralResidual> out;
  for (const auto& row : table.rows) {
    const auto h = expansion_of(system, static_cast<std::size_t>(row.n));
    out.push_back({row.n, row.gamma, oracle.residual(h, row.gamma)});
  }
  return out;
}

}  // namespace prol
