#include "prol/gpsf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "prol/errors.hpp"
#include "prol/kernels.hpp"
#include "prol/special_functions.hpp"

namespace prol {

double RadialGpsf::alpha_magnitude() const {
  return std::pow(2.0 * std::numbers::pi, 1.0 + 0.5 * params.p) * std::abs(beta);
}

std::uint64_t surface_harmonic_count(int N, int p) {
  if (N < 0 || p < 0) throw ParameterError("surface_harmonic_count: N and p must be non-negative");
  if (p == 0) return N == 0 ? 1 : 2;
  // (2N+p) (N+p-1)! / (p! N!) = (2N+p) C(N+p-1, N) / p
  unsigned __int128 binom = 1;
  for (int i = 1; i <= N; ++i) binom = binom * static_cast<unsigned>(p - 1 + i) / static_cast<unsigned>(i);
  const unsigned __int128 h = binom * static_cast<unsigned>(2 * N + p) / static_cast<unsigned>(p);
  return static_cast<std::uint64_t>(h);
}

ZernikeExpansion expansion_of(const EigenSystem& system, std::size_t n) {
  return {system.op.params.p, system.op.params.N, system.vectors.at(n)};
}

double radial_eval(const ZernikeExpansion& h, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("radial_eval: x must lie in [0,1], got " + std::to_string(x));
  const double nu = h.N + 0.5 * h.p;
  std::vector<double> a(h.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    a[k] = sign * std::sqrt(2.0 * static_cast<double>(k) + nu + 1.0) * h.coeffs[k];
  }
  const double sum = kernels::jacobi_series<double>(a, nu, 0.0, 1.0 - 2.0 * x * x);
  return std::sqrt(2.0) * kernels::power_of_x(x, h.N) * sum;
}

double radial_eval(const RadialGpsf& g, double x) { return radial_eval(g.expansion, x); }

double weighted_radial_eval(const ZernikeExpansion& h, double x) {
  const double phi = radial_eval(h, x);
  if (x == 0.0) return 0.0;
  return kernels::radial_weight(h.p, x) * phi;
}

double weighted_radial_eval(const RadialGpsf& g, double x) { return weighted_radial_eval(g.expansion, x); }

ZernikeExpansion x_dphi_expansion(const ZernikeExpansion& h) {
  const std::size_t K = h.size();
  const double nu = h.N + 0.5 * h.p;
  ZernikeExpansion out{h.p, h.N, std::vector<double>(K, 0.0)};
  // x R̄_k' = (2k+N) R̄_k + a_k Q_{k-1},  Q_m = s_m Q_{m-1} + t_m R̄_m,
  // with Q_m = (-1)^m x^N P_m^{(N+p/2,1)}(1-2x^2).
  auto a = [&](std::size_t k) {
    const double kk = static_cast<double>(k);
    return (2.0 * kk + 2.0 * h.N + h.p) * std::sqrt(2.0 * (2.0 * kk + nu + 1.0));
  };
  auto s = [&](std::size_t m) {
    const double mm = static_cast<double>(m);
    return (mm + nu) / (mm + nu + 1.0);
  };
  auto t = [&](std::size_t m) {
    const double mm = static_cast<double>(m);
    return std::sqrt((2.0 * mm + nu + 1.0) / 2.0) / (mm + nu + 1.0);
  };
  double tail = 0.0;  // sum_{k>j} h_k a_k prod_{i=j+1}^{k-1} s_i
  for (std::size_t j = K; j-- > 0;) {
    if (j + 1 < K) tail = h.coeffs[j + 1] * a(j + 1) + s(j + 1) * tail;
    out.coeffs[j] = (2.0 * static_cast<double>(j) + h.N) * h.coeffs[j] + t(j) * tail;
  }
  return out;
}

ZernikeExpansion x_dphi_expansion(const RadialGpsf& g) { return x_dphi_expansion(g.expansion); }

double gamma_first(const ProblemParams& params, const ZernikeExpansion& h0) {
  params.validate();
  if (h0.size() == 0) throw ParameterError("gamma_first: empty expansion");
  const double nu = params.order();
  const int p = params.p;
  const int N = params.N;

  struct Term {
    double log_mag;
    double sign;
  };
  std::vector<Term> terms;
  terms.reserve(h0.size());
  for (std::size_t k = 0; k < h0.size(); ++k) {
    const double hk = h0.coeffs[k];
    if (hk == 0.0) continue;
    const double kk = static_cast<double>(k);
    const double log_mag =
        0.5 * std::log(4.0 * kk + 2.0 * N + p + 2.0) + log_gamma(kk + nu + 1.0) - log_gamma(kk + 1.0) + std::log(std::abs(hk));
    const double sign = ((k % 2 == 0) ? 1.0 : -1.0) * (hk > 0.0 ? 1.0 : -1.0);
    terms.push_back({log_mag, sign});
  }
  if (terms.empty()) throw DegenerateError("gamma_first: all coefficients vanish");
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.log_mag > b.log_mag; });
  const double log_scale = terms.front().log_mag;
  double scaled = 0.0;
  for (const auto& term : terms) scaled += term.sign * std::exp(term.log_mag - log_scale);
  if (scaled == 0.0 || std::log(std::abs(scaled)) + log_scale < std::log(1e-280))
    throw DegenerateError("gamma_first: vanishing denominator sum");
  const double log_denominator = 0.5 * std::log(2.0 * N + p + 2.0) + std::log(std::abs(scaled)) + log_scale;
  const double denominator_sign = scaled > 0.0 ? 1.0 : -1.0;

  const double h_lead = h0.coeffs[0];
  if (nu > 200.0) {
    if (h_lead == 0.0) return 0.0;
    const double log_prefactor = -nu * std::log(2.0) + (nu + 0.5) * std::log(params.c) + std::log(std::abs(h_lead));
    const double sign = (h_lead > 0.0 ? 1.0 : -1.0) * denominator_sign;
    return sign * std::exp(log_prefactor - log_denominator);
  }
  const double prefactor = std::pow(2.0, -nu) * std::pow(params.c, nu + 0.5) * h_lead;
  return prefactor * denominator_sign * std::exp(-log_denominator);
}

double gamma_ratio(const ZernikeExpansion& hn, const ZernikeExpansion& hn_tilde, const ZernikeExpansion& hnp1,
                   const ZernikeExpansion& hnp1_tilde) {
  const std::size_t K = hn.size();
  if (hn_tilde.size() != K || hnp1.size() != K || hnp1_tilde.size() != K)
    throw ParameterError("gamma_ratio: expansions must share the same length");
  if (hn.p != hnp1.p || hn.N != hnp1.N || hn_tilde.p != hn.p || hn_tilde.N != hn.N || hnp1_tilde.p != hn.p ||
      hnp1_tilde.N != hn.N)
    throw ParameterError("gamma_ratio: expansions must share (p, N)");
  const double num = std::inner_product(hn_tilde.coeffs.begin(), hn_tilde.coeffs.end(), hnp1.coeffs.begin(), 0.0);
  const double den = std::inner_product(hnp1_tilde.coeffs.begin(), hnp1_tilde.coeffs.end(), hn.coeffs.begin(), 0.0);
  if (std::abs(den) < 1e-280) throw DegenerateError("gamma_ratio: vanishing denominator");
  return num / den;
}

EigenvalueTable eigenvalue_chain(const ProblemParams& params, const EigenSystem& system, int n_max) {
  params.validate();
  if (n_max < 0) throw ParameterError("eigenvalue_chain: n_max must be non-negative");
  if (system.size() < static_cast<std::size_t>(n_max) + 1)
    throw ParameterError("eigenvalue_chain: eigensystem holds fewer than n_max+1 eigenpairs");

  EigenvalueTable table;
  table.params = params;
  table.phase_order = params.N % 4;
  const double sqrt_c = std::sqrt(params.c);
  const double beta_scale = std::pow(params.c, -0.5 * (params.p + 1));
  const double alpha_scale = std::pow(2.0 * std::numbers::pi, 1.0 + 0.5 * params.p);

  double gamma = 0.0;
  ZernikeExpansion prev, prev_tilde;
  for (int n = 0; n <= n_max; ++n) {
    auto h = expansion_of(system, static_cast<std::size_t>(n));
    auto h_tilde = x_dphi_expansion(h);
    try {
      gamma = (n == 0) ? gamma_first(params, h) : gamma * gamma_ratio(prev, prev_tilde, h, h_tilde);
    } catch (const DegenerateError& e) {
      throw DegenerateError("eigenvalue chain at n=" + std::to_string(n) + ": " + e.what());
    }
    EigenvalueRow row;
    row.n = n;
    row.chi = system.chi[static_cast<std::size_t>(n)];
    row.gamma = gamma;
    row.beta = gamma * beta_scale;
    row.alpha_magnitude = alpha_scale * std::abs(row.beta);
    row.nu_magnitude = sqrt_c * std::abs(gamma);
    row.energy_deficit = 1.0 - row.nu_magnitude * row.nu_magnitude;
    row.below_chain_precision = n > 0 && std::abs(gamma) < 1e-12 * std::abs(table.rows.front().gamma);
    if (n > 0 && row.nu_magnitude > table.rows.back().nu_magnitude + 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "|nu| increases from n=" << n - 1 << " (" << table.rows.back().nu_magnitude << ") to n=" << n << " ("
          << row.nu_magnitude << ")";
      table.diagnostics.push_back(msg.str());
    }
    table.rows.push_back(row);
    prev = std::move(h);
    prev_tilde = std::move(h_tilde);
  }
  return table;
}

std::vector<RadialGpsf> assemble(const EigenSystem& system, const EigenvalueTable& table) {
  std::vector<RadialGpsf> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RadialGpsf g;
    g.params = table.params;
    g.n = row.n;
    g.expansion = expansion_of(system, static_cast<std::size_t>(row.n));
    g.chi = row.chi;
    g.gamma = row.gamma;
    g.beta = row.beta;
    g.nu_magnitude = row.nu_magnitude;
    g.phase_order = table.phase_order;
    out.push_back(std::move(g));
  }
  return out;
}

std::complex<double> full_eigenfunction_eval_2d3d(const RadialGpsf& g, int m, std::span<const double> point) {
  const int D = g.params.dimension();
  const int N = g.params.N;
  if (D != 2 && D != 3)
    throw UnsupportedDimensionError("full_eigenfunction_eval_2d3d: only D = 2 and D = 3 are supported, got D = " +
                                    std::to_string(D));
  if (point.size() != static_cast<std::size_t>(D))
    throw ParameterError("full_eigenfunction_eval_2d3d: point must have D components");
  const auto count = surface_harmonic_count(N, g.params.p);
  if (m < 1 || static_cast<std::uint64_t>(m) > count)
    throw ParameterError("full_eigenfunction_eval_2d3d: m must lie in 1..h(N,p)");

  double r2 = 0.0;
  for (double v : point) r2 += v * v;
  const double r = std::sqrt(r2);
  if (r > 1.0 + 1e-14) throw DomainError("full_eigenfunction_eval_2d3d: point lies outside the unit ball");
  const double radial = radial_eval(g, std::min(r, 1.0));
  if (r == 0.0) {
    if (N != 0) return {0.0, 0.0};
    const double s0 = (D == 2) ? 1.0 / std::sqrt(2.0 * std::numbers::pi) : 1.0 / std::sqrt(4.0 * std::numbers::pi);
    return {radial * s0, 0.0};
  }

  const double azimuth = std::atan2(point[1], point[0]);
  if (D == 2) {
    const double freq = (m == 1) ? N : -N;
    return radial / std::sqrt(2.0 * std::numbers::pi) * std::polar(1.0, freq * azimuth);
  }
  const int order = m - N - 1;
  const int abs_order = order < 0 ? -order : order;
  const double polar = std::acos(std::clamp(point[2] / r, -1.0, 1.0));
  const double legendre = std::sph_legendre(static_cast<unsigned>(N), static_cast<unsigned>(abs_order), polar);
  std::complex<double> y = legendre * std::polar(1.0, abs_order * azimuth);
  if (order < 0) y = ((abs_order % 2 == 0) ? 1.0 : -1.0) * std::conj(y);
  return radial * y;
}

}  // namespace prol
