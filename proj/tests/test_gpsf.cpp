#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "prol/errors.hpp"
#include "prol/gpsf.hpp"
#include "prol/special_functions.hpp"

using namespace prol;

namespace {

constexpr double kTwentyPi = 20.0 * std::numbers::pi;

struct Solved {
  EigenSystem system;
  EigenvalueTable table;
  std::vector<RadialGpsf> gpsfs;
};

Solved solve(const ProblemParams& params, int n_max) {
  auto ts = solve_truncated(params, n_max, 1e-14);
  auto table = eigenvalue_chain(params, ts.system, n_max);
  auto gpsfs = assemble(ts.system, table);
  return {std::move(ts.system), std::move(table), std::move(gpsfs)};
}

ZernikeExpansion unit(int p, int N, std::size_t K, std::size_t k) {
  ZernikeExpansion h{p, N, std::vector<double>(K, 0.0)};
  h.coeffs[k] = 1.0;
  return h;
}

// x dR/dx by central differences of the basis function itself
double x_dR(int p, int N, int k, double x) {
  const double h = 1e-6;
  return x * (zernike_normalized_eval({p, N, k}, x + h) - zernike_normalized_eval({p, N, k}, x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("surface harmonic counts") {
  CHECK(surface_harmonic_count(0, 0) == 1);
  CHECK(surface_harmonic_count(5, 0) == 2);
  CHECK(surface_harmonic_count(3, 1) == 7);
  for (int N = 0; N < 40; ++N) CHECK(surface_harmonic_count(N, 1) == static_cast<std::uint64_t>(2 * N + 1));
  // D = 4: (N+1)^2
  for (int N = 0; N < 20; ++N) CHECK(surface_harmonic_count(N, 2) == static_cast<std::uint64_t>((N + 1) * (N + 1)));
  // h(N,p) = C(N+p+1, p+1) - C(N+p-1, p+1)
  CHECK(surface_harmonic_count(4, 3) == 55);
}

TEST_CASE("surface harmonic counts via binomial difference") {
  auto binom = [](int n, int k) {
    if (k < 0 || n < k) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  for (int p = 0; p <= 6; ++p)
    for (int N = 0; N <= 12; ++N) {
      if (N == 0 && p == 0) continue;
      const double expected = binom(N + p + 1, p + 1) - binom(N + p - 1, p + 1);
      CHECK(static_cast<double>(surface_harmonic_count(N, p)) == expected);
    }
}

TEST_CASE("radial evaluation in the small c limit") {
  const auto s = solve({1, 1e-6, 0}, 2);
  for (double x : {0.2, 0.5, 0.9})
    CHECK(std::abs(std::abs(radial_eval(s.gpsfs[2], x)) - std::abs(zernike_normalized_eval({1, 0, 2}, x))) <= 1e-8);
}

TEST_CASE("radial and weighted evaluation paths") {
  const auto s = solve({1, 10.0, 1}, 6);
  for (const auto& g : s.gpsfs) {
    for (double x : {0.0, 0.13, 0.37, 0.81, 1.0}) {
      double direct = 0.0, weighted = 0.0;
      for (std::size_t k = 0; k < g.expansion.size(); ++k) {
        direct += g.expansion.coeffs[k] * zernike_normalized_eval({1, 1, static_cast<int>(k)}, x);
        weighted += g.expansion.coeffs[k] * zernike_weighted_eval({1, 1, static_cast<int>(k)}, x);
      }
      CHECK(radial_eval(g, x) == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
      CHECK(weighted_radial_eval(g, x) == doctest::Approx(weighted).epsilon(1e-13).scale(1.0));
      CHECK(weighted_radial_eval(g, x) == doctest::Approx(x * radial_eval(g, x)).epsilon(1e-13).scale(1.0));
    }
    CHECK(weighted_radial_eval(g, 0.0) == 0.0);
    CHECK(weighted_radial_eval(g, 1.0) == radial_eval(g, 1.0));
  }
  CHECK_THROWS_AS(radial_eval(s.gpsfs[0], 1.2), DomainError);
  CHECK_THROWS_AS(weighted_radial_eval(s.gpsfs[0], -0.1), DomainError);
}

TEST_CASE("normalization and orthogonality by quadrature") {
  for (int p : {0, 1, 2}) {
    const auto s = solve({p, kTwentyPi, 2}, 12);
    const auto rule = gauss_legendre_01(400);
    for (std::size_t n = 0; n < s.gpsfs.size(); ++n) {
      double coef = 0.0;
      for (double h : s.gpsfs[n].expansion.coeffs) coef += h * h;
      for (std::size_t j = 0; j <= n; ++j) {
        const double v = rule.integrate(
            [&](double x) { return weighted_radial_eval(s.gpsfs[n], x) * weighted_radial_eval(s.gpsfs[j], x); });
        if (j == n) {
          CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
          CHECK(v == doctest::Approx(coef).epsilon(1e-12));
        } else {
          CHECK(std::abs(v) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("x dPhi expansion of single basis functions") {
  for (int p : {0, 1, 2}) {
    for (int N : {0, 1, 4}) {
      const std::size_t K = 12;
      const auto t0 = x_dphi_expansion(unit(p, N, K, 0));
      CHECK(t0.coeffs[0] == doctest::Approx(static_cast<double>(N)).epsilon(1e-14).scale(1.0));
      for (std::size_t k = 1; k < K; ++k) CHECK(t0.coeffs[k] == 0.0);
      for (std::size_t n = 0; n < K; ++n) {
        const auto t = x_dphi_expansion(unit(p, N, K, n));
        CHECK(t.coeffs[n] == doctest::Approx(2.0 * n + N).epsilon(1e-14).scale(1.0));
        double big = 0.0;
        for (double v : t.coeffs) big = std::max(big, std::abs(v));
        for (std::size_t k = n + 1; k < K; ++k) CHECK(std::abs(t.coeffs[k]) <= 1e-12 * big);
        // reconstruct x R' and compare with a finite difference
        for (double x : {0.2, 0.5, 0.8}) {
          double sum = 0.0;
          for (std::size_t k = 0; k < K; ++k) sum += t.coeffs[k] * zernike_normalized_eval({p, N, static_cast<int>(k)}, x);
          CHECK(std::abs(sum - x_dR(p, N, static_cast<int>(n), x)) <= 1e-5 * std::max(1.0, std::abs(sum)));
        }
      }
    }
  }
}

TEST_CASE("x dPhi expansion agrees with projection of the derivative") {
  // project x R'_{N,n} on R̄_{N,m} with weight x^{p+1}, using the exact derivative from the Jacobi form
  const int p = 1, N = 2;
  const double nu = N + 0.5 * p;
  const auto rule = gauss_legendre_01(80);
  auto dR = [&](int n, double x) {
    const double t = 1 - 2 * x * x;
    const double scale = std::sqrt(2.0) * ((n % 2) ? -1.0 : 1.0) * std::sqrt(2 * n + nu + 1);
    const double P = jacobi_eval({n, nu, 0.0}, t);
    const double dP = jacobi_derivative({n, nu, 0.0}, t) * (-4 * x);
    return scale * (N * std::pow(x, N - 1) * P + std::pow(x, N) * dP);
  };
  for (int n = 0; n < 10; ++n) {
    const auto t = x_dphi_expansion(unit(p, N, 10, static_cast<std::size_t>(n)));
    for (int m = 0; m < 10; ++m) {
      const double proj = rule.integrate(
          [&](double x) { return std::pow(x, p + 1) * x * dR(n, x) * zernike_normalized_eval({p, N, m}, x); });
      CHECK(t.coeffs[static_cast<std::size_t>(m)] == doctest::Approx(proj).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("x dPhi expansion of an eigenfunction") {
  const auto s = solve({1, 10.0, 1}, 3);
  const auto& g = s.gpsfs[3];
  const auto t = x_dphi_expansion(g);
  for (double x : {0.2, 0.5, 0.8}) {
    double sum = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) sum += t.coeffs[k] * zernike_normalized_eval({1, 1, static_cast<int>(k)}, x);
    const double h = 1e-6;
    const double fd = x * (radial_eval(g, x + h) - radial_eval(g, x - h)) / (2 * h);
    CHECK(std::abs(sum - fd) <= 1e-5);
  }
}

TEST_CASE("gamma of a single coefficient") {
  for (int p : {0, 1, 3})
    for (int N : {0, 2}) {
      const double c = 3.7;
      const double nu = N + 0.5 * p;
      const double expected = std::pow(2.0, -nu) * std::pow(c, nu + 0.5) / ((2 * N + p + 2) * std::tgamma(nu + 1));
      CHECK(gamma_first({p, c, N}, unit(p, N, 8, 0)) == doctest::Approx(expected).epsilon(1e-14));
    }
  ZernikeExpansion zero{1, 0, std::vector<double>(5, 0.0)};
  CHECK_THROWS_AS(gamma_first({1, 1.0, 0}, zero), DegenerateError);
}

TEST_CASE("gamma at large order uses the logarithmic prefactor") {
  // nu > 200; the direct formula would overflow in c^{nu+1/2}
  const ProblemParams params{1, 50.0, 250};
  const double nu = params.order();
  const double log_expected = -nu * std::log(2.0) + (nu + 0.5) * std::log(50.0) - std::log(2.0 * 250 + 3) - std::lgamma(nu + 1);
  const double g = gamma_first(params, unit(1, 250, 6, 0));
  CHECK(std::log(g) == doctest::Approx(log_expected).epsilon(1e-13));
}

TEST_CASE("small c ground eigenvalue") {
  const auto s = solve({1, 1e-3, 0}, 1);
  const double c = 1e-3;
  // leading term c^{nu+1/2} / (2^{nu+1} Gamma(nu+2)) with nu = 1/2, i.e. 2c / (3 sqrt(2 pi))
  const double expected = 2.0 * c / (3.0 * std::sqrt(2.0 * std::numbers::pi));
  CHECK(s.table.rows[0].gamma == doctest::Approx(expected).epsilon(1e-3));
  // consecutive ratio scales like c^2
  const double ratio = s.table.rows[1].gamma / s.table.rows[0].gamma;
  const auto t = solve({1, 2e-3, 0}, 1);
  const double ratio2 = t.table.rows[1].gamma / t.table.rows[0].gamma;
  CHECK(std::abs(ratio) < 1e-5);
  CHECK(ratio2 / ratio == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("gamma ratio properties") {
  const auto s = solve({1, kTwentyPi, 0}, 3);
  const auto h1 = expansion_of(s.system, 1), h2 = expansion_of(s.system, 2);
  const auto t1 = x_dphi_expansion(h1), t2 = x_dphi_expansion(h2);
  CHECK(gamma_ratio(h1, t1, h2, t2) * gamma_ratio(h2, t2, h1, t1) == doctest::Approx(1.0).epsilon(1e-14));
  ZernikeExpansion short_h{1, 0, std::vector<double>(3, 0.0)};
  CHECK_THROWS_AS(gamma_ratio(h1, t1, short_h, t2), ParameterError);
  ZernikeExpansion other_N{1, 1, h2.coeffs};
  CHECK_THROWS_AS(gamma_ratio(h1, t1, other_N, t2), ParameterError);
  ZernikeExpansion zero{1, 0, std::vector<double>(h1.size(), 0.0)};
  CHECK_THROWS_AS(gamma_ratio(h1, t1, h2, zero), DegenerateError);
}

TEST_CASE("eigenvalue chain relations") {
  for (int N : {0, 1, 2, 3}) {
    const auto s = solve({1, kTwentyPi, N}, 40);
    const auto& rows = s.table.rows;
    REQUIRE(rows.size() == 41);
    CHECK(s.table.phase_order == N % 4);
    CHECK(s.table.diagnostics.empty());
    bool decayed = false;
    for (std::size_t n = 0; n < rows.size(); ++n) {
      const auto& r = rows[n];
      CHECK(r.nu_magnitude == doctest::Approx(std::sqrt(kTwentyPi) * std::abs(r.gamma)).epsilon(1e-15));
      CHECK(r.beta == doctest::Approx(r.gamma * std::pow(kTwentyPi, -1.0)).epsilon(1e-15));
      CHECK(r.alpha_magnitude == doctest::Approx(std::pow(2 * std::numbers::pi, 1.5) * std::abs(r.beta)).epsilon(1e-15));
      CHECK(r.energy_deficit >= -1e-10);
      CHECK(r.energy_deficit <= 1.0);
      if (n > 0) CHECK(r.nu_magnitude <= rows[n - 1].nu_magnitude + 1e-12);
      if (r.nu_magnitude < 1e-15) decayed = true;
      CHECK(r.below_chain_precision == (n > 0 && std::abs(r.gamma) < 1e-12 * std::abs(rows[0].gamma)));
    }
    CHECK(decayed);
    if (N == 0) CHECK(1.0 - rows[0].nu_magnitude <= 1e-8);
  }
}

TEST_CASE("assembled functions carry the table") {
  const auto s = solve({2, 5.0, 1}, 4);
  REQUIRE(s.gpsfs.size() == 5);
  for (std::size_t n = 0; n < 5; ++n) {
    const auto& g = s.gpsfs[n];
    CHECK(g.n == static_cast<int>(n));
    CHECK(g.gamma == s.table.rows[n].gamma);
    CHECK(g.chi == s.system.chi[n]);
    CHECK(g.phase_order == 1);
    CHECK(g.alpha_magnitude() == doctest::Approx(s.table.rows[n].alpha_magnitude).epsilon(1e-15));
    CHECK(g.energy_deficit() == doctest::Approx(s.table.rows[n].energy_deficit).epsilon(1e-15).scale(1.0));
  }
  CHECK_THROWS_AS(eigenvalue_chain({2, 5.0, 1}, s.system, 10), ParameterError);
}

TEST_CASE("full eigenfunctions in two and three dimensions") {
  const auto s3 = solve({1, kTwentyPi, 0}, 2);
  const double pt[] = {0.0, 0.0, 0.5};
  const auto v = full_eigenfunction_eval_2d3d(s3.gpsfs[1], 1, pt);
  CHECK(v.real() == doctest::Approx(radial_eval(s3.gpsfs[1], 0.5) / std::sqrt(4 * std::numbers::pi)).epsilon(1e-14));
  CHECK(v.imag() == 0.0);

  const auto s2 = solve({0, 10.0, 1}, 1);
  const double r = 0.6, theta = 0.4, dtheta = 1.1;
  const double a[] = {r * std::cos(theta), r * std::sin(theta)};
  const double b[] = {r * std::cos(theta + dtheta), r * std::sin(theta + dtheta)};
  const auto va = full_eigenfunction_eval_2d3d(s2.gpsfs[0], 1, a);
  const auto vb = full_eigenfunction_eval_2d3d(s2.gpsfs[0], 1, b);
  CHECK(std::abs(vb - va * std::polar(1.0, dtheta)) <= 1e-13);
  const auto vc = full_eigenfunction_eval_2d3d(s2.gpsfs[0], 2, a);
  CHECK(std::abs(vc - std::conj(va)) <= 1e-15);
  const double origin[] = {0.0, 0.0};
  CHECK(full_eigenfunction_eval_2d3d(s2.gpsfs[0], 1, origin) == std::complex<double>(0.0, 0.0));

  // sphere integral of |psi|^2 at fixed radius, product Gauss rule in cos(theta) and uniform in phi
  const auto s31 = solve({1, kTwentyPi, 1}, 1);
  const auto rule = gauss_legendre_01(24);
  const int nphi = 24;
  for (int m = 1; m <= 3; ++m) {
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double ct = 2 * rule.nodes[i] - 1, st = std::sqrt(1 - ct * ct);
      for (int j = 0; j < nphi; ++j) {
        const double phi = 2 * std::numbers::pi * j / nphi;
        const double q[] = {r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
        total += 2 * rule.weights[i] * (2 * std::numbers::pi / nphi) * std::norm(full_eigenfunction_eval_2d3d(s31.gpsfs[0], m, q));
      }
    }
    CHECK(total == doctest::Approx(std::pow(radial_eval(s31.gpsfs[0], r), 2)).epsilon(1e-10));
  }

  const auto s4 = solve({2, 2.0, 0}, 0);
  const double p4[] = {0.1, 0.1, 0.1, 0.1};
  CHECK_THROWS_AS(full_eigenfunction_eval_2d3d(s4.gpsfs[0], 1, p4), UnsupportedDimensionError);
  CHECK_THROWS_AS(full_eigenfunction_eval_2d3d(s3.gpsfs[0], 2, pt), ParameterError);
  const double outside[] = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(full_eigenfunction_eval_2d3d(s3.gpsfs[0], 1, outside), DomainError);
}
