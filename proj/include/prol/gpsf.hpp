#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "prol/spectral_core.hpp"

namespace prol {

/// Coefficients over R̄_{N,k}^p (equivalently over T_{N,k}^p).
struct ZernikeExpansion {
  int p = 0;
  int N = 0;
  std::vector<double> coeffs;

  std::size_t size() const { return coeffs.size(); }
};

/// One radial GPSF Φ_{N,n} with its eigenvalue chain.
struct RadialGpsf {
  ProblemParams params;
  int n = 0;
  ZernikeExpansion expansion;
  double chi = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double nu_magnitude = 0.0;
  /// alpha and nu carry the phase i^N; this is N mod 4.
  int phase_order = 0;

  double alpha_magnitude() const;
  double energy_deficit() const { return 1.0 - nu_magnitude * nu_magnitude; }
};

struct EigenvalueRow {
  int n = 0;
  double chi = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double alpha_magnitude = 0.0;
  double nu_magnitude = 0.0;
  double energy_deficit = 0.0;
  /// |gamma_n| < 1e-12 |gamma_0|: the ratio chain no longer certifies digits.
  bool below_chain_precision = false;
};

struct EigenvalueTable {
  ProblemParams params;
  int phase_order = 0;
  std::vector<EigenvalueRow> rows;
  /// Non-fatal findings such as |nu| increasing between consecutive rows.
  std::vector<std::string> diagnostics;
};

/// Number h(N,p) of orthonormal surface harmonics of degree N on the sphere
/// in p+2 dimensions.
std::uint64_t surface_harmonic_count(int N, int p);

ZernikeExpansion expansion_of(const EigenSystem& system, std::size_t n);

/// Φ(x) = sum_k h_k R̄_{N,k}^p(x), one Clenshaw sweep.
double radial_eval(const ZernikeExpansion& h, double x);
double radial_eval(const RadialGpsf& g, double x);

/// φ(x) = x^{(p+1)/2} Φ(x).
double weighted_radial_eval(const ZernikeExpansion& h, double x);
double weighted_radial_eval(const RadialGpsf& g, double x);

/// Coefficients h̃ with x Φ'(x) = sum_k h̃_k R̄_{N,k}^p(x).
ZernikeExpansion x_dphi_expansion(const ZernikeExpansion& h);
ZernikeExpansion x_dphi_expansion(const RadialGpsf& g);

/// gamma_{N,0} from the coefficients of the n = 0 eigenvector.
double gamma_first(const ProblemParams& params, const ZernikeExpansion& h0);

/// gamma_{N,n+1} / gamma_{N,n} = (h̃^n . h^{n+1}) / (h̃^{n+1} . h^n).
double gamma_ratio(const ZernikeExpansion& hn, const ZernikeExpansion& hn_tilde, const ZernikeExpansion& hnp1,
                   const ZernikeExpansion& hnp1_tilde);

/// gamma, beta, |alpha|, |nu| and energy deficits for n = 0..n_max.
EigenvalueTable eigenvalue_chain(const ProblemParams& params, const EigenSystem& system, int n_max);

std::vector<RadialGpsf> assemble(const EigenSystem& system, const EigenvalueTable& table);

/// ψ_{N,n,m}(x) = Φ_{N,n}(|x|) S_N^m(x/|x|) for D = 2 or 3, m = 1..h(N,p).
///
/// D = 2: m = 1 is e^{iNθ}/sqrt(2π), m = 2 its conjugate.
/// D = 3: m enumerates Y_N^{m'} with m' = m - N - 1 = -N..N (Condon-Shortley).
std::complex<double> full_eigenfunction_eval_2d3d(const RadialGpsf& g, int m, std::span<const double> point);

}  // namespace prol
