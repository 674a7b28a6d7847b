#include "prol/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "prol/errors.hpp"
#include "prol/kernels.hpp"

namespace prol {

void ProblemParams::validate() const {
  if (p < 0) throw ParameterError("p must be non-negative (D >= 2), got " + std::to_string(p));
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("bandlimit c must be positive and finite");
  if (N < 0) throw ParameterError("angular order N must be non-negative, got " + std::to_string(N));
}

double TridiagonalOperator::inf_norm() const {
  double norm = 0.0;
  const std::size_t K = size();
  for (std::size_t i = 0; i < K; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < K) row += std::abs(offdiag[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

std::vector<double> TridiagonalOperator::apply(const std::vector<double>& x) const {
  const std::size_t K = size();
  std::vector<double> y(K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += offdiag[i - 1] * x[i - 1];
    if (i + 1 < K) s += offdiag[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double kappa(int p, int N, int n) {
  const double s = 2.0 * n + N + 0.5 * p;
  return (s + 0.5) * (s + 1.5);
}

TridiagonalOperator build_operator(const ProblemParams& params, std::size_t K) {
  params.validate();
  if (K < 2) throw ParameterError("build_operator: truncation K must be at least 2");
  TridiagonalOperator op;
  op.params = params;
  kernels::operator_entries<double>(params.p, params.N, params.c, K, op.diag, op.offdiag);
  return op;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct SturmData {
  const std::vector<double>& diag;
  std::vector<double> e2;
  double pivmin;

  explicit SturmData(const TridiagonalOperator& op) : diag(op.diag) {
    e2.resize(op.offdiag.size());
    double emax = 1.0;
    for (std::size_t i = 0; i < e2.size(); ++i) {
      e2[i] = op.offdiag[i] * op.offdiag[i];
      emax = std::max(emax, e2[i]);
    }
    pivmin = std::numeric_limits<double>::min() * emax;
  }

  /// Number of eigenvalues strictly below x.
  std::size_t count_below(double x) const {
    std::size_t count = 0;
    double d = diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
      d = (diag[i] - x) - e2[i - 1] / d;
      if (std::abs(d) < pivmin) d = -pivmin;
      if (d < 0.0) ++count;
    }
    return count;
  }
};

void gershgorin(const TridiagonalOperator& op, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const std::size_t K = op.size();
  for (std::size_t i = 0; i < K; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(op.offdiag[i - 1]);
    if (i + 1 < K) r += std::abs(op.offdiag[i]);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  lo -= pad;
  hi += pad;
}

/// k-th smallest (0-based) eigenvalue by bisection.
double bisect_eigenvalue(const SturmData& sturm, std::size_t k, double lo, double hi) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + sturm.pivmin) break;
    if (sturm.count_below(mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// LU factorization of a shifted tridiagonal matrix with partial pivoting.
class ShiftedTridiagonalLU {
 public:
  /// Returns false when an exactly zero pivot appears.
  bool factor(const TridiagonalOperator& op, double shift) {
    const std::size_t K = op.size();
    d_.resize(K);
    dl_ = op.offdiag;
    du_ = op.offdiag;
    du2_.assign(K > 2 ? K - 2 : 0, 0.0);
    swapped_.assign(K > 0 ? K - 1 : 0, false);
    for (std::size_t i = 0; i < K; ++i) d_[i] = op.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < K; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) return false;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < K) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    return K == 0 || d_[K - 1] != 0.0;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t K = d_.size();
    for (std::size_t i = 0; i + 1 < K; ++i) {
      if (swapped_[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl_[i] * b[i];
    }
    b[K - 1] /= d_[K - 1];
    if (K > 1) b[K - 2] = (b[K - 2] - du_[K - 2] * b[K - 1]) / d_[K - 2];
    for (std::size_t i = K - 2; i-- > 0;) b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

 private:
  std::vector<double> d_, dl_, du_, du2_;
  std::vector<bool> swapped_;
};

double norm2(const std::vector<double>& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// One inverse-power step (B - shift) x = b, normalized. Retries once with a
/// perturbed shift if the factorization breaks down.
std::vector<double> inverse_step(const TridiagonalOperator& op, double shift, const std::vector<double>& b,
                                 double bnorm) {
  ShiftedTridiagonalLU lu;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double s = attempt == 0 ? shift : shift + 1e-13 * bnorm;
    if (!lu.factor(op, s)) continue;
    std::vector<double> x = b;
    lu.solve(x);
    if (!all_finite(x)) continue;
    const double nrm = norm2(x);
    if (nrm == 0.0) continue;
    for (double& v : x) v /= nrm;
    return x;
  }
  throw NumericalError("inverse iteration: singular shift " + std::to_string(shift) + " persisted after perturbation");
}

double rayleigh_quotient(const TridiagonalOperator& op, const std::vector<double>& h) {
  const auto bh = op.apply(h);
  return std::inner_product(h.begin(), h.end(), bh.begin(), 0.0);
}

std::vector<double> start_vector(std::size_t K, std::size_t index) {
  std::mt19937 gen(static_cast<std::uint32_t>(0x5eed + 7919 * index));
  std::vector<double> v(K);
  for (double& x : v) x = static_cast<double>(gen()) / 4294967296.0 * 2.0 - 1.0;
  const double nrm = norm2(v);
  for (double& x : v) x /= nrm;
  return v;
}

std::vector<double> eigenvector(const TridiagonalOperator& op, double lambda, std::size_t index, double bnorm) {
  constexpr double kTiny = 1e-280;
  auto h = start_vector(op.size(), index);
  for (int iter = 0; iter < 16; ++iter) {
    auto next = inverse_step(op, lambda, h, bnorm);
    double align = std::inner_product(next.begin(), next.end(), h.begin(), 0.0);
    if (align < 0.0)
      for (double& v : next) v = -v;
    double change = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k)
      if (std::abs(next[k]) > kTiny) change = std::max(change, std::abs(next[k] - h[k]) / std::abs(next[k]));
    h = std::move(next);
    if (iter >= 2 && change < 1e-12) break;
  }
  // refinement step shifted by the Ritz value
  const double ritz = rayleigh_quotient(op, h);
  auto refined = inverse_step(op, ritz, h, bnorm);
  if (std::inner_product(refined.begin(), refined.end(), h.begin(), 0.0) < 0.0)
    for (double& v : refined) v = -v;
  return refined;
}

/// h_0 > 0 for even n, < 0 for odd n; below 1e-290 the first coefficient
/// above that threshold decides, with parity factor (-1)^k.
bool apply_sign_convention(std::vector<double>& h, std::size_t n) {
  constexpr double kUnderflow = 1e-290;
  const double want = (n % 2 == 0) ? 1.0 : -1.0;
  bool fallback = false;
  std::size_t k = 0;
  if (std::abs(h[0]) < kUnderflow) {
    fallback = true;
    while (k < h.size() && std::abs(h[k]) <= kUnderflow) ++k;
    if (k == h.size()) return fallback;
  }
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  if (h[k] * parity * want < 0.0)
    for (double& v : h) v = -v;
  return fallback;
}

}  // namespace

EigenSystem eigendecompose(const TridiagonalOperator& op, std::size_t n_keep) {
  const std::size_t K = op.size();
  if (n_keep > K) throw ParameterError("eigendecompose: n_keep exceeds the operator size");
  EigenSystem sys;
  sys.op = op;
  if (n_keep == 0) return sys;

  const SturmData sturm(op);
  double lo, hi;
  gershgorin(op, lo, hi);
  const double bnorm = op.inf_norm();

  // smallest t with #{|lambda| < t} >= n_keep
  double t_lo = 0.0;
  double t_hi = std::max(std::abs(lo), std::abs(hi));
  auto count_abs = [&](double t) { return sturm.count_below(t) - sturm.count_below(-t); };
  if (count_abs(t_hi) < n_keep) t_hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (mid <= t_lo || mid >= t_hi) break;
    const std::size_t cnt = count_abs(mid);
    if (cnt >= n_keep)
      t_hi = mid;
    else
      t_lo = mid;
    if (cnt == n_keep) break;
  }
  const std::size_t first = sturm.count_below(-t_hi);
  const std::size_t last = sturm.count_below(t_hi);

  std::vector<double> values;
  values.reserve(last - first);
  for (std::size_t k = first; k < last; ++k) values.push_back(bisect_eigenvalue(sturm, k, lo, hi));
  std::sort(values.begin(), values.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });
  values.resize(std::min(values.size(), n_keep));
  if (values.size() < n_keep) throw NumericalError("eigendecompose: bisection located fewer eigenvalues than requested");

  sys.chi.resize(n_keep);
  sys.vectors.resize(n_keep);
  for (std::size_t n = 0; n < n_keep; ++n) {
    auto h = eigenvector(op, values[n], n, bnorm);
    if (apply_sign_convention(h, n)) {
      std::ostringstream msg;
      msg << "eigenvector " << n << ": |h_0| below 1e-290, sign taken from first representable coefficient";
      sys.diagnostics.push_back(msg.str());
    }
    sys.chi[n] = rayleigh_quotient(op, h);
    sys.vectors[n] = std::move(h);
  }

  std::vector<double> sorted = sys.chi;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] <= 1e-8 * bnorm) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "near-degenerate eigenvalues " << sorted[i - 1] << " and " << sorted[i];
      sys.diagnostics.push_back(msg.str());
    }
  }
  return sys;
}

std::size_t initial_truncation(const ProblemParams& params, int n_max) {
  params.validate();
  if (n_max < 0) throw ParameterError("n_max must be non-negative");
  const auto a = static_cast<std::size_t>(2 * n_max + 32);
  const auto b = static_cast<std::size_t>(std::ceil(params.c)) + static_cast<std::size_t>(n_max) + 32;
  return std::max(a, b);
}

bool tail_is_small(const EigenSystem& system, double tol) {
  const std::size_t K = system.truncation();
  for (const auto& h : system.vectors) {
    const double bound = tol * norm2(h);
    if (std::abs(h[K - 1]) > bound || std::abs(h[K - 2]) > bound) return false;
  }
  return true;
}

TruncatedSystem solve_truncated(const ProblemParams& params, int n_max, double tol) {
  if (!(tol > 0.0 && tol <= 1.0)) throw ParameterError("truncation tolerance must lie in (0,1]");
  std::size_t K = initial_truncation(params, n_max);
  const auto n_keep = static_cast<std::size_t>(n_max) + 1;
  for (int doubling = 0; doubling <= 6; ++doubling) {
    auto sys = eigendecompose(build_operator(params, K), n_keep);
    if (tail_is_small(sys, tol)) return {K, std::move(sys)};
    K *= 2;
  }
  std::ostringstream msg;
  msg << "truncation: eigenvector tails above " << tol << " after 6 doublings (p=" << params.p << ", c=" << params.c
      << ", N=" << params.N << ", n_max=" << n_max << ", last K=" << K / 2 << ")";
  throw TruncationError(msg.str());
}

std::size_t choose_truncation(const ProblemParams& params, int n_max, double tol) {
  return solve_truncated(params, n_max, tol).K;
}

}  // namespace prol
