#pragma once

#include <cstdint>

namespace vofrac {

/// Truncation policy for the Mittag-Leffler series.
struct SeriesControl {
  double rel_tol = 1e-14;
  double abs_tol = 1e-300;
  int k_max = 10000;
  int k_min = 8;

  /// Throws InvalidArgument unless rel_tol > 0 and k_max > k_min >= 1.
  void validate() const;
};

/// Arguments of the nabla discrete Mittag-Leffler function E_{alpha,beta}(lambda, z).
struct MLParams {
  double alpha = 0.5;
  double beta = 1.0;
  double lambda = 0.0;
  std::int64_t z = 1;  ///< integer grid lag t - rho(s) >= 1

  void validate() const;
};

enum class MLMethod {
  Series,      ///< truncated power series in lambda
  FiniteForm,  ///< exact finite sum in the Newton basis (integer lag)
};

struct MLResult {
  double value = 0.0;
  /// Index K of the last series term that was accumulated.
  int terms = 0;
  MLMethod method = MLMethod::Series;
  /// sum |term_k| / |sum term_k| over the accumulated terms.
  double cancellation = 1.0;
};

/// Generalized rising function t^{(alpha)} = Gamma(t + alpha) / Gamma(t).
///
/// Non-negative integer orders use the finite product, t = 0 maps to 0, and
/// every other case goes through log-gamma. Poles of Gamma and negative
/// non-integer t raise DomainError.
double rising(double t, double alpha);

/// 1 / Gamma(x), with the value 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// log |Gamma(x)|, reentrant.
double log_gamma(double x);

/// Nabla discrete Mittag-Leffler function
///
///   E_{alpha,beta}(lambda, z) = sum_k lambda^k z^{(k alpha + beta - 1)} / Gamma(alpha k + beta).
///
/// The series is summed with Neumaier compensation. Terms come from log-gamma
/// with the sign of lambda^k tracked separately. Summation stops at the first
/// K >= k_min where the term ratio q = |t_K / t_{K-1}| is below one and both
/// |t_K| and the geometric tail bound |t_K| q / (1 - q) are at most
/// rel_tol |S| + abs_tol. The term ratio decreases monotonically in k for
/// integer lags, so that bound dominates the true remainder.
///
/// When the accumulated terms cancel so strongly that double rounding alone
/// exceeds rel_tol (large lags with lambda near -1, as in the
/// Atangana-Baleanu kernels), the value is taken from the exact finite
/// Newton-basis form instead and `method` reports FiniteForm.
///
/// Throws DomainError on invalid parameters, NoConvergence when k_max terms do
/// not satisfy the stopping rule.
MLResult ml(const MLParams& params, const SeriesControl& ctrl = {});

/// Exact evaluation for integer z >= 1 by expanding the k-dependence of each
/// term in the binomial basis: sum_i c_i lambda^i / (1 - lambda)^{i + 1}.
/// All c_i are positive, so there is no cancellation for lambda >= 0 and only
/// a geometric alternation with ratio |lambda| / (1 - lambda) otherwise.
double ml_finite(const MLParams& params);

/// Kernel of the discrete Atangana-Baleanu operators:
/// E_{alpha}(-alpha / (1 - alpha), z). Requires 0 < alpha < 1/2.
double ml_ab(double alpha, std::int64_t z, const SeriesControl& ctrl = {});

}  // namespace vofrac
