#include "vofrac/special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "compensated_sum.hpp"
#include "vofrac/errors.hpp"

namespace vofrac {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Integer orders up to this size use the explicit product.
constexpr double kMaxProductOrder = 4096.0;

// Largest lag for which the O(z^2) finite form is used as a fallback.
constexpr std::int64_t kMaxFiniteLag = 4096;

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

bool is_nonpositive_integer(double x) { return x <= 0.0 && is_integer(x); }

std::string describe(const MLParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << p.alpha << ", beta=" << p.beta << ", lambda=" << p.lambda
     << ", z=" << p.z << ")";
  return os.str();
}

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw InvalidArgument("series control: rel_tol must be positive");
  }
  if (!(abs_tol >= 0.0)) {
    throw InvalidArgument("series control: abs_tol must be non-negative");
  }
  if (k_min < 1 || k_max <= k_min) {
    throw InvalidArgument("series control: need k_max > k_min >= 1");
  }
}

void MLParams::validate() const {
  if (!(std::abs(lambda) < 1.0)) {
    throw DomainError("Mittag-Leffler: |lambda| < 1 required, got lambda=" +
                      std::to_string(lambda));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("Mittag-Leffler: alpha > 0 required");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("Mittag-Leffler: beta > 0 required");
  }
  if (z < 1) {
    throw DomainError("Mittag-Leffler: lag z >= 1 required");
  }
}

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

double rising(double t, double alpha) {
  if (!std::isfinite(t) || !std::isfinite(alpha)) throw DomainError("rising: arguments must be finite");
  if (alpha >= 0.0 && alpha <= kMaxProductOrder && is_integer(alpha)) {
    const auto m = static_cast<int>(alpha);
    double prod = 1.0;
    for (int k = 0; k < m; ++k) prod *= t + k;
    return prod;
  }
  if (t == 0.0) return 0.0;
  if (is_nonpositive_integer(t)) {
    throw DomainError("rising: t is a pole of Gamma");
  }
  if (t < 0.0) {
    throw DomainError("rising: negative non-integer t is not supported");
  }
  const double upper = t + alpha;
  if (is_nonpositive_integer(upper)) {
    throw DomainError("rising: t + alpha is a pole of Gamma");
  }
  if (upper > 0.0) {
    return std::exp(log_gamma(upper) - log_gamma(t));
  }
  // Gamma(upper) < 0 exactly when floor(upper) is odd.
  const double sign = (static_cast<long long>(std::floor(upper)) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_gamma(upper) - log_gamma(t));
}

double ml_finite(const MLParams& p) {
  p.validate();
  // term_k = lambda^k prod_{j=1}^{z-1} (a_j + b_j k), a_j = (beta-1+j)/j, b_j = alpha/j.
  // Multiply the linear factors in the basis C(k, i), using
  // k C(k, i) = i C(k, i) + (i + 1) C(k, i + 1).
  const auto degree = static_cast<std::size_t>(p.z - 1);
  std::vector<double> c(degree + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t j = 1; j <= degree; ++j) {
    const double a = (p.beta - 1.0 + static_cast<double>(j)) / static_cast<double>(j);
    const double b = p.alpha / static_cast<double>(j);
    for (std::size_t i = j; i >= 1; --i) {
      const double di = static_cast<double>(i);
      c[i] = c[i] * (a + b * di) + b * di * c[i - 1];
    }
    c[0] *= a;
  }
  // sum_k C(k, i) lambda^k = lambda^i / (1 - lambda)^{i + 1}.
  const double ratio = p.lambda / (1.0 - p.lambda);
  double power = 1.0 / (1.0 - p.lambda);
  detail::CompensatedSum sum;
  for (double ci : c) {
    sum.add(ci * power);
    power *= ratio;
  }
  return sum.value();
}

MLResult ml(const MLParams& p, const SeriesControl& ctrl) {
  p.validate();
  ctrl.validate();

  const double z = static_cast<double>(p.z);
  const double head = rising(z, p.beta - 1.0) * reciprocal_gamma(p.beta);
  if (p.lambda == 0.0) {
    return MLResult{head, 0, MLMethod::Series, 1.0};
  }

  const double log_lambda = std::log(std::abs(p.lambda));
  const bool alternating = p.lambda < 0.0;
  const double log_gamma_z = log_gamma(z);

  detail::CompensatedSum sum;
  sum.add(head);
  double abs_sum = std::abs(head);
  double prev_mag = std::abs(head);
  int last = -1;

  for (int k = 1; k <= ctrl.k_max; ++k) {
    const double shifted = static_cast<double>(k) * p.alpha + p.beta;
    const double log_mag = static_cast<double>(k) * log_lambda +
                           log_gamma(z + shifted - 1.0) - log_gamma_z - log_gamma(shifted);
    const double mag = std::exp(log_mag);
    sum.add((alternating && (k % 2 == 1)) ? -mag : mag);
    abs_sum += mag;

    if (k >= ctrl.k_min) {
      const double q = prev_mag > 0.0 ? mag / prev_mag : 0.0;
      const double bound = ctrl.rel_tol * std::abs(sum.value()) + ctrl.abs_tol;
      if (q < 1.0 && mag <= bound && mag * q <= bound * (1.0 - q)) {
        last = k;
        break;
      }
    }
    prev_mag = mag;
  }
  if (last < 0) {
    throw NoConvergence("Mittag-Leffler series did not converge within k_max=" +
                        std::to_string(ctrl.k_max) + " terms " + describe(p));
  }

  MLResult result;
  result.value = sum.value();
  result.terms = last;
  result.cancellation =
      result.value != 0.0 ? abs_sum / std::abs(result.value) : std::numeric_limits<double>::infinity();
  // Rounding of the individual terms alone exceeds the requested accuracy.
  if (kEps * result.cancellation > ctrl.rel_tol / 8.0 && p.z <= kMaxFiniteLag) {
    result.value = ml_finite(p);
    result.method = MLMethod::FiniteForm;
  }
  return result;
}

double ml_ab(double alpha, std::int64_t z, const SeriesControl& ctrl) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw DomainError("ml_ab: order must lie in (0, 1/2)");
  }
  return ml(MLParams{alpha, 1.0, -alpha / (1.0 - alpha), z}, ctrl).value;
}

}  // namespace vofrac
