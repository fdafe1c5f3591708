#include "vofrac/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "compensated_sum.hpp"
#include "vofrac/errors.hpp"

namespace vofrac {

const char* to_string(Side side) { return side == Side::Left ? "left" : "right"; }

const char* to_string(Family family) {
  switch (family) {
    case Family::FracSum: return "frac_sum";
    case Family::GenIntegral: return "gen_integral";
    case Family::ABSum: return "ab_sum";
    case Family::ABRDiff: return "abr_diff";
    case Family::ABCDiff: return "abc_diff";
  }
  return "?";
}

const char* to_string(Variant variant) {
  switch (variant) {
    case Variant::TypeI: return "type1";
    case Variant::TypeII: return "type2";
    case Variant::Convolution: return "convolution";
  }
  return "?";
}

OperatorSpec::OperatorSpec(Side side_, Family family_, Variant variant_, OrderFunction order_,
                           Normalization norm_, SeriesControl ctrl_)
    : side(side_), family(family_), variant(variant_), order(std::move(order_)), norm(norm_),
      ctrl(ctrl_) {
  ctrl.validate();
  const OrderClass cls = order.order_class();
  bool ok = false;
  switch (family) {
    case Family::FracSum: ok = cls == OrderClass::Sum; break;
    case Family::ABSum: ok = cls == OrderClass::Sum || cls == OrderClass::ABSum; break;
    case Family::GenIntegral:
    case Family::ABRDiff:
    case Family::ABCDiff: ok = cls == OrderClass::Difference; break;
  }
  if (!ok) {
    throw DomainError(std::string("operator ") + to_string(family) + " does not accept order class " +
                      to_string(cls));
  }
}

KernelCache::KernelCache(SeriesControl ctrl) : ctrl_(ctrl) { ctrl_.validate(); }

std::size_t KernelCache::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = k.alpha_bits * 0x9E3779B97F4A7C15ULL;
  h ^= static_cast<std::uint64_t>(k.lag) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h ^ (k.ml ? 0x5bd1e995ULL : 0ULL));
}

double KernelCache::power(double alpha, int lag) {
  const Key key{std::bit_cast<std::uint64_t>(alpha), lag, false};
  auto it = values_.find(key);
  if (it == values_.end()) {
    const double v = rising(static_cast<double>(lag), alpha - 1.0) * reciprocal_gamma(alpha);
    it = values_.emplace(key, v).first;
  }
  return scale_ * it->second;
}

double KernelCache::mittag_leffler(double alpha, int lag) {
  const Key key{std::bit_cast<std::uint64_t>(alpha), lag, true};
  auto it = values_.find(key);
  if (it == values_.end()) {
    it = values_.emplace(key, ml_ab(alpha, lag, ctrl_)).first;
  }
  return scale_ * it->second;
}

namespace {

// Integral part of a family: the kernel sum plus, for AB sums, the local term.
class IntegralKernel {
 public:
  IntegralKernel(const OperatorSpec& spec, Family family, KernelCache& cache)
      : spec_(spec), family_(family), cache_(cache) {}

  double weight(int t, int s) const {
    const double alpha = sampled_order(t, s);
    const int lag = std::abs(t - s) + 1;
    switch (family_) {
      case Family::FracSum:
        return cache_.power(alpha, lag);
      case Family::ABSum:
        if (alpha == 0.0) return 0.0;
        return alpha / b_of(alpha, spec_.norm) * cache_.power(alpha, lag);
      case Family::GenIntegral:
        return b_of(alpha, spec_.norm) / (1.0 - alpha) * cache_.mittag_leffler(alpha, lag);
      default:
        break;
    }
    throw InvalidArgument("not an integral family");
  }

  // Coefficient of f(t) outside the sum; the AB local part keeps alpha(t) in
  // every variant.
  double local(int t) const {
    if (family_ != Family::ABSum) return 0.0;
    const double alpha = spec_.order[t];
    return (1.0 - alpha) / b_of(alpha, spec_.norm);
  }

 private:
  double sampled_order(int t, int s) const {
    switch (spec_.variant) {
      case Variant::TypeI: return spec_.order[t];
      case Variant::TypeII: return spec_.order[s];
      case Variant::Convolution: return spec_.order[std::abs(t - s)];
    }
    return spec_.order[t];
  }

  const OperatorSpec& spec_;
  Family family_;
  KernelCache& cache_;
};

void check_grid(const OperatorSpec& spec, const GridFunction& f) {
  if (!(f.grid() == spec.grid())) {
    throw DomainError("operator: function and order live on different grids");
  }
}

GridFunction integral(const OperatorSpec& spec, Family family, const GridFunction& f,
                      KernelCache& cache) {
  check_grid(spec, f);
  const int n = spec.grid().n();
  const IntegralKernel kernel(spec, family, cache);
  const bool endpoint_zero = family == Family::GenIntegral;
  std::vector<double> out;

  if (spec.side == Side::Left) {
    if (f.lo() > 1) {
      throw DomainError(std::string("left ") + to_string(family) +
                        ": input must be supported from offset 1 (t = a + 1)");
    }
    const int first = endpoint_zero ? 0 : 1;
    for (int t = first; t <= f.hi(); ++t) {
      detail::CompensatedSum acc;
      if (t >= 1) acc.add(kernel.local(t) * f[t]);
      for (int s = 1; s <= t; ++s) acc.add(kernel.weight(t, s) * f[s]);
      out.push_back(acc.value());
    }
    return GridFunction(f.grid(), first, f.hi(), std::move(out));
  }

  if (f.hi() < n - 1) {
    throw DomainError(std::string("right ") + to_string(family) +
                      ": input must be supported up to offset n - 1 (t = b - 1)");
  }
  const int last = endpoint_zero ? n : n - 1;
  for (int t = f.lo(); t <= last; ++t) {
    detail::CompensatedSum acc;
    if (t <= n - 1) acc.add(kernel.local(t) * f[t]);
    for (int s = t; s <= n - 1; ++s) acc.add(kernel.weight(t, s) * f[s]);
    out.push_back(acc.value());
  }
  return GridFunction(f.grid(), f.lo(), last, std::move(out));
}

GridFunction apply_with(const OperatorSpec& spec, const GridFunction& f, KernelCache& cache) {
  const int n = spec.grid().n();
  switch (spec.family) {
    case Family::FracSum:
    case Family::ABSum:
    case Family::GenIntegral:
      return integral(spec, spec.family, f, cache);

    case Family::ABRDiff: {
      const GridFunction e = integral(spec, Family::GenIntegral, f, cache);
      std::vector<double> out;
      if (spec.side == Side::Left) {
        // e(0) = 0 by the empty-sum convention.
        for (int t = 1; t <= e.hi(); ++t) out.push_back(e[t] - e[t - 1]);
        return GridFunction(f.grid(), 1, e.hi(), std::move(out));
      }
      // -Delta e, with e(n) = 0.
      for (int t = e.lo(); t <= n - 1; ++t) out.push_back(e[t] - e[t + 1]);
      return GridFunction(f.grid(), e.lo(), n - 1, std::move(out));
    }

    case Family::ABCDiff: {
      if (spec.side == Side::Left) {
        const GridFunction e = integral(spec, Family::GenIntegral, nabla(f), cache);
        std::vector<double> out(e.values().begin() + 1, e.values().end());
        return GridFunction(f.grid(), 1, e.hi(), std::move(out));
      }
      const GridFunction e = integral(spec, Family::GenIntegral, delta(f), cache);
      std::vector<double> out;
      for (int t = e.lo(); t <= n - 1; ++t) out.push_back(-e[t]);
      return GridFunction(f.grid(), e.lo(), n - 1, std::move(out));
    }
  }
  throw InvalidArgument("unknown operator family");
}

GridFunction checked(Family expected, const OperatorSpec& spec, const GridFunction& f,
                     KernelCache* cache) {
  if (spec.family != expected) {
    throw InvalidArgument(std::string("expected a ") + to_string(expected) + " spec, got " +
                          to_string(spec.family));
  }
  return apply(spec, f, cache);
}

}  // namespace

GridFunction apply(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  if (cache != nullptr) return apply_with(spec, f, *cache);
  KernelCache local(spec.ctrl);
  return apply_with(spec, f, local);
}

GridFunction frac_sum(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  return checked(Family::FracSum, spec, f, cache);
}
GridFunction gen_integral(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  return checked(Family::GenIntegral, spec, f, cache);
}
GridFunction ab_sum(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  return checked(Family::ABSum, spec, f, cache);
}
GridFunction abr_diff(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  return checked(Family::ABRDiff, spec, f, cache);
}
GridFunction abc_diff(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache) {
  return checked(Family::ABCDiff, spec, f, cache);
}

KernelMatrix kernel_matrix(const OperatorSpec& spec, KernelCache* cache) {
  KernelCache local(spec.ctrl);
  KernelCache& kc = cache != nullptr ? *cache : local;

  const int n = spec.grid().n();
  const int size = n + 1;
  const bool differences = spec.family == Family::ABRDiff || spec.family == Family::ABCDiff;
  const Family inner = differences ? Family::GenIntegral : spec.family;
  const IntegralKernel kernel(spec, inner, kc);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(size, size);
  if (spec.side == Side::Left) {
    for (int t = 1; t <= n; ++t) {
      w(t, t) += kernel.local(t);
      for (int s = 1; s <= t; ++s) w(t, s) += kernel.weight(t, s);
    }
  } else {
    for (int t = 0; t <= n - 1; ++t) {
      w(t, t) += kernel.local(t);
      for (int s = t; s <= n - 1; ++s) w(t, s) += kernel.weight(t, s);
    }
  }

  KernelMatrix k{spec.grid(), spec.side, 0, n, {}};
  const bool left = spec.side == Side::Left;
  if (!differences) {
    k.entries = std::move(w);
    if (inner != Family::GenIntegral) {
      k.row_lo = left ? 1 : 0;
      k.row_hi = left ? n : n - 1;
    }
    return k;
  }

  k.row_lo = left ? 1 : 0;
  k.row_hi = left ? n : n - 1;
  Eigen::MatrixXd stencil = Eigen::MatrixXd::Zero(size, size);
  if (spec.family == Family::ABRDiff) {
    if (left) {
      for (int t = 1; t <= n; ++t) {
        stencil(t, t) = 1.0;
        stencil(t, t - 1) = -1.0;
      }
    } else {
      for (int t = 0; t <= n - 1; ++t) {
        stencil(t, t) = 1.0;
        stencil(t, t + 1) = -1.0;
      }
    }
    k.entries = stencil * w;
  } else {
    if (left) {
      for (int s = 1; s <= n; ++s) {
        stencil(s, s) = 1.0;
        stencil(s, s - 1) = -1.0;
      }
      k.entries = w * stencil;
      k.entries.row(0).setZero();
    } else {
      for (int s = 0; s <= n - 1; ++s) {
        stencil(s, s) = -1.0;
        stencil(s, s + 1) = 1.0;
      }
      k.entries = -(w * stencil);
      k.entries.row(n).setZero();
    }
  }
  return k;
}

GridFunction apply(const KernelMatrix& k, const GridFunction& f) {
  if (!(f.grid() == k.grid) || f.lo() != 0 || f.hi() != k.grid.n()) {
    throw DomainError("kernel matrix: input must be fully supported on the matrix grid");
  }
  const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), f.grid().size());
  std::vector<double> out;
  for (int t = k.row_lo; t <= k.row_hi; ++t) out.push_back(k.entries.row(t).dot(x));
  return GridFunction(f.grid(), k.row_lo, k.row_hi, std::move(out));
}

}  // namespace vofrac
