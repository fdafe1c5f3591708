#include "vofrac/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "compensated_sum.hpp"
#include "vofrac/errors.hpp"

namespace vofrac {

namespace {

struct NamedIdentity {
  IdentityId id;
  const char* name;
};

constexpr NamedIdentity kNames[] = {
    {IdentityId::SumIBP1, "SumIBP-1"},   {IdentityId::SumIBP2, "SumIBP-2"},
    {IdentityId::ABSumIBP1, "ABSumIBP-1"}, {IdentityId::ABSumIBP2, "ABSumIBP-2"},
    {IdentityId::GIOIBP1, "GIO-IBP-1"},  {IdentityId::GIOIBP2, "GIO-IBP-2"},
    {IdentityId::Main1, "Main-1"},       {IdentityId::Main2, "Main-2"},
    {IdentityId::Main3, "Main-3"},       {IdentityId::Main4, "Main-4"},
};

// sum_{t = a+1}^{b-1} x(t) y(t)
double interior_pairing(const GridFunction& x, const GridFunction& y) {
  const int n = x.grid().n();
  detail::CompensatedSum acc;
  for (int t = 1; t <= n - 1; ++t) acc.add(x.at(t) * y.at(t));
  return acc.value();
}

void require_full(const GridFunction& f, const OrderFunction& alpha, const char* what) {
  if (!(f.grid() == alpha.grid()) || f.lo() != 0 || f.hi() != alpha.grid().n()) {
    throw DomainError(std::string("identity check: ") + what +
                      " must be fully supported on the order's grid");
  }
}

// Runs the operator through a cache that is temporarily scaled.
GridFunction scaled_apply(const OperatorSpec& spec, const GridFunction& f, KernelCache& cache,
                          double scale) {
  cache.set_scale(scale);
  GridFunction out = apply(spec, f, &cache);
  cache.set_scale(1.0);
  return out;
}

// Both sides of an adjoint pairing sum f * (Left op_l g) = sum g * (Right op_r f).
IdentityReport adjoint_pair(IdentityId id, Family family, Variant left_variant,
                            Variant right_variant, Side lhs_side, const GridFunction& f,
                            const GridFunction& g, const OrderFunction& alpha, Normalization norm,
                            const CheckOptions& opts, KernelCache& cache) {
  const Side rhs_side = lhs_side == Side::Left ? Side::Right : Side::Left;
  const OperatorSpec lhs_op(lhs_side, family, left_variant, alpha, norm, opts.ctrl);
  const OperatorSpec rhs_op(rhs_side, family, right_variant, alpha, norm, opts.ctrl);
  const double lhs =
      interior_pairing(f, scaled_apply(lhs_op, g, cache, 1.0 + opts.lhs_kernel_perturbation));
  const double rhs = interior_pairing(g, apply(rhs_op, f, &cache));
  return make_report(id, lhs, rhs);
}

std::array<IdentityReport, 2> adjoint_pairs(IdentityId first, IdentityId second, Family family,
                                            const GridFunction& f, const GridFunction& g,
                                            const OrderFunction& alpha, Normalization norm,
                                            const CheckOptions& opts) {
  require_full(f, alpha, "f");
  require_full(g, alpha, "g");
  KernelCache cache(opts.ctrl);
  auto r1 = adjoint_pair(first, family, Variant::TypeI, Variant::TypeII, Side::Left, f, g, alpha,
                         norm, opts, cache);
  std::array<IdentityReport, 2> out{r1, {}};
  if (family == Family::FracSum) {
    // Right type I on the left-hand side, left type II on the right.
    out[1] = adjoint_pair(second, family, Variant::TypeI, Variant::TypeII, Side::Right, f, g,
                          alpha, norm, opts, cache);
  } else {
    out[1] = adjoint_pair(second, family, Variant::TypeII, Variant::TypeI, Side::Left, f, g,
                          alpha, norm, opts, cache);
  }
  for (auto& r : out) {
    r.grid_size = alpha.grid().n();
    r.a = alpha.grid().a();
    r.norm = norm;
    r.alpha.assign(alpha.values().begin(), alpha.values().end());
  }
  return out;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; the state increment happens at the call site.
std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class Group { Sum, ABSum, GIO, Main };

Group group_of(IdentityId id) {
  switch (id) {
    case IdentityId::SumIBP1:
    case IdentityId::SumIBP2: return Group::Sum;
    case IdentityId::ABSumIBP1:
    case IdentityId::ABSumIBP2: return Group::ABSum;
    case IdentityId::GIOIBP1:
    case IdentityId::GIOIBP2: return Group::GIO;
    default: return Group::Main;
  }
}

struct Trial {
  int n = 0;
  Normalization norm = Normalization::Unit;
  std::vector<double> alpha, f, g;
};

Trial make_trial(std::uint64_t seed, OrderClass cls, const FuzzOptions& opts) {
  std::mt19937_64 rng(seed);
  Trial tr;
  const std::uint64_t norm_draw = rng();
  tr.norm = opts.norm.value_or((norm_draw & 1U) != 0U ? Normalization::AB : Normalization::Unit);
  const auto span = static_cast<std::uint64_t>(opts.n_max - opts.n_min + 1);
  tr.n = opts.n_min + static_cast<int>(rng() % span);

  const double hi_end = cls == OrderClass::Difference ? 0.5 : 1.0;
  const double lo = 0.01;
  const double hi = hi_end - 0.01;
  for (int k = 0; k <= tr.n; ++k) tr.alpha.push_back(lo + (hi - lo) * unit_real(rng));
  for (int k = 0; k <= tr.n; ++k) tr.f.push_back(-1.0 + 2.0 * unit_real(rng));
  for (int k = 0; k <= tr.n; ++k) tr.g.push_back(-1.0 + 2.0 * unit_real(rng));
  return tr;
}

std::vector<IdentityReport> run_group(Group group, std::uint64_t seed, int index,
                                      const FuzzOptions& opts) {
  const OrderClass cls =
      (group == Group::Sum || group == Group::ABSum) ? OrderClass::Sum : OrderClass::Difference;
  const Trial tr = make_trial(seed, cls, opts);
  const Grid grid(0.0, tr.n);
  const OrderFunction alpha(grid, tr.alpha, cls);
  const GridFunction f(grid, tr.f);
  const GridFunction g(grid, tr.g);

  std::vector<IdentityReport> out;
  switch (group) {
    case Group::Sum: {
      auto r = check_sum_ibp(f, g, alpha, opts.check);
      out.assign(r.begin(), r.end());
      break;
    }
    case Group::ABSum: {
      auto r = check_ab_sum_ibp(f, g, alpha, tr.norm, opts.check);
      out.assign(r.begin(), r.end());
      break;
    }
    case Group::GIO: {
      auto r = check_gio_ibp(f, g, alpha, tr.norm, opts.check);
      out.assign(r.begin(), r.end());
      break;
    }
    case Group::Main: {
      auto r = check_main_ibp(f, g, alpha, tr.norm, opts.check);
      out.assign(r.begin(), r.end());
      break;
    }
  }
  for (auto& r : out) {
    r.trial_seed = seed;
    r.trial_index = index;
    r.norm = tr.norm;
  }
  return out;
}

void validate(const FuzzOptions& opts) {
  if (opts.trials < 1) throw InvalidArgument("fuzz: trials must be >= 1");
  if (opts.n_min < 3 || opts.n_max < opts.n_min) {
    throw InvalidArgument("fuzz: need 3 <= n_min <= n_max");
  }
}

IdentityReport pick(const std::vector<IdentityReport>& reports, IdentityId id) {
  for (const auto& r : reports) {
    if (r.id == id) return r;
  }
  throw InvalidArgument("identity not produced by its group");
}

void summarize(FuzzSummary& s) {
  s.max_rel_residual = 0.0;
  s.worst_trial = 0;
  for (std::size_t i = 0; i < s.reports.size(); ++i) {
    // NaN residuals count as failures.
    const double r = s.reports[i].rel_residual;
    if (!(r <= s.max_rel_residual)) {
      s.max_rel_residual = std::isnan(r) ? r : std::max(r, s.max_rel_residual);
      s.worst_trial = i;
      if (std::isnan(r)) break;
    }
  }
}

}  // namespace

const char* to_string(IdentityId id) {
  for (const auto& e : kNames) {
    if (e.id == id) return e.name;
  }
  return "?";
}

std::optional<IdentityId> parse_identity(std::string_view name) {
  for (const auto& e : kNames) {
    if (name == e.name) return e.id;
  }
  return std::nullopt;
}

OrderClass order_class_for(IdentityId id) {
  const Group g = group_of(id);
  return (g == Group::Sum || g == Group::ABSum) ? OrderClass::Sum : OrderClass::Difference;
}

IdentityReport make_report(IdentityId id, double lhs, double rhs) {
  IdentityReport r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = r.abs_residual / std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return r;
}

std::array<IdentityReport, 2> check_sum_ibp(const GridFunction& f, const GridFunction& g,
                                            const OrderFunction& alpha,
                                            const CheckOptions& opts) {
  return adjoint_pairs(IdentityId::SumIBP1, IdentityId::SumIBP2, Family::FracSum, f, g, alpha,
                       Normalization::Unit, opts);
}

std::array<IdentityReport, 2> check_ab_sum_ibp(const GridFunction& f, const GridFunction& g,
                                               const OrderFunction& alpha, Normalization norm,
                                               const CheckOptions& opts) {
  return adjoint_pairs(IdentityId::ABSumIBP1, IdentityId::ABSumIBP2, Family::ABSum, f, g, alpha,
                       norm, opts);
}

std::array<IdentityReport, 2> check_gio_ibp(const GridFunction& f, const GridFunction& g,
                                            const OrderFunction& alpha, Normalization norm,
                                            const CheckOptions& opts) {
  return adjoint_pairs(IdentityId::GIOIBP1, IdentityId::GIOIBP2, Family::GenIntegral, f, g, alpha,
                       norm, opts);
}

std::array<IdentityReport, 4> check_main_ibp(const GridFunction& f, const GridFunction& g,
                                             const OrderFunction& alpha, Normalization norm,
                                             const CheckOptions& opts) {
  require_full(f, alpha, "f");
  require_full(g, alpha, "g");
  const int n = alpha.grid().n();
  const double lhs_scale = 1.0 + opts.lhs_kernel_perturbation;
  KernelCache cache(opts.ctrl);
  auto spec = [&](Side side, Family family, Variant variant) {
    return OperatorSpec(side, family, variant, alpha, norm, opts.ctrl);
  };

  std::array<IdentityReport, 4> out;

  // Formulas 1-2: left Caputo difference of g; boundary terms at b-1 and a;
  // the right Riemann-Liouville difference of f is evaluated at t - 1.
  const Variant caputo_left[2] = {Variant::TypeI, Variant::TypeII};
  const Variant adjoint_left[2] = {Variant::TypeII, Variant::TypeI};
  for (int k = 0; k < 2; ++k) {
    const GridFunction caputo =
        scaled_apply(spec(Side::Left, Family::ABCDiff, caputo_left[k]), g, cache, lhs_scale);
    const double lhs = interior_pairing(f, caputo);

    const GridFunction e = apply(spec(Side::Right, Family::GenIntegral, adjoint_left[k]), f, &cache);
    const GridFunction rl = apply(spec(Side::Right, Family::ABRDiff, adjoint_left[k]), f, &cache);
    detail::CompensatedSum rhs;
    rhs.add(g[n - 1] * e.at(n - 1));
    rhs.add(-g[0] * e.at(0));
    for (int t = 1; t <= n - 1; ++t) rhs.add(g[t - 1] * rl.at(t - 1));
    out[k] = make_report(k == 0 ? IdentityId::Main1 : IdentityId::Main2, lhs, rhs.value());
  }

  // Formulas 3-4: right Caputo difference of g; boundary terms at b and a+1;
  // the left Riemann-Liouville difference of f is evaluated at t + 1.
  for (int k = 0; k < 2; ++k) {
    const GridFunction caputo =
        scaled_apply(spec(Side::Right, Family::ABCDiff, caputo_left[k]), g, cache, lhs_scale);
    const double lhs = interior_pairing(f, caputo);

    const GridFunction e = apply(spec(Side::Left, Family::GenIntegral, adjoint_left[k]), f, &cache);
    const GridFunction rl = apply(spec(Side::Left, Family::ABRDiff, adjoint_left[k]), f, &cache);
    detail::CompensatedSum rhs;
    rhs.add(-g[n] * e.at(n));
    rhs.add(g[1] * e.at(1));
    for (int t = 1; t <= n - 1; ++t) rhs.add(g[t + 1] * rl.at(t + 1));
    out[2 + k] = make_report(k == 0 ? IdentityId::Main3 : IdentityId::Main4, lhs, rhs.value());
  }

  for (auto& r : out) {
    r.grid_size = n;
    r.a = alpha.grid().a();
    r.norm = norm;
    r.alpha.assign(alpha.values().begin(), alpha.values().end());
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial_index) {
  return splitmix64_mix(seed + kGolden *
                               static_cast<std::uint64_t>(trial_index + 1));
}

FuzzSummary fuzz(IdentityId id, const FuzzOptions& opts) {
  validate(opts);
  FuzzSummary s;
  s.id = id;
  for (int i = 0; i < opts.trials; ++i) {
    s.reports.push_back(pick(run_group(group_of(id), trial_seed(opts.seed, i), i, opts), id));
  }
  summarize(s);
  return s;
}

std::vector<FuzzSummary> fuzz_all(const FuzzOptions& opts) {
  validate(opts);
  std::vector<FuzzSummary> out;
  for (IdentityId id : kAllIdentities) {
    FuzzSummary s;
    s.id = id;
    out.push_back(s);
  }
  for (Group group : {Group::Sum, Group::ABSum, Group::GIO, Group::Main}) {
    for (int i = 0; i < opts.trials; ++i) {
      for (auto& r : run_group(group, trial_seed(opts.seed, i), i, opts)) {
        out[static_cast<std::size_t>(r.id)].reports.push_back(std::move(r));
      }
    }
  }
  for (auto& s : out) summarize(s);
  return out;
}

IdentityReport replay(IdentityId id, std::uint64_t seed, const FuzzOptions& opts) {
  validate(opts);
  return pick(run_group(group_of(id), seed, -1, opts), id);
}

}  // namespace vofrac
