#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vofrac/grid.hpp"
#include "vofrac/operators.hpp"

namespace vofrac {

/// The summation-by-parts formulas checked numerically.
///
///   SumIBP-1/2     fractional sums: left type I against right type II and
///                  right type I against left type II
///   ABSumIBP-1/2   the same pairing for AB sums
///   GIO-IBP-1/2    the same pairing for generalized fractional integrals
///   Main-1..4      Caputo AB differences moved onto Riemann-Liouville AB
///                  differences of the other factor plus boundary terms
enum class IdentityId {
  SumIBP1,
  SumIBP2,
  ABSumIBP1,
  ABSumIBP2,
  GIOIBP1,
  GIOIBP2,
  Main1,
  Main2,
  Main3,
  Main4,
};

inline constexpr std::array<IdentityId, 10> kAllIdentities = {
    IdentityId::SumIBP1, IdentityId::SumIBP2, IdentityId::ABSumIBP1, IdentityId::ABSumIBP2,
    IdentityId::GIOIBP1, IdentityId::GIOIBP2, IdentityId::Main1,     IdentityId::Main2,
    IdentityId::Main3,   IdentityId::Main4};

/// "SumIBP-1", "Main-3", ...
const char* to_string(IdentityId id);
std::optional<IdentityId> parse_identity(std::string_view name);

/// Order class a random trial of this identity draws from.
OrderClass order_class_for(IdentityId id);

struct IdentityReport {
  IdentityId id = IdentityId::SumIBP1;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  /// |lhs - rhs| / max(|lhs|, |rhs|, 1)
  double rel_residual = 0.0;
  std::uint64_t trial_seed = 0;
  int trial_index = -1;
  int grid_size = 0;  ///< n
  double a = 0.0;
  Normalization norm = Normalization::Unit;
  std::vector<double> alpha;
};

IdentityReport make_report(IdentityId id, double lhs, double rhs);

/// Evaluation context shared by the check functions.
struct CheckOptions {
  SeriesControl ctrl{};
  /// Scales every kernel value used on the left-hand side by (1 + this).
  /// Zero in normal use; non-zero values break the identities on purpose.
  double lhs_kernel_perturbation = 0.0;
};

/// f and g must be fully supported on alpha's grid.
std::array<IdentityReport, 2> check_sum_ibp(const GridFunction& f, const GridFunction& g,
                                            const OrderFunction& alpha,
                                            const CheckOptions& opts = {});
std::array<IdentityReport, 2> check_ab_sum_ibp(const GridFunction& f, const GridFunction& g,
                                               const OrderFunction& alpha, Normalization norm,
                                               const CheckOptions& opts = {});
std::array<IdentityReport, 2> check_gio_ibp(const GridFunction& f, const GridFunction& g,
                                            const OrderFunction& alpha, Normalization norm,
                                            const CheckOptions& opts = {});
std::array<IdentityReport, 4> check_main_ibp(const GridFunction& f, const GridFunction& g,
                                             const OrderFunction& alpha, Normalization norm,
                                             const CheckOptions& opts = {});

/// Random-trial configuration.
///
/// Trial i is seeded with output i + 1 of a SplitMix64 stream started at
/// `seed` (state seed + 0x9E3779B97F4A7C15 * (i + 1), then the usual
/// finalizer), which initializes std::mt19937_64. From that stream, in order: the
/// normalization (low bit of one draw, unless `norm` is set), n = n_min +
/// draw mod (n_max - n_min + 1), alpha at offsets 0..n, f at 0..n, then g at 0..n. Reals
/// are (draw >> 11) * 2^-53 mapped onto [-1, 1] for f and g and onto the
/// order class range shrunk by 0.01 at both ends for alpha.
struct FuzzOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  int n_min = 3;
  int n_max = 12;
  std::optional<Normalization> norm;
  CheckOptions check{};
};

struct FuzzSummary {
  IdentityId id = IdentityId::SumIBP1;
  std::vector<IdentityReport> reports;  ///< in trial order
  double max_rel_residual = 0.0;
  std::size_t worst_trial = 0;
};

std::uint64_t trial_seed(std::uint64_t seed, int trial_index);

/// Runs `opts.trials` random trials of one identity. Throws InvalidArgument
/// for trials < 1 or an empty/invalid n range.
FuzzSummary fuzz(IdentityId id, const FuzzOptions& opts);

/// Every identity, each over `opts.trials` trials; formulas of the same group
/// share trial data.
std::vector<FuzzSummary> fuzz_all(const FuzzOptions& opts);

/// Re-runs the single trial generated from `trial_seed`. Bit-identical to the
/// corresponding report from fuzz() given the same n range and options.
IdentityReport replay(IdentityId id, std::uint64_t trial_seed, const FuzzOptions& opts);

}  // namespace vofrac
