#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_map>

#include "vofrac/grid.hpp"
#include "vofrac/special_functions.hpp"

namespace vofrac {

enum class Side { Left, Right };

enum class Family {
  FracSum,      ///< nabla fractional sum, power kernel
  GenIntegral,  ///< generalized fractional integral, Mittag-Leffler kernel
  ABSum,        ///< Atangana-Baleanu fractional sum
  ABRDiff,      ///< Riemann-Liouville type AB difference (difference after the sum)
  ABCDiff,      ///< Caputo type AB difference (difference before the sum)
};

/// Where the variable order is sampled inside the kernel sum.
enum class Variant {
  TypeI,        ///< alpha(t), the evaluation point
  TypeII,       ///< alpha(s), the summation index
  Convolution,  ///< alpha at offset |t - s|, the lag
};

const char* to_string(Side side);
const char* to_string(Family family);
const char* to_string(Variant variant);

/// Full description of one operator. The constructor enforces the order class
/// each family needs: Difference for the Mittag-Leffler families, Sum for
/// fractional sums, Sum or ABSum for AB sums.
struct OperatorSpec {
  Side side;
  Family family;
  Variant variant;
  OrderFunction order;
  Normalization norm = Normalization::Unit;
  SeriesControl ctrl{};

  OperatorSpec(Side side, Family family, Variant variant, OrderFunction order,
               Normalization norm = Normalization::Unit, SeriesControl ctrl = {});

  const Grid& grid() const { return order.grid(); }
};

/// Memo of kernel values keyed by (order, lag). One instance serves any
/// number of operators sharing a SeriesControl; it is not synchronized, so
/// give each thread its own.
class KernelCache {
 public:
  explicit KernelCache(SeriesControl ctrl = {});

  /// lag^{(alpha - 1)} / Gamma(alpha), the fractional sum kernel.
  double power(double alpha, int lag);
  /// E_alpha(-alpha / (1 - alpha), lag), the Mittag-Leffler kernel.
  double mittag_leffler(double alpha, int lag);

  const SeriesControl& control() const { return ctrl_; }

  /// Multiplies every value handed out until reset. Test hook used to
  /// corrupt one side of an identity on purpose.
  void set_scale(double scale) { scale_ = scale; }

 private:
  struct Key {
    std::uint64_t alpha_bits;
    int lag;
    bool ml;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  SeriesControl ctrl_;
  double scale_ = 1.0;
  std::unordered_map<Key, double, KeyHash> values_;
};

/// Applies the operator by direct summation.
///
/// Input support requirements and output supports (offsets, full input):
///   FracSum, ABSum   left [1, n] needs f on [1, t]; right [0, n-1] needs f on [t, n-1]
///   GenIntegral      left [0, n] with 0 at t = 0; right [0, n] with 0 at t = n
///   ABRDiff          left [1, n];  right [0, n-1]
///   ABCDiff          left [1, n] needs f on [0, n]; right [0, n-1] needs f on [0, n]
/// Narrower inputs produce the correspondingly narrower outputs.
///
/// `cache` may be shared across calls with the same SeriesControl.
GridFunction apply(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache = nullptr);

// Family-checked entry points; each throws InvalidArgument if spec.family
// names a different family.
GridFunction frac_sum(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache = nullptr);
GridFunction gen_integral(const OperatorSpec& spec, const GridFunction& f,
                          KernelCache* cache = nullptr);
GridFunction ab_sum(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache = nullptr);
GridFunction abr_diff(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache = nullptr);
GridFunction abc_diff(const OperatorSpec& spec, const GridFunction& f, KernelCache* cache = nullptr);

/// Operator as a dense (n+1) x (n+1) matrix over grid offsets: for a fully
/// supported f, (K f)(t) equals apply(spec, f)(t) on rows [row_lo, row_hi].
/// Rows outside that range are zero.
struct KernelMatrix {
  Grid grid;
  Side side;
  int row_lo;
  int row_hi;
  Eigen::MatrixXd entries;
};

KernelMatrix kernel_matrix(const OperatorSpec& spec, KernelCache* cache = nullptr);

/// Matrix-vector route; f must be fully supported on the matrix's grid.
GridFunction apply(const KernelMatrix& k, const GridFunction& f);

}  // namespace vofrac
