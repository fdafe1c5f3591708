#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vofrac {

/// The isolated time scale N_{a,b} = {a, a+1, ..., b} with b = a + n.
///
/// Points are addressed by integer offset k in [0, n], so backward/forward
/// jumps and kernel lags are exact integers.
class Grid {
 public:
  /// Throws DomainError unless n >= 2 and a is finite.
  Grid(double a, int n);

  double a() const { return a_; }
  double b() const { return a_ + n_; }
  int n() const { return n_; }
  /// Number of points, n + 1.
  int size() const { return n_ + 1; }

  bool contains(int offset) const { return offset >= 0 && offset <= n_; }
  /// a + offset; throws DomainError outside [0, n].
  double point(int offset) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  int n_;
};

/// A real function sampled on a contiguous range of grid offsets [lo, hi].
class GridFunction {
 public:
  /// Full support [0, n]; values.size() must equal n + 1.
  GridFunction(Grid grid, std::vector<double> values);
  /// Support [lo, hi]; values.size() must equal hi - lo + 1.
  GridFunction(Grid grid, int lo, int hi, std::vector<double> values);

  /// Samples fn(t) at t = a + k for every k in [lo, hi].
  static GridFunction sample(Grid grid, const std::function<double(double)>& fn);
  static GridFunction sample(Grid grid, int lo, int hi,
                             const std::function<double(double)>& fn);
  static GridFunction constant(Grid grid, double value);

  const Grid& grid() const { return grid_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  bool supports(int offset) const { return offset >= lo_ && offset <= hi_; }
  bool supports(int lo, int hi) const { return lo >= lo_ && hi <= hi_; }

  /// Value at an offset; DomainError outside the support.
  double at(int offset) const;
  /// Unchecked access; offset must be inside the support.
  double operator[](int offset) const { return values_[static_cast<std::size_t>(offset - lo_)]; }

  /// Values on [lo, hi], in offset order.
  std::span<const double> values() const { return values_; }

 private:
  Grid grid_;
  int lo_;
  int hi_;
  std::vector<double> values_;
};

/// Admissible ranges for a variable order.
enum class OrderClass {
  Sum,         ///< 0 < alpha <= 1 (nabla fractional sums)
  Difference,  ///< 0 < alpha < 1/2 (Mittag-Leffler kernel operators)
  ABSum,       ///< 0 <= alpha <= 1 (AB sums, including the alpha == 0 limit)
};

const char* to_string(OrderClass cls);

/// True when alpha lies inside the class range.
bool order_in_class(double alpha, OrderClass cls);

/// Variable order alpha(t) sampled at every grid offset.
class OrderFunction {
 public:
  /// Throws DomainError if any value is outside the class range or the
  /// length is not n + 1.
  OrderFunction(Grid grid, std::vector<double> alpha, OrderClass cls);

  static OrderFunction constant(Grid grid, double alpha, OrderClass cls);

  const Grid& grid() const { return grid_; }
  OrderClass order_class() const { return class_; }
  double operator[](int offset) const { return alpha_[static_cast<std::size_t>(offset)]; }
  std::span<const double> values() const { return alpha_; }
  /// True when every sample is equal.
  bool is_constant() const;

 private:
  Grid grid_;
  std::vector<double> alpha_;
  OrderClass class_;
};

/// The multiplier B(alpha) of the Atangana-Baleanu operators. Both choices
/// satisfy B(0) = B(1) = 1 and B > 0 on (0, 1).
enum class Normalization {
  Unit,  ///< B(alpha) = 1
  AB,    ///< B(alpha) = 1 - alpha + alpha / Gamma(alpha)
};

const char* to_string(Normalization norm);

/// B(alpha) for alpha in [0, 1].
double b_of(double alpha, Normalization norm);

/// Backward difference (nabla f)(t) = f(t) - f(t - 1) on [lo + 1, hi].
GridFunction nabla(const GridFunction& f);
/// Forward difference (delta f)(t) = f(t + 1) - f(t) on [lo, hi - 1].
GridFunction delta(const GridFunction& f);
/// Time reversal t -> a + b - t: offset k moves to n - k.
GridFunction reverse(const GridFunction& f);

/// Decimal form with 17 significant digits, exact on round trip.
std::string format_real(double x);

/// CSV with header "offset,value", one row per supported offset.
void write_csv(std::ostream& os, const GridFunction& f);
/// Reads the format written by write_csv (header optional). Offsets must be
/// contiguous and inside the grid.
GridFunction read_csv(std::istream& is, const Grid& grid);

}  // namespace vofrac
