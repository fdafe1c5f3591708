#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vofrac/grid.hpp"
#include "vofrac/operators.hpp"

namespace vofrac {

/// Catalog Lagrangian c_vv v^2 + c_uu u^2 + c_u u + c_v v. Each coefficient
/// vector holds either one value (constant in t) or n - 1 values for
/// t = a+1, ..., b-1.
struct QuadraticForm {
  std::vector<double> c_vv{0.0};
  std::vector<double> c_uu{0.0};
  std::vector<double> c_u{0.0};
  std::vector<double> c_v{0.0};
};

/// L(t, u, v) where u = f(t - 1) and v is the left Caputo AB difference of f
/// at t.
class Lagrangian {
 public:
  using Fn = std::function<double(double t, double u, double v)>;

  /// Partials by central differences with step h * max(1, |x|).
  static Lagrangian with_numeric_partials(Fn value, double h = 1e-6);
  static Lagrangian with_partials(Fn value, Fn d_du, Fn d_dv);

  double operator()(double t, double u, double v) const { return value_(t, u, v); }
  double d_du(double t, double u, double v) const;
  double d_dv(double t, double u, double v) const;
  bool analytic() const { return static_cast<bool>(d_du_); }

  /// Quadratic catalog entry if this Lagrangian was built from one.
  const std::optional<QuadraticForm>& quadratic() const { return quadratic_; }

 private:
  friend class VariationalProblem;
  Fn value_, d_du_, d_dv_;
  double h_ = 1e-6;
  std::optional<QuadraticForm> quadratic_;
};

/// Minimize J(f) = sum_{t=a+1}^{b-1} L(t, f(t-1), (left ABC difference of f)(t))
/// over f: N_{a,b-1} -> R with f(a) = A and f(b-1) = B.
///
/// `grid` is N_{a,b}; f lives on function_grid() = N_{a,b-1}. The order must be
/// a Difference-class order on `grid`. The variant selects the type I or type
/// II Caputo difference inside J.
class VariationalProblem {
 public:
  VariationalProblem(Grid grid, OrderFunction order, Lagrangian lagrangian, double A, double B,
                     Variant variant = Variant::TypeI, Normalization norm = Normalization::Unit,
                     SeriesControl ctrl = {});

  /// Problem with a catalog quadratic Lagrangian.
  static VariationalProblem quadratic(Grid grid, OrderFunction order, QuadraticForm form,
                                      double A, double B, Variant variant = Variant::TypeI,
                                      Normalization norm = Normalization::Unit,
                                      SeriesControl ctrl = {});

  const Grid& grid() const { return grid_; }
  Grid function_grid() const { return Grid(grid_.a(), grid_.n() - 1); }
  const OrderFunction& order() const { return order_; }
  const Lagrangian& lagrangian() const { return lagrangian_; }
  double A() const { return A_; }
  double B() const { return B_; }
  Variant variant() const { return variant_; }
  Normalization norm() const { return norm_; }
  const SeriesControl& series() const { return ctrl_; }

  /// Offsets of the free values, [1, n - 2].
  int interior_lo() const { return 1; }
  int interior_hi() const { return grid_.n() - 2; }

  /// Caputo difference used inside J, as a matrix on function_grid().
  const KernelMatrix& caputo_matrix() const { return caputo_; }

  /// Admissible starting point: linear interpolation between A and B.
  GridFunction initial_guess() const;
  /// Embeds interior values into a function with the boundary values.
  GridFunction embed(const std::vector<double>& interior) const;

 private:
  Grid grid_;
  OrderFunction order_;
  Lagrangian lagrangian_;
  double A_, B_;
  Variant variant_;
  Normalization norm_;
  SeriesControl ctrl_;
  KernelMatrix caputo_;
};

/// J(f). f must be fully supported on p.function_grid(); the boundary values
/// are not checked.
double evaluate_J(const VariationalProblem& p, const GridFunction& f);

/// Euler-Lagrange residual R(t) = L1(t + 1) + (right ABR difference of L2)(t)
/// on t in N_{a+1,b-2}, returned on p.grid() with support [1, n - 2].
///
/// L1, L2 are the partials of L at (t, f(t-1), v(t)) for t in N_{a+1,b-1}.
/// The right difference sums L2 over s = t, ..., b-1 and pairs a type I Caputo
/// difference in J with the type II right difference, and type II with
/// type I. R(t) equals dJ/df(t) exactly, so it vanishes at interior
/// extremizers. Throws DomainError if f violates the boundary conditions.
GridFunction el_residual(const VariationalProblem& p, const GridFunction& f);

/// Five-point central-difference gradient of J with respect to
/// f(a+1), ..., f(b-2), step 1e-4 * max(1, |f(t)|).
std::vector<double> gradient_J(const VariationalProblem& p, const GridFunction& f);

enum class SolveMethod {
  Auto,             ///< linear solve for catalog quadratics, gradient descent otherwise
  GradientDescent,  ///< always iterate
  LinearSolve,      ///< quadratic catalog problems only
};

struct SolveOptions {
  int max_iter = 200000;
  /// Stop once the Euclidean norm of the finite-difference gradient is below this.
  /// A stalled line search also counts as converged when the gradient is
  /// already at the difference quotient's rounding floor.
  double grad_tol = 1e-10;
  SolveMethod method = SolveMethod::Auto;
  /// Armijo sufficient-decrease constant.
  double armijo = 1e-4;
};

struct Solution {
  GridFunction f;
  double J_value = 0.0;
  GridFunction el_residual;
  double max_abs_residual = 0.0;
  /// max |L2| over N_{a+1,b-1}, the scale of the residual test.
  double max_abs_l2 = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  SolveMethod method_used = SolveMethod::GradientDescent;
};

/// Minimizes J with fixed endpoints. Non-convergence is reported through
/// Solution::converged, with the best iterate returned.
Solution solve_direct(const VariationalProblem& p, const SolveOptions& opts = {});

}  // namespace vofrac
