#include "vofrac/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "compensated_sum.hpp"
#include "vofrac/errors.hpp"

namespace vofrac {

namespace {

double central(const Lagrangian::Fn& fn, double t, double u, double v, double h, bool wrt_u) {
  if (wrt_u) {
    const double step = h * std::max(1.0, std::abs(u));
    return (fn(t, u + step, v) - fn(t, u - step, v)) / (2.0 * step);
  }
  const double step = h * std::max(1.0, std::abs(v));
  return (fn(t, u, v + step) - fn(t, u, v - step)) / (2.0 * step);
}

double coef(const std::vector<double>& c, int t) {
  return c.size() == 1 ? c[0] : c[static_cast<std::size_t>(t - 1)];
}

void check_coefficients(const std::vector<double>& c, const char* name, int terms) {
  if (c.size() != 1 && c.size() != static_cast<std::size_t>(terms)) {
    throw InvalidArgument(std::string("quadratic lagrangian: ") + name +
                          " needs 1 or n - 1 = " + std::to_string(terms) + " coefficients");
  }
  for (double x : c) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string("quadratic lagrangian: ") + name + " is not finite");
  }
}

OrderFunction restrict_order(const OrderFunction& order, const Grid& g) {
  auto v = order.values();
  return OrderFunction(g, std::vector<double>(v.begin(), v.begin() + g.size()), order.order_class());
}

Variant adjoint(Variant v) { return v == Variant::TypeI ? Variant::TypeII : Variant::TypeI; }

Eigen::VectorXd as_vector(const GridFunction& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.values().data(), f.grid().size());
}

void require_full(const VariationalProblem& p, const GridFunction& f) {
  if (!(f.grid() == p.function_grid()) || f.lo() != 0 || f.hi() != p.function_grid().n()) {
    throw DomainError("variational: f must be fully supported on N_{a,b-1}");
  }
}

// v(t) for t = 1..n-1, indexed by offset (entry 0 unused).
Eigen::VectorXd caputo_values(const VariationalProblem& p, const Eigen::VectorXd& f) {
  return p.caputo_matrix().entries * f;
}

double j_of(const VariationalProblem& p, const Eigen::VectorXd& f) {
  const Eigen::VectorXd v = caputo_values(p, f);
  const Grid& g = p.grid();
  detail::CompensatedSum acc;
  for (int t = 1; t <= g.n() - 1; ++t) acc.add(p.lagrangian()(g.point(t), f(t - 1), v(t)));
  return acc.value();
}

// Five-point central stencil.
constexpr double kFdStep = 1e-4;

Eigen::VectorXd fd_gradient(const VariationalProblem& p, Eigen::VectorXd f) {
  const int lo = p.interior_lo(), hi = p.interior_hi();
  Eigen::VectorXd grad(hi - lo + 1);
  for (int k = lo; k <= hi; ++k) {
    const double x = f(k);
    const double h = kFdStep * std::max(1.0, std::abs(x));
    const auto at = [&](double dx) {
      f(k) = x + dx;
      return j_of(p, f);
    };
    const double d1 = at(h) - at(-h), d2 = at(2.0 * h) - at(-2.0 * h);
    f(k) = x;
    grad(k - lo) = (8.0 * d1 - d2) / (12.0 * h);
  }
  return grad;
}

GridFunction to_function(const VariationalProblem& p, const Eigen::VectorXd& f) {
  return GridFunction(p.function_grid(), std::vector<double>(f.data(), f.data() + f.size()));
}

// Exact stationarity system for the quadratic catalog. Returns false when the
// Hessian is not positive definite.
bool linear_minimizer(const VariationalProblem& p, const QuadraticForm& q, Eigen::VectorXd& f) {
  const int n = p.grid().n();
  const int m = n - 1;
  const Eigen::MatrixXd& M = p.caputo_matrix().entries;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(m + 1);
  for (int t = 1; t <= m; ++t) {
    const Eigen::VectorXd row = M.row(t).transpose();
    Q += coef(q.c_vv, t) * row * row.transpose();
    Q(t - 1, t - 1) += coef(q.c_uu, t);
    r += coef(q.c_v, t) * row;
    r(t - 1) += coef(q.c_u, t);
  }
  // grad J = 2 Q f + r
  const int lo = p.interior_lo(), count = p.interior_hi() - lo + 1;
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(m + 1);
  f0(0) = p.A();
  f0(m) = p.B();
  const Eigen::VectorXd g0 = (2.0 * Q * f0 + r).segment(lo, count);
  const Eigen::MatrixXd H = 2.0 * Q.block(lo, lo, count, count);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Eigen::VectorXd d = ldlt.vectorD();
  if (d.minCoeff() <= 1e-14 * std::max(1.0, d.cwiseAbs().maxCoeff())) return false;
  f = f0;
  f.segment(lo, count) = ldlt.solve(-g0);
  return f.allFinite();
}

struct DescentResult {
  Eigen::VectorXd f;
  int iterations = 0;
  bool converged = false;
};

DescentResult descend(const VariationalProblem& p, const SolveOptions& opts) {
  const int lo = p.interior_lo(), count = p.interior_hi() - lo + 1;
  DescentResult res;
  res.f = as_vector(p.initial_guess());
  double J = j_of(p, res.f);
  Eigen::VectorXd g = fd_gradient(p, res.f);
  double step = 1.0 / std::max(1.0, g.norm());
  Eigen::VectorXd prev_x, prev_g;

  for (int it = 0; it < opts.max_iter; ++it) {
    if (g.norm() <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    if (!std::isfinite(J) || !g.allFinite()) break;
    res.iterations = it + 1;

    // Barzilai-Borwein trial step, then Armijo backtracking.
    if (prev_x.size() != 0) {
      const Eigen::VectorXd s = res.f.segment(lo, count) - prev_x;
      const Eigen::VectorXd y = g - prev_g;
      const double sy = s.dot(y);
      if (sy > 0.0) step = s.squaredNorm() / sy;
    }
    const double g2 = g.squaredNorm();
    const double j_noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(J));
    Eigen::VectorXd trial = res.f;
    Eigen::VectorXd g_trial;
    double J_trial = J;
    bool accepted = false;
    for (int back = 0; back < 80; ++back) {
      trial.segment(lo, count) = res.f.segment(lo, count) - step * g;
      J_trial = j_of(p, trial);
      g_trial.resize(0);
      if (std::isfinite(J_trial) && J_trial <= J - opts.armijo * step * g2) {
        accepted = true;
        break;
      }
      // Change in J below its rounding level: judge the step by the gradient.
      if (std::isfinite(J_trial) && std::abs(J_trial - J) <= j_noise) {
        g_trial = fd_gradient(p, trial);
        if (g_trial.norm() < g.norm()) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No decrease is measurable: accept if the gradient is within the
      // rounding noise of the stencil.
      const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(J)) *
                           std::sqrt(static_cast<double>(count)) / kFdStep;
      res.converged = g.norm() <= noise;
      break;
    }

    prev_x = res.f.segment(lo, count);
    prev_g = g;
    res.f = trial;
    J = J_trial;
    g = g_trial.size() != 0 ? g_trial : fd_gradient(p, res.f);
  }
  if (!res.converged && g.allFinite() && g.norm() <= opts.grad_tol) res.converged = true;
  return res;
}

}  // namespace

Lagrangian Lagrangian::with_numeric_partials(Fn value, double h) {
  if (!value) throw InvalidArgument("lagrangian: missing L");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("lagrangian: step must be positive");
  Lagrangian l;
  l.value_ = std::move(value);
  l.h_ = h;
  return l;
}

Lagrangian Lagrangian::with_partials(Fn value, Fn d_du, Fn d_dv) {
  if (!value || !d_du || !d_dv) throw InvalidArgument("lagrangian: missing L or a partial");
  Lagrangian l;
  l.value_ = std::move(value);
  l.d_du_ = std::move(d_du);
  l.d_dv_ = std::move(d_dv);
  return l;
}

double Lagrangian::d_du(double t, double u, double v) const {
  return d_du_ ? d_du_(t, u, v) : central(value_, t, u, v, h_, true);
}

double Lagrangian::d_dv(double t, double u, double v) const {
  return d_dv_ ? d_dv_(t, u, v) : central(value_, t, u, v, h_, false);
}

VariationalProblem::VariationalProblem(Grid grid, OrderFunction order, Lagrangian lagrangian,
                                       double A, double B, Variant variant, Normalization norm,
                                       SeriesControl ctrl)
    : grid_(grid),
      order_(std::move(order)),
      lagrangian_(std::move(lagrangian)),
      A_(A),
      B_(B),
      variant_(variant),
      norm_(norm),
      ctrl_(ctrl),
      caputo_{grid, Side::Left, 0, 0, {}} {
  if (grid_.n() < 4) throw DomainError("variational: need b - a >= 4 for two free interior points");
  if (!(order_.grid() == grid_)) throw DomainError("variational: order lives on a different grid");
  if (order_.order_class() != OrderClass::Difference) {
    throw DomainError("variational: order must be in the difference class 0 < alpha < 1/2");
  }
  if (variant_ == Variant::Convolution) {
    throw InvalidArgument("variational: variant must be type I or type II");
  }
  if (!std::isfinite(A_) || !std::isfinite(B_)) throw InvalidArgument("variational: A and B must be finite");
  if (!lagrangian_.value_) throw InvalidArgument("variational: empty lagrangian");
  ctrl_.validate();
  const Grid fg = function_grid();
  const OperatorSpec spec(Side::Left, Family::ABCDiff, variant_, restrict_order(order_, fg), norm_, ctrl_);
  caputo_ = kernel_matrix(spec);
}

VariationalProblem VariationalProblem::quadratic(Grid grid, OrderFunction order, QuadraticForm q,
                                                 double A, double B, Variant variant,
                                                 Normalization norm, SeriesControl ctrl) {
  const int terms = grid.n() - 1;
  check_coefficients(q.c_vv, "c1", terms);
  check_coefficients(q.c_uu, "c2", terms);
  check_coefficients(q.c_u, "c3", terms);
  check_coefficients(q.c_v, "c4", terms);
  const double a = grid.a();
  auto offset = [a](double t) { return static_cast<int>(std::lround(t - a)); };
  Lagrangian l = Lagrangian::with_partials(
      [q, offset](double t, double u, double v) {
        const int k = offset(t);
        return coef(q.c_vv, k) * v * v + coef(q.c_uu, k) * u * u + coef(q.c_u, k) * u +
               coef(q.c_v, k) * v;
      },
      [q, offset](double t, double u, double) {
        const int k = offset(t);
        return 2.0 * coef(q.c_uu, k) * u + coef(q.c_u, k);
      },
      [q, offset](double t, double, double v) {
        const int k = offset(t);
        return 2.0 * coef(q.c_vv, k) * v + coef(q.c_v, k);
      });
  l.quadratic_ = q;
  return VariationalProblem(grid, std::move(order), std::move(l), A, B, variant, norm, ctrl);
}

GridFunction VariationalProblem::initial_guess() const {
  const int m = grid_.n() - 1;
  std::vector<double> v(static_cast<std::size_t>(m + 1));
  for (int k = 0; k <= m; ++k) v[static_cast<std::size_t>(k)] = A_ + (B_ - A_) * k / m;
  v.back() = B_;
  return GridFunction(function_grid(), std::move(v));
}

GridFunction VariationalProblem::embed(const std::vector<double>& interior) const {
  const int m = grid_.n() - 1;
  if (interior.size() != static_cast<std::size_t>(m - 1)) {
    throw InvalidArgument("variational: expected " + std::to_string(m - 1) + " interior values");
  }
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m + 1));
  v.push_back(A_);
  v.insert(v.end(), interior.begin(), interior.end());
  v.push_back(B_);
  return GridFunction(function_grid(), std::move(v));
}

double evaluate_J(const VariationalProblem& p, const GridFunction& f) {
  require_full(p, f);
  return j_of(p, as_vector(f));
}

GridFunction el_residual(const VariationalProblem& p, const GridFunction& f) {
  require_full(p, f);
  const int m = p.grid().n() - 1;
  if (f[0] != p.A() || f[m] != p.B()) {
    throw DomainError("el_residual: f violates the boundary conditions f(a) = A, f(b-1) = B");
  }
  const GridFunction v = apply(OperatorSpec(Side::Left, Family::ABCDiff, p.variant(),
                                            restrict_order(p.order(), p.function_grid()),
                                            p.norm(), p.series()),
                               f);
  std::vector<double> l1, l2;
  for (int t = 1; t <= m; ++t) {
    const double tp = p.grid().point(t);
    l1.push_back(p.lagrangian().d_du(tp, f[t - 1], v[t]));
    l2.push_back(p.lagrangian().d_dv(tp, f[t - 1], v[t]));
  }
  const GridFunction L2(p.grid(), 1, m, std::move(l2));
  const GridFunction right = apply(
      OperatorSpec(Side::Right, Family::ABRDiff, adjoint(p.variant()), p.order(), p.norm(), p.series()),
      L2);
  std::vector<double> r;
  for (int t = p.interior_lo(); t <= p.interior_hi(); ++t) {
    r.push_back(l1[static_cast<std::size_t>(t)] + right[t]);
  }
  return GridFunction(p.grid(), p.interior_lo(), p.interior_hi(), std::move(r));
}

std::vector<double> gradient_J(const VariationalProblem& p, const GridFunction& f) {
  require_full(p, f);
  const Eigen::VectorXd g = fd_gradient(p, as_vector(f));
  return std::vector<double>(g.data(), g.data() + g.size());
}

Solution solve_direct(const VariationalProblem& p, const SolveOptions& opts) {
  if (opts.max_iter < 0) throw InvalidArgument("solve: max_iter must be >= 0");
  if (!(opts.grad_tol > 0.0)) throw InvalidArgument("solve: grad_tol must be positive");
  if (!(opts.armijo > 0.0 && opts.armijo < 1.0)) throw InvalidArgument("solve: armijo must be in (0, 1)");

  const auto& q = p.lagrangian().quadratic();
  SolveMethod method = opts.method;
  if (method == SolveMethod::Auto) method = q ? SolveMethod::LinearSolve : SolveMethod::GradientDescent;
  if (method == SolveMethod::LinearSolve && !q) {
    throw InvalidArgument("solve: linear solve needs a quadratic catalog lagrangian");
  }

  Eigen::VectorXd f;
  int iterations = 0;
  bool converged = false;
  if (method == SolveMethod::LinearSolve) {
    converged = linear_minimizer(p, *q, f);
    iterations = 1;
    if (!converged) f = as_vector(p.initial_guess());
  } else {
    DescentResult d = descend(p, opts);
    f = std::move(d.f);
    iterations = d.iterations;
    converged = d.converged;
  }

  const GridFunction fn = to_function(p, f);
  const Eigen::VectorXd g = fd_gradient(p, f);
  GridFunction res = el_residual(p, fn);
  double max_r = 0.0;
  for (double x : res.values()) max_r = std::max(max_r, std::abs(x));

  const Eigen::VectorXd v = caputo_values(p, f);
  double max_l2 = 0.0;
  for (int t = 1; t <= p.grid().n() - 1; ++t) {
    max_l2 = std::max(max_l2, std::abs(p.lagrangian().d_dv(p.grid().point(t), f(t - 1), v(t))));
  }

  Solution s{fn, j_of(p, f), std::move(res), max_r, max_l2, g.norm(), iterations, converged, method};
  return s;
}

}  // namespace vofrac
