#include "vofrac/vofrac.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "vofrac/errors.hpp"
#include "vofrac/grid.hpp"
#include "vofrac/identities.hpp"
#include "vofrac/operators.hpp"
#include "vofrac/special_functions.hpp"
#include "vofrac/variational.hpp"

using namespace vofrac;

struct vof_operator_s {
  OperatorSpec spec;
  KernelCache cache;
};

struct vof_fuzz_result_s {
  std::vector<IdentityReport> reports;
  double max_rel = 0.0;
};

struct vof_problem_s {
  VariationalProblem problem;
};

struct vof_solution_s {
  Solution solution;
};

namespace {

thread_local std::string g_last_error;

vof_status fail(vof_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <class F>
vof_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const DomainError& e) {
    return fail(VOF_DOMAIN, e.what());
  } catch (const NoConvergence& e) {
    return fail(VOF_NO_CONVERGENCE, e.what());
  } catch (const InvalidArgument& e) {
    return fail(VOF_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VOF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VOF_INTERNAL, e.what());
  } catch (...) {
    return fail(VOF_INTERNAL, "unknown error");
  }
}

SeriesControl to_ctrl(const vof_series_control* c) {
  if (c == nullptr) return {};
  SeriesControl s{c->rel_tol, c->abs_tol, c->k_max, c->k_min};
  s.validate();
  return s;
}

OrderClass to_class(vof_order_class c) {
  switch (c) {
    case VOF_ORDER_SUM: return OrderClass::Sum;
    case VOF_ORDER_DIFFERENCE: return OrderClass::Difference;
    case VOF_ORDER_AB_SUM: return OrderClass::ABSum;
  }
  throw InvalidArgument("unknown order class");
}

Normalization to_norm(int n) {
  if (n == VOF_NORM_UNIT) return Normalization::Unit;
  if (n == VOF_NORM_AB) return Normalization::AB;
  throw InvalidArgument("unknown normalization");
}

Variant to_variant(vof_variant v) {
  switch (v) {
    case VOF_TYPE_I: return Variant::TypeI;
    case VOF_TYPE_II: return Variant::TypeII;
    case VOF_CONVOLUTION: return Variant::Convolution;
  }
  throw InvalidArgument("unknown variant");
}

Family to_family(vof_family f) {
  switch (f) {
    case VOF_FRAC_SUM: return Family::FracSum;
    case VOF_GEN_INTEGRAL: return Family::GenIntegral;
    case VOF_AB_SUM: return Family::ABSum;
    case VOF_ABR_DIFF: return Family::ABRDiff;
    case VOF_ABC_DIFF: return Family::ABCDiff;
  }
  throw InvalidArgument("unknown operator family");
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " is NULL");
}

std::vector<double> copy_n(const double* p, int count, const char* what) {
  need(p, what);
  if (count < 0) throw InvalidArgument(std::string(what) + ": negative length");
  return std::vector<double>(p, p + count);
}

vof_status copy_out_status(std::span<const double> src, double* out, size_t cap) {
  if (src.size() > cap) {
    return fail(VOF_BUFFER_TOO_SMALL,
                ("buffer holds " + std::to_string(cap) + " values, need " + std::to_string(src.size()))
                    .c_str());
  }
  need(out, "output buffer");
  std::copy(src.begin(), src.end(), out);
  return VOF_OK;
}

vof_identity_report to_c(const IdentityReport& r) {
  vof_identity_report c{};
  c.identity = static_cast<int>(r.id);
  c.lhs = r.lhs;
  c.rhs = r.rhs;
  c.abs_residual = r.abs_residual;
  c.rel_residual = r.rel_residual;
  c.trial_seed = r.trial_seed;
  c.trial_index = r.trial_index;
  c.n = r.grid_size;
  c.a = r.a;
  c.norm = r.norm == Normalization::AB ? VOF_NORM_AB : VOF_NORM_UNIT;
  c.alpha_count = static_cast<int>(r.alpha.size());
  return c;
}

FuzzOptions to_fuzz(const vof_fuzz_desc* d) {
  FuzzOptions o;
  o.trials = d->trials;
  o.seed = d->seed;
  o.n_min = d->n_min;
  o.n_max = d->n_max;
  if (d->norm >= 0) o.norm = to_norm(d->norm);
  o.check.ctrl = to_ctrl(d->ctrl);
  o.check.lhs_kernel_perturbation = d->corrupt;
  return o;
}

IdentityId to_identity(int id) {
  if (id < 0 || id >= VOF_IDENTITY_COUNT) throw InvalidArgument("identity id out of range");
  return kAllIdentities[static_cast<std::size_t>(id)];
}

VariationalProblem make_problem(const vof_problem_desc* d,
                                const std::function<VariationalProblem(Grid, OrderFunction)>& build) {
  need(d, "problem descriptor");
  const Grid g(d->a, d->n);
  OrderFunction order(g, copy_n(d->alpha, g.size(), "alpha"), OrderClass::Difference);
  return build(g, std::move(order));
}

std::vector<double> coefficients(const double* p, size_t len, const char* name) {
  if (len == 0) return {0.0};
  need(p, name);
  return std::vector<double>(p, p + len);
}

}  // namespace

extern "C" {

const char* vof_last_error(void) { return g_last_error.c_str(); }

const char* vof_version(void) { return "0.1.0"; }

vof_series_control vof_series_control_default(void) {
  const SeriesControl s;
  return {s.rel_tol, s.abs_tol, s.k_max, s.k_min};
}

vof_status vof_rising(double t, double alpha, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = rising(t, alpha);
    return VOF_OK;
  });
}

vof_status vof_ml(double alpha, double beta, double lambda, int64_t z,
                  const vof_series_control* ctrl, vof_ml_result* out) {
  return guarded([&] {
    need(out, "out");
    const MLResult r = ml(MLParams{alpha, beta, lambda, z}, to_ctrl(ctrl));
    out->value = r.value;
    out->finite_form = r.method == MLMethod::FiniteForm ? 1 : 0;
    out->terms = r.terms;
    return VOF_OK;
  });
}

vof_status vof_operator_create(const vof_operator_desc* desc, vof_operator* out) {
  return guarded([&] {
    need(desc, "descriptor");
    need(out, "out");
    *out = nullptr;
    const Grid g(desc->a, desc->n);
    OrderFunction order(g, copy_n(desc->alpha, g.size(), "alpha"), to_class(desc->order_class));
    const SeriesControl ctrl = to_ctrl(desc->ctrl);
    OperatorSpec spec(desc->side == VOF_RIGHT ? Side::Right : Side::Left, to_family(desc->family),
                      to_variant(desc->variant), std::move(order), to_norm(desc->norm), ctrl);
    *out = new vof_operator_s{std::move(spec), KernelCache(ctrl)};
    return VOF_OK;
  });
}

void vof_operator_destroy(vof_operator op) { delete op; }

vof_status vof_operator_domain(vof_operator op, int lo, int hi, int* out_lo, int* out_hi) {
  return guarded([&] {
    need(op, "operator");
    need(out_lo, "out_lo");
    need(out_hi, "out_hi");
    const Grid& g = op->spec.grid();
    if (lo < 0 || hi > g.n() || lo > hi) throw DomainError("support outside the grid");
    const GridFunction zero(g, lo, hi, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0));
    const GridFunction r = apply(op->spec, zero, &op->cache);
    *out_lo = r.lo();
    *out_hi = r.hi();
    return VOF_OK;
  });
}

vof_status vof_operator_apply(vof_operator op, const double* f, int lo, int hi, double* out,
                              size_t out_cap, int* out_lo, int* out_hi) {
  return guarded([&] {
    need(op, "operator");
    const Grid& g = op->spec.grid();
    if (lo < 0 || hi > g.n() || lo > hi) throw DomainError("support outside the grid");
    const GridFunction fn(g, lo, hi, copy_n(f, hi - lo + 1, "f"));
    const GridFunction r = apply(op->spec, fn, &op->cache);
    if (out_lo != nullptr) *out_lo = r.lo();
    if (out_hi != nullptr) *out_hi = r.hi();
    return copy_out_status(r.values(), out, out_cap);
  });
}

vof_status vof_operator_kernel_matrix(vof_operator op, double* out, size_t out_cap, int* row_lo,
                                      int* row_hi) {
  return guarded([&] {
    need(op, "operator");
    const KernelMatrix k = kernel_matrix(op->spec, &op->cache);
    const int size = k.grid.size();
    if (out_cap < static_cast<size_t>(size) * static_cast<size_t>(size)) {
      return fail(VOF_BUFFER_TOO_SMALL, "matrix buffer needs (n+1)^2 values");
    }
    need(out, "out");
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) out[static_cast<size_t>(i) * size + j] = k.entries(i, j);
    }
    if (row_lo != nullptr) *row_lo = k.row_lo;
    if (row_hi != nullptr) *row_hi = k.row_hi;
    return VOF_OK;
  });
}

const char* vof_identity_name(int id) {
  if (id < 0 || id >= VOF_IDENTITY_COUNT) return nullptr;
  return to_string(kAllIdentities[static_cast<std::size_t>(id)]);
}

vof_status vof_identity_parse(const char* name, int* id) {
  return guarded([&] {
    need(name, "name");
    need(id, "id");
    const auto parsed = parse_identity(name);
    if (!parsed) throw InvalidArgument(std::string("unknown identity: ") + name);
    *id = static_cast<int>(*parsed);
    return VOF_OK;
  });
}

vof_status vof_fuzz(const vof_fuzz_desc* desc, vof_fuzz_result* out) {
  return guarded([&] {
    need(desc, "descriptor");
    need(out, "out");
    *out = nullptr;
    const FuzzOptions opts = to_fuzz(desc);
    std::vector<FuzzSummary> sums;
    if (desc->identity < 0) {
      sums = fuzz_all(opts);
    } else {
      sums.push_back(fuzz(to_identity(desc->identity), opts));
    }
    auto r = std::make_unique<vof_fuzz_result_s>();
    bool nan = false;
    for (auto& s : sums) {
      if (std::isnan(s.max_rel_residual)) nan = true;
      else r->max_rel = std::max(r->max_rel, s.max_rel_residual);
      for (auto& rep : s.reports) r->reports.push_back(std::move(rep));
    }
    if (nan) r->max_rel = std::numeric_limits<double>::quiet_NaN();
    *out = r.release();
    return VOF_OK;
  });
}

void vof_fuzz_result_destroy(vof_fuzz_result r) { delete r; }

size_t vof_fuzz_result_count(vof_fuzz_result r) { return r == nullptr ? 0 : r->reports.size(); }

vof_status vof_fuzz_result_report(vof_fuzz_result r, size_t i, vof_identity_report* out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    if (i >= r->reports.size()) throw InvalidArgument("report index out of range");
    *out = to_c(r->reports[i]);
    return VOF_OK;
  });
}

vof_status vof_fuzz_result_alpha(vof_fuzz_result r, size_t i, double* out, size_t cap) {
  return guarded([&] {
    need(r, "result");
    if (i >= r->reports.size()) throw InvalidArgument("report index out of range");
    const auto& a = r->reports[i].alpha;
    const size_t count = std::min(a.size(), cap);
    if (count > 0) need(out, "out");
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(count), out);
    return VOF_OK;
  });
}

double vof_fuzz_result_max_rel_residual(vof_fuzz_result r) {
  return r == nullptr ? std::numeric_limits<double>::quiet_NaN() : r->max_rel;
}

vof_status vof_replay(const vof_fuzz_desc* desc, uint64_t trial_seed, vof_identity_report* out) {
  return guarded([&] {
    need(desc, "descriptor");
    need(out, "out");
    *out = to_c(replay(to_identity(desc->identity), trial_seed, to_fuzz(desc)));
    return VOF_OK;
  });
}

vof_status vof_problem_create_quadratic(const vof_problem_desc* desc, const vof_quadratic* q,
                                        vof_problem* out) {
  return guarded([&] {
    need(q, "quadratic");
    need(out, "out");
    *out = nullptr;
    const QuadraticForm form{coefficients(q->c1, q->c1_len, "c1"), coefficients(q->c2, q->c2_len, "c2"),
                             coefficients(q->c3, q->c3_len, "c3"), coefficients(q->c4, q->c4_len, "c4")};
    *out = new vof_problem_s{make_problem(desc, [&](Grid g, OrderFunction order) {
      return VariationalProblem::quadratic(g, std::move(order), form, desc->A, desc->B,
                                           to_variant(desc->variant), to_norm(desc->norm),
                                           to_ctrl(desc->ctrl));
    })};
    return VOF_OK;
  });
}

vof_status vof_problem_create_custom(const vof_problem_desc* desc, vof_lagrangian_fn L,
                                     vof_lagrangian_fn d_du, vof_lagrangian_fn d_dv, void* user,
                                     vof_problem* out) {
  return guarded([&] {
    if (L == nullptr) throw InvalidArgument("lagrangian is NULL");
    need(out, "out");
    *out = nullptr;
    if ((d_du == nullptr) != (d_dv == nullptr)) {
      throw InvalidArgument("give both partials or neither");
    }
    auto wrap = [user](vof_lagrangian_fn fn) {
      return [fn, user](double t, double u, double v) { return fn(t, u, v, user); };
    };
    Lagrangian lag = d_du != nullptr ? Lagrangian::with_partials(wrap(L), wrap(d_du), wrap(d_dv))
                                     : Lagrangian::with_numeric_partials(wrap(L));
    *out = new vof_problem_s{make_problem(desc, [&](Grid g, OrderFunction order) {
      return VariationalProblem(g, std::move(order), std::move(lag), desc->A, desc->B,
                                to_variant(desc->variant), to_norm(desc->norm), to_ctrl(desc->ctrl));
    })};
    return VOF_OK;
  });
}

void vof_problem_destroy(vof_problem p) { delete p; }

vof_status vof_problem_evaluate_j(vof_problem p, const double* f, double* out) {
  return guarded([&] {
    need(p, "problem");
    need(out, "out");
    const Grid g = p->problem.function_grid();
    *out = evaluate_J(p->problem, GridFunction(g, copy_n(f, g.size(), "f")));
    return VOF_OK;
  });
}

vof_status vof_problem_el_residual(vof_problem p, const double* f, double* out, size_t cap) {
  return guarded([&] {
    need(p, "problem");
    const Grid g = p->problem.function_grid();
    const GridFunction r = el_residual(p->problem, GridFunction(g, copy_n(f, g.size(), "f")));
    return copy_out_status(r.values(), out, cap);
  });
}

vof_status vof_problem_gradient(vof_problem p, const double* f, double* out, size_t cap) {
  return guarded([&] {
    need(p, "problem");
    const Grid g = p->problem.function_grid();
    const std::vector<double> r = gradient_J(p->problem, GridFunction(g, copy_n(f, g.size(), "f")));
    return copy_out_status(r, out, cap);
  });
}

vof_solve_options vof_solve_options_default(void) {
  const SolveOptions o;
  return {o.max_iter, o.grad_tol, VOF_SOLVE_AUTO};
}

vof_status vof_problem_solve(vof_problem p, const vof_solve_options* opts, vof_solution* out) {
  return guarded([&] {
    need(p, "problem");
    need(out, "out");
    *out = nullptr;
    SolveOptions o;
    if (opts != nullptr) {
      o.max_iter = opts->max_iter;
      o.grad_tol = opts->grad_tol;
      switch (opts->method) {
        case VOF_SOLVE_AUTO: o.method = SolveMethod::Auto; break;
        case VOF_SOLVE_GRADIENT_DESCENT: o.method = SolveMethod::GradientDescent; break;
        case VOF_SOLVE_LINEAR: o.method = SolveMethod::LinearSolve; break;
        default: throw InvalidArgument("unknown solve method");
      }
    }
    auto s = std::make_unique<vof_solution_s>(vof_solution_s{solve_direct(p->problem, o)});
    const bool converged = s->solution.converged;
    *out = s.release();
    if (!converged) return fail(VOF_NOT_CONVERGED, "solver stopped before reaching grad_tol");
    return VOF_OK;
  });
}

void vof_solution_destroy(vof_solution s) { delete s; }

vof_status vof_solution_get_info(vof_solution s, vof_solution_info* out) {
  return guarded([&] {
    need(s, "solution");
    need(out, "out");
    const Solution& x = s->solution;
    out->J = x.J_value;
    out->max_abs_residual = x.max_abs_residual;
    out->max_abs_l2 = x.max_abs_l2;
    out->gradient_norm = x.gradient_norm;
    out->iterations = x.iterations;
    out->converged = x.converged ? 1 : 0;
    out->method = x.method_used == SolveMethod::LinearSolve ? VOF_SOLVE_LINEAR : VOF_SOLVE_GRADIENT_DESCENT;
    return VOF_OK;
  });
}

vof_status vof_solution_get_f(vof_solution s, double* out, size_t cap) {
  return guarded([&] {
    need(s, "solution");
    return copy_out_status(s->solution.f.values(), out, cap);
  });
}

vof_status vof_solution_get_residual(vof_solution s, double* out, size_t cap) {
  return guarded([&] {
    need(s, "solution");
    return copy_out_status(s->solution.el_residual.values(), out, cap);
  });
}

vof_status vof_read_csv(const char* path, double a, int n, double* out, size_t cap, int* lo, int* hi) {
  return guarded([&] {
    need(path, "path");
    const Grid g(a, n);
    std::ifstream in(path);
    if (!in) throw InvalidArgument(std::string("cannot open ") + path);
    const GridFunction f = read_csv(in, g);
    if (cap < static_cast<size_t>(g.size())) return fail(VOF_BUFFER_TOO_SMALL, "buffer needs n + 1 values");
    need(out, "out");
    for (int k = 0; k <= n; ++k) {
      out[k] = f.supports(k) ? f[k] : std::numeric_limits<double>::quiet_NaN();
    }
    if (lo != nullptr) *lo = f.lo();
    if (hi != nullptr) *hi = f.hi();
    return VOF_OK;
  });
}

vof_status vof_format_real(double x, char* buf, size_t cap) {
  return guarded([&] {
    need(buf, "buf");
    const std::string s = format_real(x);
    if (s.size() + 1 > cap) return fail(VOF_BUFFER_TOO_SMALL, "format buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return VOF_OK;
  });
}

}  // extern "C"
