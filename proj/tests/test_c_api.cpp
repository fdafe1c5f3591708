// Exercises the shared library through its C header only.
#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "vofrac/vofrac.h"

TEST(CApi, RisingAndErrors) {
  double x = 0;
  ASSERT_EQ(vof_rising(3.0, 2.0, &x), VOF_OK);
  EXPECT_EQ(x, 12.0);
  EXPECT_EQ(vof_rising(-1.0, 0.5, &x), VOF_DOMAIN);
  EXPECT_NE(std::string(vof_last_error()).find("pole"), std::string::npos);
  EXPECT_EQ(vof_rising(3.0, 2.0, nullptr), VOF_INVALID_ARGUMENT);
  ASSERT_EQ(vof_rising(3.0, 2.0, &x), VOF_OK);
  EXPECT_STREQ(vof_last_error(), "");
}

TEST(CApi, MittagLeffler) {
  vof_ml_result r{};
  ASSERT_EQ(vof_ml(0.3, 1.0, -0.5, 1, nullptr, &r), VOF_OK);
  EXPECT_NEAR(r.value, 1.0 / 1.5, 1e-14);
  EXPECT_EQ(r.finite_form, 0);
  EXPECT_GT(r.terms, 0);
  EXPECT_EQ(vof_ml(0.3, 1.0, 1.0, 1, nullptr, &r), VOF_DOMAIN);
  vof_series_control c = vof_series_control_default();
  c.k_max = 9;
  EXPECT_EQ(vof_ml(0.3, 1.0, 0.999, 30, &c, &r), VOF_NO_CONVERGENCE);
  c.rel_tol = -1;
  EXPECT_EQ(vof_ml(0.3, 1.0, 0.5, 2, &c, &r), VOF_INVALID_ARGUMENT);
}

TEST(CApi, OperatorLifecycle) {
  const std::vector<double> alpha(6, 1.0);
  vof_operator_desc d{};
  d.a = 0;
  d.n = 5;
  d.alpha = alpha.data();
  d.order_class = VOF_ORDER_SUM;
  d.side = VOF_LEFT;
  d.family = VOF_FRAC_SUM;
  d.variant = VOF_TYPE_I;
  d.norm = VOF_NORM_UNIT;
  vof_operator op = nullptr;
  ASSERT_EQ(vof_operator_create(&d, &op), VOF_OK);
  const double f[] = {100, 1, 2, 3, 4, 5};
  double out[6];
  int lo = -1, hi = -1;
  ASSERT_EQ(vof_operator_domain(op, 0, 5, &lo, &hi), VOF_OK);
  EXPECT_EQ(lo, 1);
  EXPECT_EQ(hi, 5);
  ASSERT_EQ(vof_operator_apply(op, f, 0, 5, out, 6, &lo, &hi), VOF_OK);
  EXPECT_EQ(out[0], 1.0);
  EXPECT_EQ(out[4], 15.0);
  EXPECT_EQ(vof_operator_apply(op, f, 0, 5, out, 2, &lo, &hi), VOF_BUFFER_TOO_SMALL);

  std::vector<double> m(36);
  int rlo = -1, rhi = -1;
  ASSERT_EQ(vof_operator_kernel_matrix(op, m.data(), m.size(), &rlo, &rhi), VOF_OK);
  EXPECT_EQ(rlo, 1);
  EXPECT_EQ(m[5 * 6 + 1], 1.0);
  EXPECT_EQ(m[0], 0.0);
  vof_operator_destroy(op);

  d.order_class = VOF_ORDER_DIFFERENCE;
  EXPECT_EQ(vof_operator_create(&d, &op), VOF_DOMAIN);
  EXPECT_EQ(op, nullptr);
  vof_operator_destroy(nullptr);
}

TEST(CApi, Identities) {
  EXPECT_STREQ(vof_identity_name(0), "SumIBP-1");
  EXPECT_EQ(vof_identity_name(10), nullptr);
  int id = -1;
  ASSERT_EQ(vof_identity_parse("Main-4", &id), VOF_OK);
  EXPECT_EQ(id, 9);
  EXPECT_EQ(vof_identity_parse("nope", &id), VOF_INVALID_ARGUMENT);

  vof_fuzz_desc d{};
  d.identity = -1;
  d.trials = 5;
  d.seed = 1;
  d.n_min = 3;
  d.n_max = 8;
  d.norm = -1;
  vof_fuzz_result r = nullptr;
  ASSERT_EQ(vof_fuzz(&d, &r), VOF_OK);
  ASSERT_EQ(vof_fuzz_result_count(r), 50U);
  EXPECT_LE(vof_fuzz_result_max_rel_residual(r), 1e-12);
  vof_identity_report rep{};
  ASSERT_EQ(vof_fuzz_result_report(r, 47, &rep), VOF_OK);
  EXPECT_EQ(rep.identity, 9);
  EXPECT_EQ(rep.trial_index, 2);
  std::vector<double> alpha(static_cast<std::size_t>(rep.alpha_count));
  ASSERT_EQ(vof_fuzz_result_alpha(r, 47, alpha.data(), alpha.size()), VOF_OK);
  EXPECT_GT(alpha[0], 0.0);

  d.identity = 9;
  vof_identity_report again{};
  ASSERT_EQ(vof_replay(&d, rep.trial_seed, &again), VOF_OK);
  EXPECT_EQ(again.lhs, rep.lhs);
  EXPECT_EQ(again.rhs, rep.rhs);
  vof_fuzz_result_destroy(r);

  d.trials = 0;
  EXPECT_EQ(vof_fuzz(&d, &r), VOF_INVALID_ARGUMENT);
}

namespace {
double quad_l(double, double u, double v, void* user) {
  const double w = *static_cast<double*>(user);
  return w * (v * v + u * u);
}
}  // namespace

TEST(CApi, VariationalQuadraticAndCustomAgree) {
  const std::vector<double> alpha(7, 0.25);
  vof_problem_desc d{};
  d.a = 0;
  d.n = 6;
  d.alpha = alpha.data();
  d.A = 1;
  d.B = 0;
  d.variant = VOF_TYPE_I;
  d.norm = VOF_NORM_UNIT;
  const double half = 0.5;
  const vof_quadratic q{&half, 1, &half, 1, nullptr, 0, nullptr, 0};
  vof_problem p = nullptr;
  ASSERT_EQ(vof_problem_create_quadratic(&d, &q, &p), VOF_OK);
  vof_solution s = nullptr;
  ASSERT_EQ(vof_problem_solve(p, nullptr, &s), VOF_OK);
  vof_solution_info info{};
  ASSERT_EQ(vof_solution_get_info(s, &info), VOF_OK);
  EXPECT_EQ(info.method, VOF_SOLVE_LINEAR);
  EXPECT_NEAR(info.J, 1.853779395619549224884994, 1e-12);
  double f[6], r[4];
  ASSERT_EQ(vof_solution_get_f(s, f, 6), VOF_OK);
  ASSERT_EQ(vof_solution_get_residual(s, r, 4), VOF_OK);
  EXPECT_NEAR(f[1], 0.4600257249923255458115909, 1e-12);
  EXPECT_EQ(vof_solution_get_f(s, f, 5), VOF_BUFFER_TOO_SMALL);

  double j = 0;
  ASSERT_EQ(vof_problem_evaluate_j(p, f, &j), VOF_OK);
  EXPECT_EQ(j, info.J);
  double g[4];
  ASSERT_EQ(vof_problem_gradient(p, f, g, 4), VOF_OK);
  for (double x : g) EXPECT_LE(std::abs(x), 1e-8);
  vof_solution_destroy(s);

  vof_problem c = nullptr;
  double w = 0.5;
  ASSERT_EQ(vof_problem_create_custom(&d, quad_l, nullptr, nullptr, &w, &c), VOF_OK);
  vof_solve_options o = vof_solve_options_default();
  ASSERT_EQ(vof_problem_solve(c, &o, &s), VOF_OK);
  double fc[6];
  ASSERT_EQ(vof_solution_get_f(s, fc, 6), VOF_OK);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(fc[k], f[k], 1e-8);
  double res[4];
  ASSERT_EQ(vof_problem_el_residual(c, fc, res, 4), VOF_OK);
  for (double x : res) EXPECT_LE(std::abs(x), 1e-6);
  vof_solution_destroy(s);

  o.max_iter = 1;
  EXPECT_EQ(vof_problem_solve(c, &o, &s), VOF_NOT_CONVERGED);
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(vof_solution_get_info(s, &info), VOF_OK);
  EXPECT_EQ(info.converged, 0);
  vof_solution_destroy(s);
  vof_problem_destroy(c);
  vof_problem_destroy(p);

  d.n = 3;
  EXPECT_EQ(vof_problem_create_quadratic(&d, &q, &p), VOF_DOMAIN);
}

TEST(CApi, FormatReal) {
  char buf[32];
  ASSERT_EQ(vof_format_real(0.1, buf, sizeof buf), VOF_OK);
  EXPECT_STREQ(buf, "0.10000000000000001");
  EXPECT_EQ(vof_format_real(0.1, buf, 4), VOF_BUFFER_TOO_SMALL);
}
