#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "vofrac/errors.hpp"
#include "vofrac/operators.hpp"

using namespace vofrac;
using vofrac::test::max_rel;
using vofrac::test::rel_err;

namespace {

OrderClass class_for(Family f) {
  switch (f) {
    case Family::FracSum: return OrderClass::Sum;
    case Family::ABSum: return OrderClass::ABSum;
    default: return OrderClass::Difference;
  }
}

constexpr Family kFamilies[] = {Family::FracSum, Family::GenIntegral, Family::ABSum, Family::ABRDiff,
                                Family::ABCDiff};

std::vector<double> random_values(std::mt19937_64& rng, int count, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(count));
  for (auto& x : v) x = d(rng);
  return v;
}

const std::vector<double> kAlphaSum{0.9, 0.2, 0.55, 0.75, 0.35, 1.0};
const std::vector<double> kAlphaDiff{0.1, 0.25, 0.4, 0.15, 0.3, 0.45};
const std::vector<double> kF{0.5, -1.25, 2.0, 0.75, -0.5, 1.5};

}  // namespace

TEST(FracSum, ConstantOrderOracle) {
  const Grid g(0.0, 4);
  const OperatorSpec s(Side::Left, Family::FracSum, Variant::TypeI,
                       OrderFunction::constant(g, 0.3, OrderClass::Sum));
  const auto out = frac_sum(s, GridFunction::sample(g, [](double t) { return t; }));
  EXPECT_EQ(out.lo(), 1);
  EXPECT_LT(rel_err(out[3], 3.795), 1e-14);
}

TEST(FracSum, VariableOrderOracle) {
  const Grid g(0.0, 5);
  const OrderFunction alpha(g, kAlphaSum, OrderClass::Sum);
  const GridFunction f(g, kF);
  const double type1[] = {-1.25, 1.3125, 1.4296875, 0.003671875, 2.5};
  const double type2[] = {-1.25, 1.75, 1.7, 0.805, 2.4538125};
  const auto o1 = frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI, alpha), f);
  const auto o2 = frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeII, alpha), f);
  for (int t = 1; t <= 5; ++t) {
    EXPECT_NEAR(o1[t], type1[t - 1], 1e-14) << t;
    EXPECT_NEAR(o2[t], type2[t - 1], 1e-14) << t;
  }
}

TEST(FracSum, UnitOrderIsRunningSum) {
  const Grid g(0.0, 6);
  const GridFunction f(g, {9, 1, 2, 3, 4, 5, 6});
  const auto out = frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI,
                                         OrderFunction::constant(g, 1.0, OrderClass::Sum)),
                            f);
  double run = 0.0;
  for (int t = 1; t <= 6; ++t) {
    run += f[t];
    EXPECT_EQ(out[t], run);
  }
}

TEST(FracSum, FirstPointIsIdentity) {
  const Grid g(0.0, 3);
  const GridFunction f(g, {0, 2.5, 1, 1});
  for (double a : {0.2, 0.6, 0.95}) {
    const auto out = frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI,
                                           OrderFunction::constant(g, a, OrderClass::Sum)),
                              f);
    EXPECT_LT(rel_err(out[1], 2.5), 1e-14);
  }
}

TEST(GenIntegral, FirstPointAndEndpointZero) {
  const Grid g(0.0, 4);
  const GridFunction f(g, {3, -2, 1, 5, 7});
  const auto alpha = OrderFunction::constant(g, 0.35, OrderClass::Difference);
  const auto left = gen_integral(OperatorSpec(Side::Left, Family::GenIntegral, Variant::TypeI, alpha), f);
  EXPECT_EQ(left.lo(), 0);
  EXPECT_EQ(left[0], 0.0);
  EXPECT_LT(rel_err(left[1], -2.0), 1e-14);
  const auto right = gen_integral(OperatorSpec(Side::Right, Family::GenIntegral, Variant::TypeI, alpha), f);
  EXPECT_EQ(right.hi(), 4);
  EXPECT_EQ(right[4], 0.0);
  EXPECT_LT(rel_err(right[3], 5.0), 1e-14);
}

TEST(GenIntegral, NormalizedVariableOrderOracle) {
  const Grid g(0.0, 5);
  const OrderFunction alpha(g, kAlphaDiff, OrderClass::Difference);
  const auto out = gen_integral(
      OperatorSpec(Side::Left, Family::GenIntegral, Variant::TypeII, alpha, Normalization::AB),
      GridFunction(g, kF));
  const double want[] = {-1.023692394634440410737483, 0.6009477393857409660340612,
                         1.042817450916434289003627, 0.5183272988641307098378843,
                         1.643370516262277748358027};
  for (int t = 1; t <= 5; ++t) EXPECT_LT(rel_err(out[t], want[t - 1]), 1e-13) << t;
}

TEST(ABSum, OracleExample) {
  const Grid g(0.0, 4);
  const auto out = ab_sum(OperatorSpec(Side::Left, Family::ABSum, Variant::TypeI,
                                       OrderFunction::constant(g, 0.5, OrderClass::Sum)),
                          GridFunction::constant(g, 1.0));
  EXPECT_LT(rel_err(out[2], 1.25), 1e-15);
}

TEST(ABSum, ZeroOrderRecoversFunction) {
  std::mt19937_64 rng(7);
  const Grid g(0.0, 9);
  const GridFunction f(g, random_values(rng, 10, -1, 1));
  const auto alpha = OrderFunction::constant(g, 0.0, OrderClass::ABSum);
  for (auto norm : {Normalization::Unit, Normalization::AB}) {
    for (auto v : {Variant::TypeI, Variant::TypeII, Variant::Convolution}) {
      const auto left = ab_sum(OperatorSpec(Side::Left, Family::ABSum, v, alpha, norm), f);
      for (int t = 1; t <= 9; ++t) EXPECT_EQ(left[t], f[t]);
      const auto right = ab_sum(OperatorSpec(Side::Right, Family::ABSum, v, alpha, norm), f);
      for (int t = 0; t <= 8; ++t) EXPECT_EQ(right[t], f[t]);
    }
  }
}

TEST(ABSum, UnitOrderRecoversOrdinarySum) {
  std::mt19937_64 rng(8);
  const Grid g(0.0, 9);
  const GridFunction f(g, random_values(rng, 10, -1, 1));
  const auto alpha = OrderFunction::constant(g, 1.0, OrderClass::ABSum);
  for (auto norm : {Normalization::Unit, Normalization::AB}) {
    const auto left = ab_sum(OperatorSpec(Side::Left, Family::ABSum, Variant::TypeI, alpha, norm), f);
    double run = 0.0;
    for (int t = 1; t <= 9; ++t) {
      run += f[t];
      EXPECT_LE(rel_err(left[t], run), 1e-14) << t;
    }
    const auto right = ab_sum(OperatorSpec(Side::Right, Family::ABSum, Variant::TypeII, alpha, norm), f);
    double tail = 0.0;
    for (int t = 8; t >= 0; --t) {
      tail += f[t];
      EXPECT_LE(rel_err(right[t], tail), 1e-14) << t;
    }
  }
}

TEST(ABRDiff, SquareOracle) {
  const Grid g(0.0, 5);
  const auto out = abr_diff(OperatorSpec(Side::Left, Family::ABRDiff, Variant::TypeI,
                                         OrderFunction::constant(g, 0.3, OrderClass::Difference)),
                            GridFunction::sample(g, [](double t) { return t * t; }));
  const double want[] = {1.0, 3.91, 8.5896, 14.953351, 22.93934206};
  EXPECT_EQ(out.lo(), 1);
  for (int t = 1; t <= 5; ++t) EXPECT_LT(rel_err(out[t], want[t - 1]), 1e-13) << t;
}

TEST(ABCDiff, VariableOrderOracle) {
  const Grid g(0.0, 5);
  const OrderFunction alpha(g, kAlphaDiff, OrderClass::Difference);
  const auto f = GridFunction::sample(g, [](double t) { return std::pow(2.0, t); });
  const auto o1 = abc_diff(OperatorSpec(Side::Left, Family::ABCDiff, Variant::TypeI, alpha), f);
  const auto o2 = abc_diff(OperatorSpec(Side::Left, Family::ABCDiff, Variant::TypeII, alpha), f);
  const double w1[] = {1, 2.84, 6.92006875, 14.183751, 26.9659534277734375};
  const double w2[] = {1, 2.9375, 6.58234375, 14.294885546875, 29.3903903193359375};
  for (int t = 1; t <= 5; ++t) {
    EXPECT_LT(rel_err(o1[t], w1[t - 1]), 1e-13) << t;
    EXPECT_LT(rel_err(o2[t], w2[t - 1]), 1e-13) << t;
  }
}

TEST(ABCDiff, ConstantHasZeroDerivative) {
  const Grid g(1.0, 7);
  const auto alpha = OrderFunction::constant(g, 0.2, OrderClass::Difference);
  for (auto side : {Side::Left, Side::Right}) {
    const auto out = abc_diff(OperatorSpec(side, Family::ABCDiff, Variant::TypeII, alpha, Normalization::AB),
                              GridFunction::constant(g, 4.0));
    for (double x : out.values()) EXPECT_EQ(x, 0.0);
  }
}

TEST(Operators, Linearity) {
  std::mt19937_64 rng(11);
  const Grid g(0.0, 8);
  const GridFunction f(g, random_values(rng, 9, -1, 1));
  const GridFunction h(g, random_values(rng, 9, -1, 1));
  std::vector<double> comb(9);
  for (int k = 0; k <= 8; ++k) comb[static_cast<std::size_t>(k)] = 2.0 * f[k] - 3.0 * h[k];
  for (Family fam : kFamilies) {
    const OrderFunction alpha(g, random_values(rng, 9, 0.05, 0.45), class_for(fam));
    for (Side side : {Side::Left, Side::Right}) {
      const OperatorSpec s(side, fam, Variant::TypeII, alpha, Normalization::AB);
      const auto a = apply(s, f), b = apply(s, h), c = apply(s, GridFunction(g, comb));
      for (int t = c.lo(); t <= c.hi(); ++t) EXPECT_NEAR(c[t], 2.0 * a[t] - 3.0 * b[t], 1e-13);
    }
  }
}

TEST(Operators, ConstantOrderCollapsesVariants) {
  std::mt19937_64 rng(12);
  for (int n : {2, 7, 20}) {
    const Grid g(-2.0, n);
    const GridFunction f(g, random_values(rng, n + 1, -1, 1));
    for (Family fam : kFamilies) {
      const auto alpha = OrderFunction::constant(g, 0.37, class_for(fam));
      for (Side side : {Side::Left, Side::Right}) {
        const auto one = apply(OperatorSpec(side, fam, Variant::TypeI, alpha), f);
        const auto two = apply(OperatorSpec(side, fam, Variant::TypeII, alpha), f);
        const auto conv = apply(OperatorSpec(side, fam, Variant::Convolution, alpha), f);
        EXPECT_LE(max_rel(one.values(), two.values()), 1e-12);
        EXPECT_LE(max_rel(one.values(), conv.values()), 1e-12);
      }
    }
  }
}

TEST(Operators, TimeReversalDuality) {
  std::mt19937_64 rng(13);
  for (int n : {3, 10, 20}) {
    const Grid g(0.5, n);
    const GridFunction f(g, random_values(rng, n + 1, -1, 1));
    const GridFunction fr = reverse(f);
    for (Family fam : kFamilies) {
      const auto alpha = OrderFunction::constant(g, 0.29, class_for(fam));
      for (auto norm : {Normalization::Unit, Normalization::AB}) {
        const auto right = apply(OperatorSpec(Side::Right, fam, Variant::TypeI, alpha, norm), f);
        const auto left = reverse(apply(OperatorSpec(Side::Left, fam, Variant::TypeI, alpha, norm), fr));
        ASSERT_EQ(right.lo(), left.lo()) << to_string(fam);
        ASSERT_EQ(right.hi(), left.hi()) << to_string(fam);
        EXPECT_LE(max_rel(right.values(), left.values()), 1e-12) << to_string(fam);
      }
    }
  }
}

TEST(Operators, KernelMatrixMatchesDirectSum) {
  std::mt19937_64 rng(14);
  for (int n : {2, 5, 13, 20}) {
    const Grid g(0.0, n);
    const GridFunction f(g, random_values(rng, n + 1, -1, 1));
    for (Family fam : kFamilies) {
      const OrderFunction alpha(g, random_values(rng, n + 1, 0.02, 0.48), class_for(fam));
      for (Side side : {Side::Left, Side::Right}) {
        for (auto v : {Variant::TypeI, Variant::TypeII, Variant::Convolution}) {
          for (auto norm : {Normalization::Unit, Normalization::AB}) {
            const OperatorSpec s(side, fam, v, alpha, norm);
            const auto direct = apply(s, f);
            const auto matrix = apply(kernel_matrix(s), f);
            ASSERT_EQ(direct.lo(), matrix.lo());
            ASSERT_EQ(direct.hi(), matrix.hi());
            EXPECT_LE(max_rel(matrix.values(), direct.values()), 1e-12)
                << to_string(fam) << ' ' << to_string(side) << ' ' << to_string(v);
          }
        }
      }
    }
  }
}

TEST(Operators, PartialSupport) {
  const Grid g(0.0, 5);
  const auto alpha = OrderFunction::constant(g, 0.5, OrderClass::Sum);
  const GridFunction part(g, 1, 3, {1, 2, 3});
  const auto left = frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI, alpha), part);
  EXPECT_EQ(left.lo(), 1);
  EXPECT_EQ(left.hi(), 3);
  EXPECT_THROW(frac_sum(OperatorSpec(Side::Right, Family::FracSum, Variant::TypeI, alpha), part),
               DomainError);
  EXPECT_THROW(frac_sum(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI, alpha),
                        GridFunction(g, 2, 5, {1, 2, 3, 4})),
               DomainError);
}

TEST(Operators, OrderClassEnforced) {
  const Grid g(0.0, 4);
  EXPECT_THROW(OperatorSpec(Side::Left, Family::GenIntegral, Variant::TypeI,
                            OrderFunction::constant(g, 0.3, OrderClass::Sum)),
               DomainError);
  EXPECT_THROW(OperatorSpec(Side::Left, Family::FracSum, Variant::TypeI,
                            OrderFunction::constant(g, 0.3, OrderClass::Difference)),
               DomainError);
  const OperatorSpec ok(Side::Left, Family::FracSum, Variant::TypeI,
                        OrderFunction::constant(g, 0.3, OrderClass::Sum));
  EXPECT_THROW(abc_diff(ok, GridFunction::constant(g, 1.0)), InvalidArgument);
}

TEST(Operators, GridMismatch) {
  const OperatorSpec s(Side::Left, Family::FracSum, Variant::TypeI,
                       OrderFunction::constant(Grid(0.0, 4), 0.3, OrderClass::Sum));
  EXPECT_THROW(apply(s, GridFunction::constant(Grid(0.0, 5), 1.0)), DomainError);
}
