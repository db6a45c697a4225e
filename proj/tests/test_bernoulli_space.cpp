#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dmc/bernoulli_space.hpp"
#include "oracles.hpp"

using namespace dmc;

namespace {

template <class Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dmc::Error thrown";
  return Errc::kInvalidInput;
}

}  // namespace

TEST(Space, SymmetricCoordinate) {
  const SpacePtr sp = new_space(0, {0.5});
  EXPECT_DOUBLE_EQ(sp->phi(0), 0.0);
  EXPECT_DOUBLE_EQ(sp->y_plus(0), 1.0);
  EXPECT_DOUBLE_EQ(sp->y_minus(0), -1.0);
}

TEST(Space, QuarterCoordinate) {
  const SpacePtr sp = new_space(0, {0.25});
  EXPECT_DOUBLE_EQ(sp->q(0), 0.75);
  EXPECT_NEAR(sp->phi(0), 0.5 / std::sqrt(0.1875), 1e-15);
  EXPECT_NEAR(sp->phi(0), 1.154700538, 1e-9);
}

TEST(Space, UniformTwoStep) {
  const SpacePtr sp = new_space(1, {0.5, 0.5});
  EXPECT_EQ(sp->size(), 4u);
  for (std::uint64_t w = 0; w < 4; ++w) EXPECT_DOUBLE_EQ(outcome_probability(*sp, OutcomeIndex(w)), 0.25);
}

TEST(Space, Errors) {
  EXPECT_EQ(error_code([] { new_space(25, std::vector<double>(26, 0.5)); }), Errc::kHorizonTooLarge);
  EXPECT_EQ(error_code([] { new_space(3, {0.5, 0.5, 0.5, 0.5}, 2); }), Errc::kHorizonTooLarge);
  EXPECT_EQ(error_code([] { new_space(0, {0.0}); }), Errc::kProbabilityOutOfRange);
  EXPECT_EQ(error_code([] { new_space(0, {1.0}); }), Errc::kProbabilityOutOfRange);
  EXPECT_EQ(error_code([] { new_space(0, {5e-10}); }), Errc::kProbabilityOutOfRange);
  EXPECT_EQ(error_code([] { new_space(0, {std::nan("")}); }), Errc::kProbabilityOutOfRange);
  EXPECT_NO_THROW(new_space(0, {1e-9}));
  const SpacePtr sp = new_space(1, {0.5, 0.5});
  EXPECT_EQ(error_code([&] { sp->probability(OutcomeIndex(4)); }), Errc::kIndexOutOfRange);
  EXPECT_EQ(error_code([&] { conditional_expectation(RandomVariable(sp, 1.0), 2); }),
            Errc::kTimeIndexOutOfRange);
  EXPECT_EQ(error_code([&] { conditional_expectation(RandomVariable(sp, 1.0), -2); }),
            Errc::kTimeIndexOutOfRange);
  EXPECT_EQ(error_code([&] { y_rv(sp, 2); }), Errc::kIndexOutOfRange);
}

TEST(Space, OutcomeProbabilityExamples) {
  const SpacePtr a = new_space(0, {0.25});
  EXPECT_DOUBLE_EQ(a->probability(OutcomeIndex(1)), 0.25);
  const SpacePtr b = new_space(1, {0.25, 0.75});
  // X_0 = +1 (bit 0 set), X_1 = -1.
  EXPECT_DOUBLE_EQ(b->probability(OutcomeIndex(1)), 0.0625);
}

TEST(Space, DerivedInvariantsOnRandomSpaces) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 8);
    double total = 0.0;
    for (double w : sp->probabilities()) total += w;
    EXPECT_NEAR(total, 1.0, 1e-14);
    for (int k = 0; k <= sp->horizon(); ++k) {
      const double p = sp->p(k), q = sp->q(k);
      EXPECT_NEAR(p * sp->y_plus(k) + q * sp->y_minus(k), 0.0, 1e-14);
      EXPECT_NEAR(p * sp->y_plus(k) * sp->y_plus(k) + q * sp->y_minus(k) * sp->y_minus(k), 1.0, 1e-14);
      for (bool up : {false, true}) {
        const double y = sp->y(k, up);
        EXPECT_NEAR(y * y - 1.0 - sp->phi(k) * y, 0.0, 1e-13 * std::max(1.0, y * y));
      }
    }
  }
}

TEST(Space, MomentsOfY) {
  std::mt19937_64 rng(3);
  const SpacePtr sp = oracle::random_space(rng, 4);
  for (int k = 0; k <= 4; ++k) {
    const RandomVariable yk = y_rv(sp, k);
    EXPECT_NEAR(expectation(yk), 0.0, 1e-12);
    EXPECT_NEAR(expectation(yk * yk), 1.0, 1e-12);
    for (int l = k + 1; l <= 4; ++l) EXPECT_NEAR(expectation(yk * y_rv(sp, l)), 0.0, 1e-12);
  }
}

TEST(Expectation, Examples) {
  const SpacePtr sp = new_space(2, {0.3, 0.6, 0.5});
  EXPECT_NEAR(expectation(RandomVariable(sp, 4.2)), 4.2, 1e-15);
  EXPECT_NEAR(expectation(y_rv(sp, 0)), 0.0, 1e-15);
  const RandomVariable y = y_rv(sp, 0);
  EXPECT_NEAR(expectation(y * y), 1.0, 1e-15);
}

TEST(ConditionalExpectation, Examples) {
  const SpacePtr sp = new_space(1, {0.5, 0.5});
  const RandomVariable f = x_rv(sp, 0) * x_rv(sp, 1);
  EXPECT_EQ(max_abs_diff(conditional_expectation(f, 1), f), 0.0);
  const RandomVariable c = conditional_expectation(f, 0);
  for (double v : c.values()) EXPECT_NEAR(v, 0.0, 1e-15);
  const RandomVariable y1 = conditional_expectation(y_rv(sp, 1), 0);
  for (double v : y1.values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ConditionalExpectation, MatchesOracleAndTower) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, 1 + trial % 5);
    const RandomVariable f = oracle::random_rv(rng, sp);
    const auto os = oracle::of(*sp);
    for (int n = -1; n <= sp->horizon(); ++n) {
      const RandomVariable c = conditional_expectation(f, n);
      EXPECT_LT(oracle::max_abs_diff(oracle::values(c), oracle::cond(os, oracle::values(f), n)), 1e-13);
      EXPECT_TRUE(independent_of_bits_from(c, n + 1, 1e-13));
      for (int m = -1; m <= n; ++m) {
        EXPECT_LT(max_abs_diff(conditional_expectation(c, m), conditional_expectation(f, m)), 1e-13);
      }
    }
    EXPECT_NEAR(expectation(conditional_expectation(f, 1)), expectation(f), 1e-13);
  }
}

TEST(RandomVariables, XYSExamples) {
  const SpacePtr sym = new_space(3, std::vector<double>(4, 0.5));
  EXPECT_EQ(max_abs_diff(y_rv(sym, 0), x_rv(sym, 0)), 0.0);
  EXPECT_DOUBLE_EQ(s_rv(sym, 3)[15], 4.0);
  EXPECT_DOUBLE_EQ(s_rv(sym, -1)[15], 0.0);

  const SpacePtr q = new_space(0, {0.25});
  const RandomVariable x = x_rv(q, 0);
  const RandomVariable y = y_rv(q, 0);
  for (std::size_t w = 0; w < 2; ++w) {
    EXPECT_NEAR(x[w], 2.0 * std::sqrt(0.1875) * y[w] - 0.5, 1e-15);
    EXPECT_NEAR(x[w], 0.8660254037844386 * y[w] - 0.5, 1e-12);
  }
}

TEST(YProduct, MatchesOracle) {
  std::mt19937_64 rng(8);
  const SpacePtr sp = oracle::random_space(rng, 3);
  const auto os = oracle::of(*sp);
  for (std::uint64_t a = 0; a < 16; ++a) {
    const RandomVariable ya = y_product(sp, a);
    for (std::size_t w = 0; w < 16; ++w) EXPECT_NEAR(ya[w], oracle::y_prod(os, w, a), 1e-13);
  }
}

TEST(Process, MeasurabilityTags) {
  const SpacePtr sp = new_space(2, {0.5, 0.4, 0.3});
  std::vector<RandomVariable> bad{RandomVariable(sp, 1.0), y_rv(sp, 1), RandomVariable(sp, 0.0)};
  try {
    ProcessRV(bad, Measurability::kPredictable);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotPredictable);
  }
  EXPECT_NO_THROW(ProcessRV(bad, Measurability::kAdapted));
  std::vector<RandomVariable> u0_random{y_rv(sp, 0), RandomVariable(sp, 0.0), RandomVariable(sp, 0.0)};
  EXPECT_THROW(ProcessRV(u0_random, Measurability::kPredictable), Error);
  EXPECT_FALSE(is_predictable(ProcessRV(bad)));
  EXPECT_TRUE(is_adapted(ProcessRV(bad)));
}

TEST(Integral, Examples) {
  const SpacePtr sp = new_space(1, {0.5, 0.5});
  std::vector<RandomVariable> e0{RandomVariable(sp, 1.0), RandomVariable(sp, 0.0)};
  EXPECT_EQ(max_abs_diff(integral(ProcessRV(e0, Measurability::kPredictable)), y_rv(sp, 0)), 0.0);
  EXPECT_EQ(integral(ProcessRV::zero(sp)).max_abs(), 0.0);
  std::vector<RandomVariable> u{RandomVariable(sp, 0.0), x_rv(sp, 0)};
  const ProcessRV pu(u, Measurability::kPredictable);
  EXPECT_EQ(max_abs_diff(integral(pu), x_rv(sp, 0) * x_rv(sp, 1)), 0.0);

  std::vector<RandomVariable> v{RandomVariable(sp, 1.0), x_rv(sp, 0)};
  const ProcessRV pv(v, Measurability::kPredictable);
  EXPECT_LT(max_abs_diff(integral_partial(pv, 0), y_rv(sp, 0)), 1e-15);
  EXPECT_LT(max_abs_diff(integral_partial(pv, 1), integral(pv)), 1e-15);
  EXPECT_EQ(integral_partial(pv, -1).max_abs(), 0.0);

  try {
    integral(ProcessRV(std::vector<RandomVariable>{y_rv(sp, 0), RandomVariable(sp, 0.0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotPredictable);
  }
}

TEST(Integral, ItoIsometries) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 9);
    const ProcessRV u = oracle::random_predictable(rng, sp);
    const ProcessRV v = oracle::random_predictable(rng, sp);
    const RandomVariable ju = integral(u), jv = integral(v);
    const double lhs = expectation(ju * jv);
    const double rhs = expectation(inner_product(u, v));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    // Conditional form on [n, N].
    for (int n = 0; n <= sp->horizon(); ++n) {
      RandomVariable tail_u(sp, 0.0), tail_sq(sp, 0.0);
      for (int k = n; k <= sp->horizon(); ++k) {
        tail_u += u[static_cast<std::size_t>(k)] * y_rv(sp, k);
        tail_sq += u[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k)];
      }
      const RandomVariable a = conditional_expectation(tail_u * tail_u, n - 1);
      const RandomVariable b = conditional_expectation(tail_sq, n - 1);
      EXPECT_LT(max_abs_diff(a, b), 1e-12 * std::max(1.0, b.max_abs()));
    }
    // Martingale property of the indefinite integral.
    for (int k = 0; k <= sp->horizon(); ++k) {
      EXPECT_LT(max_abs_diff(integral_partial(u, k), conditional_expectation(ju, k)),
                1e-12 * std::max(1.0, ju.max_abs()));
    }
  }
}

TEST(RandomVariable, ArithmeticAndSpaceChecks) {
  const SpacePtr a = new_space(1, {0.5, 0.5});
  const SpacePtr b = new_space(1, {0.5, 0.4});
  EXPECT_THROW(RandomVariable(a, 1.0) + RandomVariable(b, 1.0), Error);
  EXPECT_THROW(RandomVariable(a, std::vector<double>{1.0, 2.0}), Error);
  const RandomVariable f(a, std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(f.at(OutcomeIndex(2)), 3.0);
  EXPECT_DOUBLE_EQ((f * 2.0 + 1.0)[3], 9.0);
  EXPECT_DOUBLE_EQ(f.min(), 1.0);
  EXPECT_DOUBLE_EQ(f.max(), 4.0);
  const RandomVariable g = RandomVariable::from_function(a, [](OutcomeIndex w) { return w.x(1) * 1.0; });
  EXPECT_DOUBLE_EQ(g[0], -1.0);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
}
