#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dmc/identities.hpp"
#include "dmc/malliavin.hpp"
#include "oracles.hpp"

using namespace dmc;

namespace {

using oracle::Table;

// Iterated gradients over increasing tuples, straight from the oracle.
void tuples(int dim, int d, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int k = from; k < dim; ++k) {
    cur.push_back(k);
    tuples(dim, d, k + 1, cur, out);
    cur.pop_back();
  }
}

Table oracle_iterated(const oracle::Space& s, Table f, const std::vector<int>& ks) {
  for (int k : ks) f = oracle::grad(s, f, k);
  return f;
}

double oracle_energy(const oracle::Space& s, const Table& f, const Table& g, int d) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  tuples(s.dim(), d, 0, cur, all);
  double acc = 0.0;
  for (const auto& t : all) {
    const Table a = oracle_iterated(s, f, t), b = oracle_iterated(s, g, t);
    for (std::size_t w = 0; w < s.size(); ++w) acc += a[w] * b[w] * oracle::prob(s, w);
  }
  return acc;
}

double oracle_remainder(const oracle::Space& s, const Table& f, const Table& g, int d) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  tuples(s.dim(), d, 0, cur, all);
  double acc = 0.0;
  for (const auto& t : all) {
    const int last = t.back();
    const Table a = oracle::cond(s, oracle_iterated(s, f, t), last - 1);
    const Table b = oracle::cond(s, oracle_iterated(s, g, t), last - 1);
    for (std::size_t w = 0; w < s.size(); ++w) acc += a[w] * b[w] * oracle::prob(s, w);
  }
  return acc;
}

double scale_of(const RandomVariable& f, const RandomVariable& g) {
  return std::max(1.0, f.max_abs() * g.max_abs());
}

}  // namespace

TEST(Clark, Examples) {
  const SpacePtr sp = new_space(3, {0.3, 0.6, 0.45, 0.8});
  const ClarkDecomposition c = clark(RandomVariable(sp, 2.0));
  EXPECT_DOUBLE_EQ(c.mean, 2.0);
  for (const auto& e : c.integrand.entries()) EXPECT_LT(e.max_abs(), 1e-15);

  const SpacePtr half = new_space(1, {0.5, 0.5});
  const ClarkDecomposition x = clark(x_rv(half, 0) * x_rv(half, 1));
  EXPECT_NEAR(x.mean, 0.0, 1e-15);
  EXPECT_LT(x.integrand[0].max_abs(), 1e-15);
  EXPECT_LT(max_abs_diff(x.integrand[1], x_rv(half, 0)), 1e-15);

  const ClarkDecomposition y = clark(y_rv(sp, 3));
  for (int k = 0; k < 3; ++k) EXPECT_LT(y.integrand[static_cast<std::size_t>(k)].max_abs(), 1e-14);
  for (double v : y.integrand[3].values()) EXPECT_NEAR(v, 1.0, 1e-14);
  EXPECT_EQ(y.integrand.tag(), Measurability::kPredictable);
}

TEST(Clark, ReconstructionAndBound) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 9);
    const RandomVariable f = oracle::random_rv(rng, sp);
    const ClarkDecomposition c = clark(f);
    EXPECT_LT(max_abs_diff(c.reconstruct(), f), 1e-12);
    EXPECT_TRUE(is_predictable(c.integrand));
    const double unorm = expectation(inner_product(c.integrand, c.integrand));
    EXPECT_LE(unorm, expectation(f * f) + 1e-12);
  }
  // Equality on the first chaos.
  const SpacePtr sp = new_space(2, {0.3, 0.6, 0.45});
  const RandomVariable f = 0.5 * y_rv(sp, 0) - 2.0 * y_rv(sp, 2);
  const ClarkDecomposition c = clark(f);
  EXPECT_NEAR(expectation(inner_product(c.integrand, c.integrand)), expectation(f * f), 1e-13);
}

TEST(Clark, IntegrandMatchesOracle) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 5);
    const RandomVariable f = oracle::random_rv(rng, sp);
    const auto os = oracle::of(*sp);
    const ClarkDecomposition c = clark(f);
    for (int k = 0; k <= sp->horizon(); ++k) {
      const Table expect = oracle::cond(os, oracle::grad(os, oracle::values(f), k), k - 1);
      EXPECT_LT(oracle::max_abs_diff(oracle::values(c.integrand[static_cast<std::size_t>(k)]), expect), 1e-12);
    }
  }
}

TEST(ClarkFrom, Examples) {
  std::mt19937_64 rng(63);
  const SpacePtr sp = oracle::random_space(rng, 5);
  const RandomVariable f = oracle::random_rv(rng, sp);
  const ClarkTail top = clark_from(f, 5);
  EXPECT_LT(max_abs_diff(top.head, f), 1e-13);
  for (const auto& e : top.integrand.entries()) EXPECT_EQ(e.max_abs(), 0.0);

  const ClarkTail base = clark_from(f, -1);
  const ClarkDecomposition c = clark(f);
  for (double v : base.head.values()) EXPECT_NEAR(v, c.mean, 1e-13);
  for (int k = 0; k <= 5; ++k) {
    const auto i = static_cast<std::size_t>(k);
    EXPECT_LT(max_abs_diff(base.integrand[i], c.integrand[i]), 1e-13);
  }

  for (int a = -1; a <= 5; ++a) {
    const ClarkTail t = clark_from(f, a);
    EXPECT_LT(max_abs_diff(t.head + integral(t.integrand), f), 1e-12);
    EXPECT_LT(std::abs(clark_energy_residual(f, a)), 1e-12);
  }
  EXPECT_THROW(clark_from(f, 6), Error);
  EXPECT_THROW(clark_from(f, -2), Error);
}

TEST(MartingaleRepresentation, Examples) {
  std::mt19937_64 rng(64);
  const SpacePtr sp = oracle::random_space(rng, 4);
  const RandomVariable f = oracle::random_rv(rng, sp);
  std::vector<RandomVariable> m;
  for (int n = -1; n <= 4; ++n) m.push_back(conditional_expectation(f, n));
  const ProcessRV u = martingale_representation(m);
  const ClarkDecomposition c = clark(f);
  for (int k = 0; k <= 4; ++k) {
    const auto i = static_cast<std::size_t>(k);
    EXPECT_LT(max_abs_diff(u[i], c.integrand[i]), 1e-12);
    EXPECT_LT(max_abs_diff(m[0] + integral_partial(u, k), m[i + 1]), 1e-12);
  }

  const std::vector<RandomVariable> flat(6, RandomVariable(sp, 1.25));
  const ProcessRV uf = martingale_representation(flat);
  for (const auto& e : uf.entries()) EXPECT_LT(e.max_abs(), 1e-15);

  std::vector<RandomVariable> walk{RandomVariable(sp, 0.0)};
  for (int n = 0; n <= 4; ++n) walk.push_back(walk.back() + y_rv(sp, n));
  const ProcessRV uw = martingale_representation(walk);
  for (const auto& e : uw.entries()) {
    for (double v : e.values()) EXPECT_NEAR(v, 1.0, 1e-13);
  }

  std::vector<RandomVariable> drift = walk;
  drift[3] += 0.01;
  try {
    martingale_representation(drift);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNotAMartingale);
  }
  std::vector<RandomVariable> peek = walk;
  peek[1] = y_rv(sp, 1);  // M_0 reads X_1
  EXPECT_THROW(martingale_representation(peek), Error);
  EXPECT_THROW(martingale_representation(std::vector<RandomVariable>(3, RandomVariable(sp, 0.0))), Error);
}

TEST(Poincare, Examples) {
  const SpacePtr sp = new_space(2, {0.3, 0.6, 0.45});
  const PoincareSides a = poincare_sides(y_rv(sp, 0));
  EXPECT_NEAR(a.variance, 1.0, 1e-14);
  EXPECT_NEAR(a.energy, 1.0, 1e-14);
  const PoincareSides b = poincare_sides(RandomVariable(sp, 3.0));
  EXPECT_NEAR(b.variance, 0.0, 1e-14);
  EXPECT_NEAR(b.energy, 0.0, 1e-14);
  const PoincareSides c = poincare_sides(y_product(sp, 0b011));
  EXPECT_NEAR(c.variance, 1.0, 1e-13);
  EXPECT_NEAR(c.energy, 2.0, 1e-13);

  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr s = oracle::random_space(rng, trial % 8);
    const PoincareSides r = poincare_sides(oracle::random_rv(rng, s));
    EXPECT_LE(r.variance, r.energy + 1e-12);
  }
}

TEST(Covariance, Examples) {
  const SpacePtr sp = new_space(2, {0.3, 0.6, 0.45});
  const RandomVariable y0 = y_rv(sp, 0), y1 = y_rv(sp, 1);
  EXPECT_NEAR(covariance_direct(y0, y1), 0.0, 1e-14);
  EXPECT_NEAR(covariance_direct(y0, y0), 1.0, 1e-14);
  EXPECT_NEAR(covariance_clark(y0, y0), 1.0, 1e-14);
  EXPECT_NEAR(covariance_semigroup(y0, y0), 1.0, 1e-14);
  EXPECT_NEAR(covariance_semigroup(y_rv(sp, 2), y_rv(sp, 2)), 1.0, 1e-14);
  std::mt19937_64 rng(66);
  const RandomVariable f = oracle::random_rv(rng, sp);
  const RandomVariable c(sp, 4.0);
  EXPECT_NEAR(covariance_clark(f, c), 0.0, 1e-14);
  EXPECT_NEAR(covariance_semigroup(f, c), 0.0, 1e-14);
  EXPECT_GE(covariance_direct(f, f), 0.0);

  const RandomVariable yy = y_product(sp, 0b011);
  EXPECT_NEAR(iterated_gradient_energy(yy, yy, 1), 2.0, 1e-13);
  EXPECT_NEAR(iterated_remainder(yy, yy, 1), 1.0, 1e-13);
  EXPECT_NEAR(covariance_iterated(yy, yy, 1), 1.0, 1e-13);
  EXPECT_THROW(covariance_iterated(yy, yy, -1), Error);
}

TEST(Covariance, AllEvaluatorsAgreeWithOracle) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 8);
    const RandomVariable f = oracle::random_rv(rng, sp), g = oracle::random_rv(rng, sp);
    const auto os = oracle::of(*sp);
    const double expect = oracle::covariance(os, oracle::values(f), oracle::values(g));
    const double tol = 1e-12 * scale_of(f, g);
    EXPECT_NEAR(covariance_direct(f, g), expect, tol);
    EXPECT_NEAR(covariance_clark(f, g), expect, tol);
    EXPECT_NEAR(covariance_semigroup(f, g), expect, tol);
    for (int n = 0; n <= 3; ++n) EXPECT_NEAR(covariance_iterated(f, g, n), expect, tol) << "n=" << n;
  }
}

TEST(Covariance, IteratedTermsMatchOracle) {
  std::mt19937_64 rng(68);
  for (int trial = 0; trial < 10; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, 1 + trial % 4);
    const RandomVariable f = oracle::random_rv(rng, sp), g = oracle::random_rv(rng, sp);
    const auto os = oracle::of(*sp);
    const Table tf = oracle::values(f), tg = oracle::values(g);
    for (int d = 1; d <= 3; ++d) {
      EXPECT_NEAR(iterated_gradient_energy(f, g, d), oracle_energy(os, tf, tg, d), 1e-12);
    }
    for (int n = 0; n <= 3; ++n) {
      EXPECT_NEAR(iterated_remainder(f, g, n), oracle_remainder(os, tf, tg, n + 1), 1e-12);
      // Partial alternating sum plus signed remainder.
      double acc = 0.0;
      for (int d = 1; d <= n; ++d) acc += ((d % 2) ? 1.0 : -1.0) * oracle_energy(os, tf, tg, d);
      acc += ((n % 2) ? -1.0 : 1.0) * oracle_remainder(os, tf, tg, n + 1);
      EXPECT_NEAR(acc, oracle::covariance(os, tf, tg), 1e-12);
    }
  }
}

TEST(Covariance, RemainderNonNegativeOnDiagonal) {
  std::mt19937_64 rng(69);
  for (int trial = 0; trial < 20; ++trial) {
    const SpacePtr sp = oracle::random_space(rng, trial % 6);
    const RandomVariable f = oracle::random_rv(rng, sp);
    for (int n = 0; n <= 3; ++n) EXPECT_GE(iterated_remainder(f, f, n), -1e-12);
  }
}

TEST(VarianceSandwich, Examples) {
  const SpacePtr sp = new_space(2, {0.3, 0.6, 0.45});
  const VarianceBounds a = variance_sandwich(y_rv(sp, 0), 1);
  EXPECT_NEAR(a.lower, 1.0, 1e-14);
  EXPECT_NEAR(a.upper, 1.0, 1e-14);
  const VarianceBounds b = variance_sandwich(RandomVariable(sp, 2.0), 2);
  EXPECT_NEAR(b.lower, 0.0, 1e-14);
  EXPECT_NEAR(b.upper, 0.0, 1e-14);
  EXPECT_THROW(variance_sandwich(y_rv(sp, 0), 0), Error);

  std::mt19937_64 rng(70);
  for (int trial = 0; trial < 30; ++trial) {
    const SpacePtr s = oracle::random_space(rng, trial % 8);
    const RandomVariable f = oracle::random_rv(rng, s);
    const double var = covariance_direct(f, f);
    for (int n = 1; n <= 3; ++n) {
      const VarianceBounds r = variance_sandwich(f, n);
      EXPECT_LE(r.lower, var + 1e-12);
      EXPECT_GE(r.upper, var - 1e-12);
    }
  }
}

TEST(Fkg, Examples) {
  const SpacePtr sp = new_space(3, {0.3, 0.6, 0.45, 0.5});
  const RandomVariable s = s_rv(sp, 3);
  const FkgResult same = fkg_check(s, s);
  EXPECT_TRUE(same.monotone_f);
  EXPECT_TRUE(same.monotone_g);
  EXPECT_GE(same.covariance, 0.0);
  EXPECT_TRUE(same.predictable_gradients_aligned);

  const FkgResult opp = fkg_check(s, -s);
  EXPECT_TRUE(opp.monotone_f);
  EXPECT_FALSE(opp.monotone_g);

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const SpacePtr p = oracle::random_space(rng, trial % 7);
    const RandomVariable f = oracle::random_monotone(rng, p), g = oracle::random_monotone(rng, p);
    const FkgResult r = fkg_check(f, g);
    ASSERT_TRUE(r.monotone_f && r.monotone_g);
    EXPECT_GE(r.covariance, -1e-12);
    EXPECT_TRUE(r.predictable_gradients_aligned);
  }
  EXPECT_FALSE(is_nondecreasing(y_product(sp, 0b11)));
  EXPECT_TRUE(is_nondecreasing(x_rv(sp, 2)));
}
