#include <gtest/gtest.h>

#include <random>

#include "evshape/error.hpp"
#include "evshape/pmf.hpp"
#include "oracles.hpp"

using namespace evshape;

#define EXPECT_CODE(stmt, c)                       \
  try {                                            \
    stmt;                                          \
    ADD_FAILURE() << "no throw: " #stmt;           \
  } catch (const Error& e) {                       \
    EXPECT_EQ(e.code(), ErrorCode::c) << e.what(); \
  }

TEST(Pmf, Construction) {
  const auto p = make_pmf(0, {0.5, 0.3, 0.2});
  EXPECT_EQ(p.lo(), 0);
  EXPECT_EQ(p.hi(), 2);
  EXPECT_CODE(make_pmf(0, {0.5, 0.6}), MassSumViolation);
  EXPECT_CODE(make_pmf(0, {0.5, 0.3}), MassSumViolation);
  EXPECT_CODE(make_pmf(0, {1.2, -0.2}), NegativeMass);
  const auto s = make_pmf(3, {0.25, 0.25}, true);
  EXPECT_TRUE(s.is_sub());
  EXPECT_DOUBLE_EQ(s.total(), 0.5);
  EXPECT_EQ(s.lo(), 3);
  EXPECT_EQ(s.hi(), 4);
  // Zero padding is trimmed.
  const auto t = make_pmf(-2, {0, 0, 1, 0});
  EXPECT_EQ(t.lo(), 0);
  EXPECT_EQ(t.hi(), 0);
}

TEST(Pmf, Cdf) {
  const auto p = make_pmf(0, {0.5, 0.3, 0.2});
  EXPECT_DOUBLE_EQ(p.cdf(1), 0.8);
  EXPECT_EQ(p.cdf(-1), 0.0);
  EXPECT_DOUBLE_EQ(p.cdf(100), 1.0);
}

TEST(Pmf, Monotone) {
  EXPECT_TRUE(is_monotone(make_pmf(0, {0.5, 0.3, 0.2})));
  EXPECT_FALSE(is_monotone(make_pmf(0, {0.2, 0.4, 0.4})));
  EXPECT_TRUE(is_monotone(make_pmf(0, {1.0})));
  // A zero at 0 followed by mass is a rise.
  EXPECT_FALSE(is_monotone(make_pmf(1, {1.0})));
  EXPECT_CODE(is_monotone(make_pmf(-1, {1.0})), NegativeSupport);
}

TEST(Pmf, ThetaUnimodal) {
  const auto p = make_pmf(-1, {0.2, 0.6, 0.2});
  EXPECT_TRUE(is_theta_unimodal(p, 0));
  EXPECT_FALSE(is_theta_unimodal(p, 1));
  EXPECT_FALSE(is_theta_unimodal(make_pmf(0, {1.0}), 5));
  EXPECT_TRUE(is_theta_unimodal(make_pmf(0, {1.0}), 0));
}

TEST(Pmf, ModeSet) {
  EXPECT_EQ(mode_set(Pmf::uniform(0, 2)), ModeInterval::range(0, 2));
  EXPECT_EQ(mode_set(make_pmf(0, {1.0})), ModeInterval::range(0, 0));
  EXPECT_TRUE(mode_set(make_pmf(0, {0.4, 0.2, 0.4})).is_empty());
  EXPECT_TRUE(mode_set(make_pmf(0, {0.5}, true)).is_range());
}

TEST(Pmf, ModeSetMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 500; ++it) {
    const int k = 1 + static_cast<int>(rng() % 6);
    std::vector<double> m(k);
    for (auto& x : m) x = static_cast<double>(rng() % 3);
    double s = 0;
    for (double x : m) s += x;
    if (s == 0) continue;
    for (auto& x : m) x /= s;
    const auto p = make_pmf(static_cast<std::int64_t>(rng() % 5) - 2, m);
    const auto ms = mode_set(p);
    for (std::int64_t t = -10; t <= 10; ++t) {
      // theta-unimodal from the definition over a wide window.
      bool ok = true;
      for (std::int64_t n = -12; n <= 12; ++n) {
        if (n + 1 <= t && p.at(n) > p.at(n + 1)) ok = false;
        if (n >= t && p.at(n + 1) > p.at(n)) ok = false;
      }
      EXPECT_EQ(ms.contains(t), ok) << t;
    }
  }
}

TEST(Pmf, Empirical) {
  const std::vector<std::int64_t> a{0, 1, 1, 3};
  const auto p = empirical(a);
  EXPECT_EQ(p.lo(), 0);
  EXPECT_EQ(p.masses(), (std::vector<double>{0.25, 0.5, 0, 0.25}));
  const std::vector<std::int64_t> b{-2, -2};
  EXPECT_EQ(empirical(b).lo(), -2);
  EXPECT_CODE(empirical(std::vector<std::int64_t>{}), EmptyObservations);
}

TEST(Pmf, Sampling) {
  EXPECT_EQ(sample(make_pmf(7, {1.0}), 123, 3), (std::vector<std::int64_t>{7, 7, 7}));
  EXPECT_TRUE(sample(Pmf::uniform(0, 1), 1, 0).empty());
  const auto xs = sample(Pmf::uniform(0, 1), 1, 100000);
  double ones = 0;
  for (auto x : xs) ones += x;
  EXPECT_NEAR(ones / 1e5, 0.5, 0.01);
  EXPECT_EQ(sample(Pmf::uniform(0, 9), 5, 50), sample(Pmf::uniform(0, 9), 5, 50));
  EXPECT_CODE(Sampler(make_pmf(0, {0.5}, true)), SubprobabilitySampling);
}

TEST(Pmf, Envelopes) {
  auto e = monotone_envelope(make_pmf(0, {0.2, 0.4, 0.4}));
  EXPECT_EQ(e.masses, (std::vector<double>{0.4, 0.4, 0.4}));
  EXPECT_NEAR(e.total, 1.2, 1e-15);
  EXPECT_FALSE(e.is_subprobability());
  e = monotone_envelope(make_pmf(0, {0.5, 0.3, 0.2}));
  EXPECT_EQ(e.masses, (std::vector<double>{0.5, 0.3, 0.2}));
  e = monotone_envelope(make_pmf(0, {0.3, 0.1, 0.2}, true));
  EXPECT_EQ(e.masses, (std::vector<double>{0.3, 0.2, 0.2}));
  EXPECT_NEAR(e.total, 0.7, 1e-15);
  EXPECT_TRUE(e.is_subprobability());

  auto u = unimodal_envelope(make_pmf(0, {1.0}), 0);
  EXPECT_EQ(u.masses, (std::vector<double>{1.0}));
  u = unimodal_envelope(make_pmf(-1, {0.4, 0.1, 0.4}, true), 0);
  EXPECT_EQ(u.lo, -1);
  EXPECT_EQ(u.masses, (std::vector<double>{0.4, 0.4, 0.4}));
  u = unimodal_envelope(make_pmf(0, {0.6, 0.4}), 0);
  EXPECT_EQ(u.masses, (std::vector<double>{0.6, 0.4}));
  EXPECT_DOUBLE_EQ(u.total, 1.0);
}

TEST(Pmf, EnvelopeDominatesAndIsShaped) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 300; ++it) {
    const auto m = oracle::random_simplex(rng, 1 + static_cast<int>(rng() % 8));
    const auto p = make_pmf(0, m);
    const auto e = monotone_envelope(p);
    for (std::int64_t n = 0; n <= p.hi() + 1; ++n) {
      EXPECT_GE(e.at(n), p.at(n));
      EXPECT_GE(e.at(n), e.at(n + 1));
    }
    EXPECT_EQ(e.is_subprobability(), is_monotone(p) || e.total <= 1.0 + 1e-12);
  }
}

TEST(Pmf, BasicInequality) {
  EXPECT_TRUE(satisfies_basic_inequality(make_pmf(0, {0.5, 3.0 / 14, 4.0 / 14})));
  EXPECT_TRUE(satisfies_basic_inequality(make_pmf(0, {0.5, 0.3, 0.2})));
  EXPECT_FALSE(satisfies_basic_inequality(make_pmf(0, {0.2, 0.8})));
}

TEST(Pmf, MixSeedIsDeterministicAndSpread) {
  EXPECT_EQ(mix_seed(1, 2), mix_seed(1, 2));
  EXPECT_NE(mix_seed(1, 2), mix_seed(1, 3));
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 2));
}
