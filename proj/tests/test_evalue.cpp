#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "evshape/error.hpp"
#include "evshape/evalue.hpp"
#include "evshape/pmf.hpp"
#include "oracles.hpp"

using namespace evshape;

namespace {
const Pmf kQ = make_pmf(0, {0.2, 0.4, 0.4});

EvalFn table(std::vector<double> v, double tail = 1.0, std::int64_t lo = 0) {
  return EvalFn{lo, std::move(v), 1.0, tail};
}
}  // namespace

TEST(Wavelet, Lambda) {
  EXPECT_NEAR(wavelet_lambda(0.2, 0.4), 1.0 / 6, 1e-15);
  EXPECT_EQ(wavelet_lambda(0.4, 0.2), 0.0);
  EXPECT_EQ(wavelet_lambda(0.0, 0.0), 0.0);
  EXPECT_EQ(wavelet_lambda(0.0, 1.0), 0.5);
}

TEST(Wavelet, Evalue) {
  const auto e = wavelet_evalue(kQ, 0);
  EXPECT_NEAR(e.at(0), 5.0 / 6, 1e-15);
  EXPECT_NEAR(e.at(1), 7.0 / 6, 1e-15);
  EXPECT_EQ(e.at(2), 1.0);
  EXPECT_EQ(e.at(-3), 1.0);
  const auto flat = wavelet_evalue(make_pmf(0, {0.5, 0.3, 0.2}), 1);
  for (std::int64_t n = -2; n < 5; ++n) EXPECT_EQ(flat.at(n), 1.0);
  const auto half = wavelet_evalue(make_pmf(0, {0.0, 1.0}), 0);
  EXPECT_EQ(half.at(0), 0.5);
  EXPECT_EQ(half.at(1), 1.5);
}

TEST(Evalue, Expectation) {
  const auto e = wavelet_evalue(kQ, 0);
  EXPECT_NEAR(expectation(EvalFn::constant(1.0), make_pmf(3, {0.25, 0.25}, true)), 0.5, 1e-15);
  EXPECT_NEAR(expectation(e, Pmf::uniform(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(expectation(e, kQ), 1.0 + (0.4 - 0.2) / 6, 1e-15);
  EXPECT_NEAR(expectation(e, kQ), 31.0 / 30, 1e-15);
}

TEST(Evalue, Epower) {
  EXPECT_EQ(epower(EvalFn::constant(1.0), kQ), 0.0);
  // 0.2 ln(5/6) + 0.4 ln(7/6)
  EXPECT_NEAR(epower(wavelet_evalue(kQ, 0), kQ), 0.025195960572112423, 1e-15);
  EXPECT_EQ(epower(table({0.0, 2.0}), kQ), -std::numeric_limits<double>::infinity());
}

TEST(Evalue, LowerBound) {
  EXPECT_NEAR(epower_lower_bound(kQ, 0), 0.04 / 2.4, 1e-15);
  EXPECT_NEAR(epower_lower_bound(make_pmf(0, {0.25, 0.75}), 0), 0.0625, 1e-15);
  try {
    epower_lower_bound(make_pmf(0, {0.5, 0.3, 0.2}), 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoViolationAt);
  }
  // The stated bound with 2S in the denominator does not hold here.
  const double d = 0.2, s = 0.6;
  EXPECT_LT(epower(wavelet_evalue(kQ, 0), kQ), d * d / (2 * s));
}

TEST(Polar, MonotoneExamples) {
  EXPECT_TRUE(is_in_polar_M(table({0, 2, 1})));
  EXPECT_FALSE(is_in_polar_M(table({2, 0})));
  EXPECT_TRUE(is_in_polar_M(EvalFn::constant(1.0)));
  EXPECT_FALSE(is_in_polar_M(EvalFn::constant(1.01)));
  EXPECT_TRUE(is_in_polar_M(table({0.5}, 1.0 + 5e-10)));
  // Left tail covers 0..lo-1.
  EXPECT_FALSE(is_in_polar_M(EvalFn{3, {1.0}, 2.0, 1.0}));
  EXPECT_TRUE(is_in_polar_M(EvalFn{3, {1.0}, 1.0, 1.0}));
  // Values left of 0 are irrelevant.
  EXPECT_TRUE(is_in_polar_M(EvalFn{-2, {50.0, 50.0, 1.0}, 9.0, 1.0}));
}

TEST(Polar, UnimodalExamples) {
  for (std::int64_t t : {-3, 0, 4}) EXPECT_TRUE(is_in_polar_D(EvalFn::constant(1.0), t));
  for (std::int64_t m : {0, 1, 5})
    EXPECT_TRUE(is_in_polar_D(wavelet_at(m, 1.0), 0)) << m;
  // A rise to the right of the mode is penalized, so the mirror is not allowed.
  EXPECT_FALSE(is_in_polar_D(EvalFn{0, {2.0, 0.0}, 1.0, 1.0}, 0));
  EXPECT_FALSE(is_in_polar_D(EvalFn{2, {1.5}, 1.0, 1.0}, 2));
  EXPECT_FALSE(is_in_polar_D(EvalFn{0, {}, 1.0, 1.2}, 0));
  EXPECT_FALSE(is_in_polar_D(EvalFn{0, {}, 1.2, 1.0}, 0));
}

TEST(Polar, MonotoneAgreesWithUniforms) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  int in = 0;
  for (int it = 0; it < 1500; ++it) {
    EvalFn e;
    if (it % 2 == 0) {
      e = oracle::random_polar_M_member(rng, 1 + static_cast<int>(rng() % 30));
      e.values[rng() % e.values.size()] *= 1.0 + 0.3 * u(rng);
    } else {
      e.lo = static_cast<std::int64_t>(rng() % 3);
      e.left_tail = u(rng) * 1.3;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 20); ++k) e.values.push_back(2.0 * u(rng));
      e.right_tail = u(rng) < 0.8 ? u(rng) : 1.5 + u(rng);
    }
    const bool got = is_in_polar_M(e);
    in += got;
    ASSERT_EQ(got, oracle::polar_M_uniforms(e, 200)) << it;
  }
  EXPECT_GT(in, 100);
  EXPECT_LT(in, 1400);
}

TEST(Polar, UnimodalAgreesWithUniforms) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0, 1);
  int in = 0;
  for (int it = 0; it < 800; ++it) {
    const std::int64_t theta = static_cast<std::int64_t>(rng() % 11) - 5;
    EvalFn e;
    e.lo = theta - static_cast<std::int64_t>(rng() % 8);
    const double s = 0.5 + 0.6 * u(rng);
    for (int k = 0; k < 1 + static_cast<int>(rng() % 14); ++k) e.values.push_back(s * 2.0 * u(rng));
    e.left_tail = u(rng) < 0.8 ? u(rng) : 2.0 + u(rng);
    e.right_tail = u(rng) < 0.8 ? u(rng) : 2.0 + u(rng);
    const bool got = is_in_polar_D(e, theta);
    in += got;
    ASSERT_EQ(got, oracle::polar_D_uniforms(e, theta, 60)) << it;
  }
  EXPECT_GT(in, 50);
  EXPECT_LT(in, 750);
}

TEST(Polar, CertificatesAndRoundTrip) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 200; ++it) {
    const auto e = oracle::random_polar_M_member(rng, 1 + static_cast<int>(rng() % 25));
    ASSERT_TRUE(is_in_polar_M(e));
    const auto c = certificate_M(e);
    for (std::size_t n = 0; n < c.rho.size(); ++n) {
      EXPECT_LE(c.rho[n], static_cast<double>(n + 1) + 1e-9);
      if (n) {
        EXPECT_GE(c.rho[n], c.rho[n - 1] - 1e-12);
      }
    }
    const auto back = evalue_from_rho(c.rho);
    for (std::int64_t n = 0; n <= e.hi(); ++n) EXPECT_NEAR(back.at(n), e.at(n), 1e-12);
  }
  const auto d = certificate_D(wavelet_at(0, 1.0), 0);
  ASSERT_FALSE(d.rho.empty());
  ASSERT_FALSE(d.eta.empty());
  EXPECT_GE(d.rho[0], 0.5 - 1e-12);
  EXPECT_LE(d.rho[0], 1.0 + 1e-12);
}

TEST(XqForm, Examples) {
  const auto pm = xq_evalue(make_pmf(4, {1.0}));
  EXPECT_EQ(pm.at(4), 5.0);
  EXPECT_EQ(pm.at(3), 0.0);
  EXPECT_EQ(pm.at(5), 0.0);
  const auto u = xq_evalue(Pmf::uniform(0, 1));
  EXPECT_EQ(u.at(0), 0.5);
  EXPECT_EQ(u.at(1), 1.0);
  std::vector<double> g(21);
  double tot = 0;
  for (int n = 0; n <= 20; ++n) tot += g[n] = std::ldexp(1.0, -n - 1);
  const auto geo = xq_evalue(make_pmf(0, g, true));
  for (int n = 0; n <= 20; ++n) EXPECT_DOUBLE_EQ(geo.at(n), (n + 1) * g[n]);
  EXPECT_TRUE(is_in_polar_M(geo));
  EXPECT_LT(tot, 1.0);

  EXPECT_FALSE(is_xq_form(EvalFn{1, {3.0}, 0.0, 0.0}));
  EXPECT_FALSE(is_xq_form(EvalFn{0, {1.0, 1.0}, 0.0, 0.0}));
  std::mt19937_64 rng(29);
  for (int it = 0; it < 200; ++it) {
    const auto q = make_pmf(static_cast<std::int64_t>(rng() % 4),
                            oracle::random_simplex(rng, 1 + static_cast<int>(rng() % 9)));
    const auto e = xq_evalue(q);
    EXPECT_TRUE(is_xq_form(e));
    EXPECT_TRUE(is_in_polar_M(e));
    EXPECT_LE(expectation(e, Pmf::uniform(0, q.hi())), 1.0 + 1e-12);
  }
}

TEST(Witness, Examples) {
  const auto w = witness(kQ);
  EXPECT_NEAR(w.at(0), 5.0 / 6, 1e-15);
  EXPECT_NEAR(expectation(w, kQ), 31.0 / 30, 1e-15);
  try {
    witness(make_pmf(-1, {0.2, 0.6, 0.2}), 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoViolation);
  }
  const auto q = make_pmf(-1, {0.4, 0.1, 0.5});
  const auto u = witness(q, 0);
  EXPECT_GT(expectation(u, q), 1.0);
  EXPECT_TRUE(is_in_polar_D(u, 0));
  EXPECT_LT(u.at(0), 1.0);
  EXPECT_GT(u.at(1), 1.0);
}

TEST(Witness, RandomAlternatives) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 400; ++it) {
    const auto q = make_pmf(0, oracle::random_simplex(rng, 2 + static_cast<int>(rng() % 6)));
    if (!is_monotone(q)) {
      const auto w = witness(q);
      EXPECT_TRUE(is_in_polar_M(w));
      EXPECT_GT(expectation(w, q), 1.0);
    }
    const std::int64_t t = static_cast<std::int64_t>(rng() % 8) - 1;
    if (!is_theta_unimodal(q, t)) {
      const auto w = witness(q, t);
      EXPECT_TRUE(is_in_polar_D(w, t));
      EXPECT_TRUE(oracle::polar_D_uniforms(w, t, 30));
      EXPECT_GT(expectation(w, q), 1.0);
    }
  }
}

TEST(Evalue, EnvelopeExpectationBoundsTheClass) {
  // For members of the polar, the expectation against the monotone envelope
  // upper-bounds every expectation against class members it dominates.
  const auto e = wavelet_evalue(kQ, 0);
  const auto env = monotone_envelope(kQ);
  EXPECT_NEAR(expectation(e, env), 0.4 * (5.0 / 6 + 7.0 / 6 + 1.0), 1e-15);
}
