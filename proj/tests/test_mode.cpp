#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "evshape/error.hpp"
#include "evshape/mode_inference.hpp"
#include "oracles.hpp"

using namespace evshape;

TEST(OneObsCi, Examples) {
  EXPECT_EQ(one_obs_ci(5, 0.1, 0), ModeInterval::range(-99, 109));
  EXPECT_TRUE(one_obs_ci(4, 0.1, 4).is_all());
  EXPECT_EQ(one_obs_ci(1, 0.5, 0), ModeInterval::range(-3, 5));
  try {
    one_obs_ci(1, 1.5, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadAlpha);
  }
}

TEST(OneObsCi, Finite) {
  const auto a = one_obs_ci_finite(3, 0.1, 3);
  ASSERT_TRUE(a.is_range());
  // Only the -phi side is finite: radius 41 * 6.
  EXPECT_EQ(a, ModeInterval::range(3 - 245, 3 + 245));
  EXPECT_EQ(one_obs_ci_finite(0, 0.2, 1), ModeInterval::range(-20, 20));
  try {
    one_obs_ci_finite(0, 0.2, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPhi);
  }
  for (std::int64_t x = -30; x <= 30; ++x)
    for (std::int64_t phi : {-4, 1, 7}) {
      const auto c = one_obs_ci_finite(x, 0.1, phi);
      ASSERT_TRUE(c.is_range());
      if (x != phi && x != -phi) {
        const double bound = 2 * 41.0 * std::max(std::abs(x - phi), std::abs(x + phi));
        EXPECT_LT(static_cast<double>(c.hi - c.lo), bound);
      }
    }
}

TEST(OneObsCi, CoverageOfExamples) {
  for (double alpha : {0.05, 0.1, 0.25}) {
    const auto c = one_obs_coverage(Pmf::uniform(0, 2), alpha, 1);
    EXPECT_GE(c.weak, 1 - alpha);
    EXPECT_LE(c.strong, c.weak + 1e-15);
  }
}

TEST(ConfidenceSet, Basics) {
  UnimodalFamily fam;
  EXPECT_TRUE(confidence_set(fam, 0.05).rejected.empty());
  EXPECT_EQ(mode_estimate(fam), IntSet::all());
  fam.update(3);
  EXPECT_EQ(mode_estimate(fam), IntSet::all());
  for (int i = 0; i < 50; ++i) fam.update(3);
  EXPECT_FALSE(confidence_set(fam, 0.05).rejected.contains(3));
}

TEST(ConfidenceSet, NestedInThreshold) {
  std::mt19937_64 rng(71);
  UnimodalFamily fam;
  for (int i = 0; i < 400; ++i) fam.update((rng() % 3 == 0) ? 0 : 7);
  const auto strict = rejected_above(fam, 20.0).rejected;
  const auto loose = rejected_above(fam, 5.0).rejected;
  EXPECT_FALSE(strict.empty());
  EXPECT_EQ(strict.intersect(loose), strict);
  const auto cs = confidence_set(fam, 0.05);
  EXPECT_EQ(cs.rejected, strict);
  ASSERT_TRUE(cs.window.is_range());
  for (std::int64_t t : strict.elements()) EXPECT_TRUE(cs.window.contains(t));
  // Outside the window the replayed value stays under the threshold.
  for (int k = 0; k < 100; ++k) {
    const std::int64_t off = 1 + static_cast<std::int64_t>(rng() % 500);
    const std::int64_t t = (k % 2) ? cs.window.hi + off : cs.window.lo - off;
    EXPECT_LE(UnimodalTracker::replay(t, fam.observations()).value(), std::log(20.0));
  }
}

TEST(StrongHull, Examples) {
  IntSet rej;
  rej.add(3, 4);
  EXPECT_TRUE(strong_hull(rej.complement()).is_all());
  IntSet w;
  w.add(1);
  w.add(3);
  EXPECT_EQ(strong_hull(w), ModeInterval::range(1, 3));
  EXPECT_TRUE(strong_hull(IntSet{}).is_empty());
}

TEST(UnrestrictedTest, Lifecycle) {
  UnrestrictedModeTest t(0.05, 1);
  EXPECT_EQ(t.phase(), UnrestrictedModeTest::Phase::AwaitingFirst);
  EXPECT_EQ(t.step(1), Decision::Continue);
  EXPECT_EQ(t.phase(), UnrestrictedModeTest::Phase::Running);
  EXPECT_TRUE(t.candidates().is_range());
  EXPECT_EQ(t.candidates(), intersect(one_obs_ci(1, 0.05 / 3, 1), one_obs_ci(1, 0.05 / 3, -1)));
  EXPECT_EQ(t.log_value(), 0.0);
  std::mt19937_64 rng(73);
  const auto q = make_pmf(0, {0.4, 0.1, 0.5});
  Sampler draw(q);
  Decision d = Decision::Continue;
  while (d == Decision::Continue && t.n() < 100000) d = t.step(draw(rng));
  ASSERT_EQ(d, Decision::Reject);
  EXPECT_EQ(t.rejected_at(), t.n());
  EXPECT_GE(t.log_value(), std::log(3 / 0.05));
  try {
    t.step(0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlreadyRejected);
  }
}

TEST(IntSetOps, Basics) {
  IntSet s;
  s.add(1, 3);
  s.add(5);
  s.add(4);
  EXPECT_EQ(s.runs().size(), 1u);
  EXPECT_EQ(s.elements(), (std::vector<std::int64_t>{1, 2, 3, 4, 5}));
  const auto c = s.complement();
  EXPECT_FALSE(c.bounded());
  EXPECT_TRUE(c.contains(0));
  EXPECT_FALSE(c.contains(3));
  EXPECT_EQ(c.complement(), s);
  EXPECT_EQ(s.intersect(ModeInterval::range(4, 9)).elements(), (std::vector<std::int64_t>{4, 5}));
  EXPECT_EQ(s.hull(), ModeInterval::range(1, 5));
  EXPECT_TRUE(IntSet::all().hull().is_all());
  EXPECT_EQ(intersect(ModeInterval::range(0, 5), ModeInterval::all()), ModeInterval::range(0, 5));
  EXPECT_TRUE(intersect(ModeInterval::range(0, 1), ModeInterval::range(3, 4)).is_empty());
  EXPECT_EQ(ModeInterval::range(2, 4).size(), 3u);
  EXPECT_FALSE(ModeInterval::all().size().has_value());
}
