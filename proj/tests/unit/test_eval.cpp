#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ofp/corpus.hpp"
#include "ofp/eval.hpp"

using namespace ofp;

namespace {

TaylorPatch patch_for(const CorpusEntry& e) {
  return synthesize_patch(e.function, e.region.center, e.region.var, e.region.radius).patch();
}

MeasureOptions small(std::size_t n, unsigned threads = 0) {
  MeasureOptions o;
  o.n_stable = n;
  o.n_decayed = n;
  o.threads = threads;
  return o;
}

void expect_same(const AreaMetrics& a, const AreaMetrics& b) {
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.max_abs, b.max_abs);
  EXPECT_EQ(a.max_rel, b.max_rel);
  EXPECT_EQ(a.worst_rel.point, b.worst_rel.point);
  EXPECT_EQ(a.worst_abs.point, b.worst_abs.point);
}

}  // namespace

TEST(Sampling, SingleStableSampleIsTheMidpoint) {
  const Region r{{2.13, 0.0}, 1, 1e-3};
  EXPECT_EQ(sample_stable(r, 1, 42), (std::vector<Point>{{2.13, 0.0}}));
}

TEST(Sampling, PointsStayInsideTheRegion) {
  const Region r{{0.5, 3.0}, 0, 0.01};
  for (const auto& p : sample_stable(r, 1000, 42)) {
    EXPECT_LE(std::fabs(p[0] - 0.5), 0.01);
    EXPECT_EQ(p[1], 3.0);
  }
  const auto decayed = sample_decayed(r, 1000, 42);
  ASSERT_EQ(decayed.size(), 1000u);
  for (const auto& p : decayed) {
    EXPECT_LE(std::fabs(p[0] - 0.5), 0.01 / 100 + 1e-16);
    EXPECT_EQ(p[1], 3.0);
  }
}

TEST(Sampling, DecayedOffsetsSpanManyScales) {
  const Region r{{0.0}, 0, 0.01};
  double lo = 1.0, hi = 0.0;
  std::size_t negative = 0;
  for (const auto& p : sample_decayed(r, 1000, 7)) {
    lo = std::min(lo, std::fabs(p[0]));
    hi = std::max(hi, std::fabs(p[0]));
    negative += p[0] < 0 ? 1 : 0;
  }
  EXPECT_LT(lo, 1e-12);
  EXPECT_GT(hi, 1e-5);
  EXPECT_GT(negative, 400u);
  EXPECT_LT(negative, 600u);
}

TEST(Sampling, SeedDeterminesPoints) {
  const Region r{{1.0}, 0, 0.01};
  EXPECT_EQ(sample_stable(r, 500, 3), sample_stable(r, 500, 3));
  EXPECT_EQ(sample_decayed(r, 500, 3), sample_decayed(r, 500, 3));
  EXPECT_NE(sample_stable(r, 500, 3), sample_stable(r, 500, 4));
}

TEST(Sampling, RejectsBadRegions) {
  EXPECT_THROW((void)sample_stable({{1.0}, 0, 0.0}, 5, 1), Error);
  EXPECT_THROW((void)sample_stable({{1.0}, 1, 0.1}, 5, 1), Error);
  EXPECT_THROW((void)sample_decayed({{1.0}, 0, 0.1}, 0, 1), Error);
}

TEST(Measure, MotivatingExample) {
  const CorpusEntry& e = *find_entry("sin_shift");
  const TaylorPatch p = patch_for(e);
  const Measurement m = measure(e.function, &p, e.region);
  ASSERT_TRUE(m.patched.has_value());
  EXPECT_EQ(m.naive.stable.samples, 1000u);
  EXPECT_EQ(m.naive.decayed.samples, 1000u);
  EXPECT_LE(m.patched->stable.max_rel, 1e-14);
  EXPECT_LE(m.patched->decayed.max_rel, 1e-14);
  EXPECT_GE(m.naive.decayed.max_rel, 1e-11);
  EXPECT_EQ(m.naive.variant, Variant::Naive);
  EXPECT_EQ(m.patched->variant, Variant::Patched);
}

TEST(Measure, NaiveOnlyWithoutPatch) {
  const CorpusEntry& e = *find_entry("plus_one");
  const Measurement m = measure(e.function, nullptr, e.region, small(100));
  EXPECT_FALSE(m.patched.has_value());
  EXPECT_LE(m.naive.stable.max_rel, 1.2e-16);
}

TEST(Measure, OracleFailuresAreExcludedAndReported) {
  const CorpusEntry& e = *find_entry("one_minus_cos");
  const Measurement m = measure(e.function, nullptr, e.region, small(50));
  ASSERT_EQ(m.naive.excluded.size(), 1u);
  EXPECT_EQ(m.naive.excluded[0].point, e.region.center);
  EXPECT_EQ(m.naive.excluded[0].area, "stable");
  EXPECT_EQ(m.naive.stable.samples, 49u);
}

TEST(Measure, PreconditionsAreChecked) {
  const CorpusEntry& e = *find_entry("sin_shift");
  const TaylorPatch p = patch_for(e);
  Region wide = e.region;
  wide.radius = 0.5;
  EXPECT_THROW((void)measure(e.function, nullptr, wide, small(4)), Error);
  Region wider_than_patch = e.region;
  wider_than_patch.center = {2.13, 0.0};
  wider_than_patch.radius = 9e-4;
  EXPECT_NO_THROW((void)measure(e.function, &p, wider_than_patch, small(4)));
  TaylorPatch narrow = p;
  narrow.radius = 1e-4;
  EXPECT_THROW((void)measure(e.function, &narrow, e.region, small(4)), Error);
}

TEST(Measure, DeterministicAcrossRunsAndThreads) {
  const CorpusEntry& e = *find_entry("cos_shift");
  const TaylorPatch p = patch_for(e);
  const Measurement a = measure(e.function, &p, e.region, small(300, 1));
  for (unsigned threads : {1u, 3u, 8u}) {
    const Measurement b = measure(e.function, &p, e.region, small(300, threads));
    expect_same(a.naive.stable, b.naive.stable);
    expect_same(a.naive.decayed, b.naive.decayed);
    expect_same(a.patched->stable, b.patched->stable);
    expect_same(a.patched->decayed, b.patched->decayed);
  }
}

TEST(Improvement, Orders) {
  EXPECT_DOUBLE_EQ(improvement_order(1e-10, 1e-16), 6.0);
  EXPECT_EQ(improvement_order(3e-12, 3e-12), 0.0);
  EXPECT_EQ(improvement_order(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(improvement_order(1e-10, 0.0)));
  EXPECT_LT(improvement_order(1e-16, 1e-10), 0.0);
}

TEST(Property, MaxMetricsAreMonotoneInSampleCount) {
  const CorpusEntry& e = *find_entry("x_minus_sin");
  const TaylorPatch p = patch_for(e);
  const Measurement few = measure(e.function, &p, e.region, small(100));
  const Measurement many = measure(e.function, &p, e.region, small(1000));
  EXPECT_GE(many.naive.stable.max_rel, few.naive.stable.max_rel);
  EXPECT_GE(many.naive.decayed.max_rel, few.naive.decayed.max_rel);
  EXPECT_GE(many.patched->stable.max_abs, few.patched->stable.max_abs);
  EXPECT_GE(many.patched->decayed.max_abs, few.patched->decayed.max_abs);
}

TEST(Property, PatchedNeverWorseThanNaive) {
  for (const CorpusEntry& e : builtin_corpus()) {
    if (!e.repairable) continue;
    SCOPED_TRACE(e.id);
    const TaylorPatch p = patch_for(e);
    const Measurement m = measure(e.function, &p, e.region, small(500));
    EXPECT_LE(m.patched->stable.max_rel, m.naive.stable.max_rel);
    EXPECT_LE(m.patched->decayed.max_rel, m.naive.decayed.max_rel);
  }
}

TEST(Property, PatchBeatsNaivePeakByFiveOrders) {
  for (const CorpusEntry& e : builtin_corpus()) {
    if (!e.repairable) continue;
    SCOPED_TRACE(e.id);
    const TaylorPatch p = patch_for(e);
    const Measurement m = measure(e.function, &p, e.region);
    const double naive_peak = std::max(m.naive.stable.max_rel, m.naive.decayed.max_rel);
    const double patched = std::max(m.patched->stable.max_rel, m.patched->decayed.max_rel);
    EXPECT_LE(patched * 1e5, naive_peak);
  }
}

TEST(Property, PatchWithinTenfoldOfAlgebraicTwin) {
  const CorpusEntry& e = *find_entry("sqrt_gap");
  const TaylorPatch p = patch_for(e);
  const Measurement patched = measure(e.function, &p, e.region);
  const Measurement twin = measure(*e.twin, nullptr, e.region);
  EXPECT_LE(patched.patched->stable.max_rel, 10 * twin.naive.stable.max_rel);
  EXPECT_LE(patched.patched->decayed.max_rel, 10 * twin.naive.decayed.max_rel);
}
