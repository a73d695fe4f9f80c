#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ofp/autodiff.hpp"
#include "ofp/corpus.hpp"
#include "ofp/detect.hpp"

using namespace ofp;

namespace {

std::vector<AtomicConditionRecord> conditions_at(const char* src, std::vector<double> p) {
  return atomic_conditions(eval_working(parse(src), p).trace);
}

const AtomicConditionRecord& find_op(const std::vector<AtomicConditionRecord>& records, Op op) {
  for (const auto& r : records) {
    if (r.op == op) return r;
  }
  throw Error("no such record");
}

bool within_ulps(double a, double b, int ulps) {
  if (a == b) return true;
  double x = a;
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, b);
  return x == b;
}

Expr scaled(const Expr& body, double c) { return Expr::binary(Op::Mul, Expr::number(c), body); }

}  // namespace

TEST(Atomic, MultiplicationIsWellConditioned) {
  const auto r = conditions_at("func f(x, y) = x * y", {1e300, 3e-200});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].conditions, (std::vector<double>{1.0, 1.0}));
}

TEST(Atomic, AdditionOfEqualOperands) {
  const auto r = conditions_at("func f(x, y) = x + y", {1.0, 1.0});
  EXPECT_EQ(r[0].conditions, (std::vector<double>{0.5, 0.5}));
}

TEST(Atomic, ExactCancellationIsInfinite) {
  const auto r = conditions_at("func f(x, y) = x - y", {0.1, 0.1});
  EXPECT_TRUE(std::isinf(r[0].max()));
}

TEST(Atomic, MotivatingSubtractionAtDocumentedPoint) {
  const auto r = conditions_at("func f(x, eps) = sin(x + eps) - sin(x)", {2.13, 1e-6});
  const AtomicConditionRecord& sub = find_op(r, Op::Sub);
  EXPECT_NEAR(sub.conditions[0], 1.598e6, 1e3);
  EXPECT_NEAR(sub.conditions[1], 1.598e6, 1e3);
  const AtomicPeak peak = max_atomic_condition(eval_working(find_entry("sin_shift")->function, std::vector{2.13, 1e-6}).trace);
  EXPECT_EQ(peak.op, Op::Sub);
  EXPECT_EQ(peak.value, sub.max());
}

TEST(Atomic, ElementaryFormulas) {
  EXPECT_DOUBLE_EQ(find_op(conditions_at("func f(x) = exp(x)", {3.0}), Op::Exp).max(), 3.0);
  EXPECT_DOUBLE_EQ(find_op(conditions_at("func f(x) = sqrt(x)", {7.0}), Op::Sqrt).max(), 0.5);
  EXPECT_DOUBLE_EQ(find_op(conditions_at("func f(x) = log(x)", {std::exp(2.0)}), Op::Log).max(), 0.5);
  EXPECT_DOUBLE_EQ(find_op(conditions_at("func f(x) = sin(x)", {0.0}), Op::Sin).max(), 1.0);
  EXPECT_GT(find_op(conditions_at("func f(x) = sin(x)", {3.14159}), Op::Sin).max(), 1e5);
  EXPECT_GT(find_op(conditions_at("func f(x) = log(x)", {1.0000001}), Op::Log).max(), 1e6);
  EXPECT_DOUBLE_EQ(find_op(conditions_at("func f(x) = x^3", {2.0}), Op::Pow).conditions[0], 3.0);
}

TEST(Atomic, CancellationOnlyPeakIgnoresOtherOperations) {
  const FunctionDef f = parse("func f(x) = sin(x) + 1");
  const std::vector<double> p{1e15};
  const EvalTrace t = eval_working(f, p).trace;
  EXPECT_GT(max_atomic_condition(t).value, 1e5);
  EXPECT_LT(max_atomic_condition(t, true).value, 10.0);
}

TEST(FunctionCondition, MotivatingGamma) {
  const FunctionDef& f = find_entry("sin_shift")->function;
  const std::vector<double> p{2.13, 1e-6};
  EXPECT_EQ(function_condition(f, p, 0), 3.4034175514549854);
}

TEST(FunctionCondition, LinearFunctionHasUnitCondition) {
  const FunctionDef f = parse("func f(x) = 3 * x");
  for (double x : {0.5, 2.0, 1e6}) {
    const std::vector<double> p{x};
    EXPECT_NEAR(function_condition(f, p, 0), 1.0, 1e-9);
  }
  const FunctionDef g = parse("func g(x) = x^2");
  const std::vector<double> one{1.0};
  EXPECT_NEAR(function_condition(g, one, 0, 1e-8) / 2.0, 1.0, 1e-7);
}

TEST(FunctionCondition, UndefinedAtRoots) {
  const FunctionDef f = parse("func f(x) = x - 1");
  const std::vector<double> p{1.0};
  EXPECT_THROW((void)function_condition(f, p, 0), ConditionUndefined);
}

TEST(Classify, MotivatingExampleIsRepairable) {
  const FunctionDef& f = find_entry("sin_shift")->function;
  const Classification c = classify(f, std::vector{2.13, 1e-6});
  EXPECT_EQ(c.label, Label::OriginalPrecisionRepairable);
  EXPECT_GE(c.peak.value, 1e5);
  ASSERT_EQ(c.probes.size(), 2u);
  EXPECT_LT(c.profile.gamma[0], 10.0);
  EXPECT_LT(c.profile.gamma[1], 10.0);
}

TEST(Classify, WellConditionedProductHasNoSignificantError) {
  const Classification c = classify(parse("func f(x) = x * 2"), std::vector{0.7});
  EXPECT_EQ(c.label, Label::NoSignificantError);
  EXPECT_TRUE(c.probes.empty());
}

TEST(Classify, RootOfCubicRequiresHighPrecision) {
  const CorpusEntry& e = *find_entry("cubic_root_gap");
  const Classification c = classify(e.function, e.peak);
  EXPECT_EQ(c.label, Label::RequiresHighPrecision);
  EXPECT_GT(c.profile.gamma[0], 1e5);
}

TEST(Classify, ThresholdsAreHonoured) {
  const FunctionDef& f = find_entry("sin_shift")->function;
  Thresholds strict;
  strict.function = 1.0;
  EXPECT_EQ(classify(f, std::vector{2.13, 1e-6}, strict).label, Label::RequiresHighPrecision);
  Thresholds lax;
  lax.atomic = 1e12;
  EXPECT_EQ(classify(f, std::vector{2.13, 1e-6}, lax).label, Label::NoSignificantError);
}

TEST(Classify, CorpusLabelsMatchExpectations) {
  for (const CorpusEntry& e : builtin_corpus()) {
    SCOPED_TRACE(e.id);
    const Classification c = classify(e.function, e.peak);
    EXPECT_EQ(c.label, e.expected);
    if (e.repairable) {
      for (double g : c.profile.gamma) EXPECT_LT(g, 10.0);
    }
  }
}

TEST(Property, ClassificationIsScaleInvariant) {
  for (const CorpusEntry& e : builtin_corpus()) {
    const Classification base = classify(e.function, e.peak);
    for (double c : {4.0, -0.125, 1024.0}) {
      SCOPED_TRACE(e.id + " scaled by " + std::to_string(c));
      const FunctionDef g(e.function.name(), e.function.params(), scaled(e.function.body(), c));
      const Classification s = classify(g, e.peak);
      EXPECT_EQ(s.label, base.label);
      ASSERT_EQ(s.profile.gamma.size(), base.profile.gamma.size());
      for (std::size_t i = 0; i < s.profile.gamma.size(); ++i) {
        if (std::isnan(base.profile.gamma[i])) continue;
        EXPECT_TRUE(within_ulps(s.profile.gamma[i], base.profile.gamma[i], 2))
            << s.profile.gamma[i] << " vs " << base.profile.gamma[i];
      }
      const auto a = atomic_conditions(eval_working(e.function, e.peak).trace);
      const auto b = atomic_conditions(eval_working(g, e.peak).trace);
      const std::size_t shift = 1 + tree_size(Expr::number(c));
      for (const auto& ra : a) {
        if (ra.op != Op::Add && ra.op != Op::Sub) continue;
        for (const auto& rb : b) {
          if (rb.op == ra.op && rb.node == ra.node + shift) {
            for (std::size_t k = 0; k < ra.conditions.size(); ++k) {
              EXPECT_TRUE(within_ulps(rb.conditions[k], ra.conditions[k], 2))
                  << "node " << ra.node << ": " << rb.conditions[k] << " vs " << ra.conditions[k];
            }
          }
        }
      }
    }
  }
}

TEST(Property, SymbolicAndFiniteDifferenceGammaAgreeAtClassificationPoints) {
  for (const CorpusEntry& e : builtin_corpus()) {
    const Classification c = classify(e.function, e.peak);
    for (std::size_t var = 0; var < c.probes.size(); ++var) {
      if (std::isnan(c.profile.gamma[var])) continue;
      SCOPED_TRACE(e.id + " var " + std::to_string(var));
      const std::vector<double>& p = c.probes[var];
      const double symbolic =
          std::fabs(p[var] * evaluate(derivative(e.function.body(), var), p) / evaluate(e.function, p));
      const double fd = c.profile.gamma[var];
      // Both far below any threshold: the naive evaluation error swamps the
      // derivative and neither value carries information.
      if (symbolic < 1e-6 && fd < 1e-6) continue;
      EXPECT_GE(fd / symbolic, 0.1) << fd << " vs " << symbolic;
      EXPECT_LE(fd / symbolic, 10.0) << fd << " vs " << symbolic;
    }
  }
}

TEST(Search, MotivatingExampleFindsLargeAtomicCondition) {
  FunctionDef f = parse("func f(x in [0, 3], eps in [1e-9, 1e-3]) = sin(x + eps) - sin(x)");
  SearchOptions o;
  o.seed = 42;
  const auto findings = search_error_inputs(f, o);
  ASSERT_FALSE(findings.empty());
  EXPECT_GE(findings.front().max_atomic, 1e9);
  EXPECT_EQ(findings.front().op, Op::Sub);
  for (std::size_t i = 1; i < findings.size(); ++i) EXPECT_GE(findings[i - 1].max_atomic, findings[i].max_atomic);
  for (const auto& fd : findings) EXPECT_TRUE(f.in_domain(fd.point));
}

TEST(Search, WellConditionedFunctionHasNoFindings) {
  SearchOptions o;
  EXPECT_TRUE(search_error_inputs(parse("func f(x in [0, 1]) = x + 1"), o).empty());
}

TEST(Search, LargeArgumentCancellationIsFound) {
  SearchOptions o;
  o.budget = 1024;
  const auto findings = search_error_inputs(find_entry("sqrt_gap")->function, o);
  ASSERT_FALSE(findings.empty());
  EXPECT_GE(findings.front().max_atomic, 1e5);
}

TEST(Search, DeterministicAcrossThreadCounts) {
  const FunctionDef& f = find_entry("sin_shift")->function;
  SearchOptions o;
  o.seed = 99;
  o.budget = 2048;
  o.threads = 1;
  const auto one = search_error_inputs(f, o);
  for (unsigned threads : {2u, 4u, 7u}) {
    o.threads = threads;
    const auto many = search_error_inputs(f, o);
    ASSERT_EQ(many.size(), one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      EXPECT_EQ(many[i].point, one[i].point);
      EXPECT_EQ(many[i].max_atomic, one[i].max_atomic);
    }
  }
}

TEST(Search, RejectsUnboundedOrInvalidOptions) {
  SearchOptions o;
  EXPECT_THROW((void)search_error_inputs(parse("func f(x) = x - 1"), o), Error);
  o.budget = 0;
  EXPECT_THROW((void)search_error_inputs(parse("func f(x in [0, 1]) = x - 1"), o), Error);
  SearchOptions boxed;
  boxed.budget = 512;
  boxed.box = std::vector<Interval>{Interval::closed(1e8, 1e10)};
  const auto findings = search_error_inputs(parse("func f(x) = sqrt(x + 1) - sqrt(x)"), boxed);
  ASSERT_FALSE(findings.empty());
  EXPECT_GE(findings.front().point[0], 1e8);
}
