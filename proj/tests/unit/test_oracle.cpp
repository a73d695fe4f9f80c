#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <mpfr.h>

#include "ofp/corpus.hpp"
#include "ofp/oracle.hpp"

using namespace ofp;

TEST(BigFloatTest, ValueSemantics) {
  BigFloat a(0.1, 256);
  EXPECT_EQ(a.precision(), 256);
  EXPECT_EQ(a.to_double(), 0.1);
  BigFloat b = a;
  mpfr_mul_2si(b.raw(), b.raw(), 1, MPFR_RNDN);
  EXPECT_EQ(a.to_double(), 0.1);
  EXPECT_EQ(b.to_double(), 0.2);
  BigFloat c = std::move(b);
  EXPECT_EQ(c.to_double(), 0.2);
  a = c;
  EXPECT_EQ(a.to_double(), 0.2);
  EXPECT_EQ(BigFloat(-3.0, 128).sign(), -1);
  EXPECT_TRUE(BigFloat(0.0, 128).is_zero());
}

TEST(BigFloatTest, DecimalParsingIsExactToPrecision) {
  const BigFloat tenth = BigFloat::from_decimal("0.1", 256);
  const BigFloat binary(0.1, 256);
  EXPECT_EQ(tenth.to_double(), 0.1);
  EXPECT_NE(mpfr_cmp(tenth.raw(), binary.raw()), 0);
  EXPECT_EQ(tenth.to_string(5), "1.0000e-01");
  EXPECT_THROW((void)BigFloat::from_decimal("one", 256), Error);
}

TEST(EvalExtended, CancellationFromBinaryInputsIsExact) {
  const FunctionDef f = parse("func d(x, y) = x - y");
  const std::vector<double> p{3.14159265358973, 3.14159265358972};
  const BigFloat truth = eval_extended(f, p);
  EXPECT_EQ(truth.to_double(), 1.021405182655144e-14);
  EXPECT_EQ(relative_error(1.021405182655144e-14, truth).value, 0.0);
}

TEST(EvalExtended, DecimalLiteralInterpretation) {
  const FunctionDef f = parse("func d(x, y) = x - y");
  const std::vector<double> p{3.14159265358973, 3.14159265358972};
  const BigFloat truth = eval_extended(f, p, 256, InputInterpretation::DecimalLiteral);
  EXPECT_NEAR(truth.to_double(), 1e-14, 1e-28);
  const double err = relative_error(1.021405182655144e-14, truth).value;
  EXPECT_GE(err, 0.0213);
  EXPECT_LE(err, 0.0215);
}

TEST(EvalExtended, DecimalConstantsUseTheirSpelling) {
  const FunctionDef f = parse("func g(x) = 0.1 * x");
  const std::vector<double> one{1.0};
  const BigFloat exact = eval_extended(f, one);
  const BigFloat decimal = eval_extended(f, one, 256, InputInterpretation::DecimalLiteral);
  EXPECT_NE(mpfr_cmp(exact.raw(), decimal.raw()), 0);
  EXPECT_EQ(exact.to_double(), decimal.to_double());
}

TEST(EvalExtended, LibrarySineWithinOneUlp) {
  const FunctionDef f = parse("func s(x) = sin(x)");
  for (double x : {2.13, 0.5, 1e-8, 100.0, 1e6}) {
    const std::vector<double> p{x};
    const double truth = eval_extended(f, p).to_double();
    const double lib = std::sin(x);
    EXPECT_TRUE(lib == truth || std::nextafter(lib, truth) == truth) << x;
  }
}

TEST(EvalExtended, ConstantsAreExact) {
  const FunctionDef f = parse("func c(x) = 3 * 0.25 + 1");
  const std::vector<double> p{0.0};
  EXPECT_EQ(eval_extended(f, p).to_double(), 1.75);
}

TEST(EvalExtended, NaiveMotivatingError) {
  const FunctionDef& f = find_entry("sin_shift")->function;
  const std::vector<double> p{2.13, 1e-6};
  const double err = relative_error(evaluate(f, p), eval_extended(f, p)).value;
  EXPECT_GE(err, 1.0e-10);
  EXPECT_LE(err, 1.3e-10);
}

TEST(EvalExtended, DomainViolationsThrow) {
  const std::vector<double> zero{0.0};
  const std::vector<double> minus{-1.0};
  EXPECT_THROW((void)eval_extended(parse("func f(x) = 1 / x"), zero), OracleError);
  EXPECT_THROW((void)eval_extended(parse("func f(x) = log(x)"), minus), OracleError);
  EXPECT_THROW((void)eval_extended(parse("func f(x) = sqrt(x)"), minus), OracleError);
  EXPECT_THROW((void)eval_extended(parse("func f(x) = asin(x)"), std::vector{2.0}), OracleError);
}

TEST(EvalExtended, RejectsLowPrecision) {
  const std::vector<double> p{1.0};
  EXPECT_THROW((void)eval_extended(parse("func f(x) = x"), p, 64), Error);
}

TEST(ErrorMeasures, Basics) {
  const BigFloat truth(2.0, 256);
  EXPECT_EQ(relative_error(2.0, truth).value, 0.0);
  EXPECT_FALSE(relative_error(2.0, truth).absolute);
  EXPECT_EQ(relative_error(2.5, truth).value, 0.25);
  EXPECT_EQ(absolute_error(2.5, truth), 0.5);
  const ErrorMeasure z = relative_error(1e-20, BigFloat(0.0, 256));
  EXPECT_TRUE(z.absolute);
  EXPECT_EQ(z.value, 1e-20);
}

TEST(ErrorMeasures, ResolvesTinyDifferences) {
  BigFloat truth(1.0, 256);
  mpfr_add_d(truth.raw(), truth.raw(), 1.165e-27, MPFR_RNDN);
  EXPECT_NEAR(relative_error(1.0, truth).value, 1.165e-27, 1e-40);
}

TEST(Property, PrecisionIsConverged) {
  for (const CorpusEntry& e : builtin_corpus()) {
    SCOPED_TRACE(e.id);
    for (const std::vector<double>& p : {e.peak, e.region.center}) {
      BigFloat lo(256), hi(512);
      try {
        lo = eval_extended(e.function, p, 256);
        hi = eval_extended(e.function, p, 512);
      } catch (const OracleError&) {
        continue;
      }
      if (hi.is_zero()) {
        EXPECT_TRUE(lo.is_zero());
        continue;
      }
      BigFloat diff(512);
      mpfr_sub(diff.raw(), lo.raw(), hi.raw(), MPFR_RNDN);
      mpfr_div(diff.raw(), diff.raw(), hi.raw(), MPFR_RNDN);
      mpfr_abs(diff.raw(), diff.raw(), MPFR_RNDN);
      EXPECT_LE(diff.to_double(), std::ldexp(1.0, -240));
    }
  }
}

TEST(Property, TwinFormAgreesWithOriginal) {
  const CorpusEntry& e = *find_entry("sqrt_gap");
  ASSERT_TRUE(e.twin.has_value());
  for (double x : {1e8, 3.3e8, 1e9, 7.77e9, 1e10}) {
    const std::vector<double> p{x};
    const BigFloat a = eval_extended(e.function, p);
    const BigFloat b = eval_extended(*e.twin, p);
    EXPECT_LE(relative_error(a.to_double(), b).value, 1e-15);
    BigFloat diff(256);
    mpfr_sub(diff.raw(), a.raw(), b.raw(), MPFR_RNDN);
    mpfr_div(diff.raw(), diff.raw(), b.raw(), MPFR_RNDN);
    EXPECT_LE(std::fabs(diff.to_double()), 1e-70);
  }
}
