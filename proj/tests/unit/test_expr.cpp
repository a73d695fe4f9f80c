#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "ofp/corpus.hpp"
#include "ofp/expr.hpp"
#include "ofp/random.hpp"

using namespace ofp;

namespace {

// Random expression over `arity` parameters, depth-bounded.
Expr random_expr(Rng& rng, std::size_t arity, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    if (rng.below(2) == 0) return Expr::param(rng.below(arity));
    const double v = std::ldexp(static_cast<double>(rng.below(2000)) + 1.0, static_cast<int>(rng.below(20)) - 10);
    return Expr::number(rng.below(3) == 0 ? -v : v);
  }
  static constexpr Op unary_ops[] = {Op::Neg, Op::Sin, Op::Cos, Op::Tan, Op::Asin, Op::Acos,
                                     Op::Atan, Op::Exp, Op::Log, Op::Sqrt};
  static constexpr Op binary_ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow};
  if (rng.below(3) == 0) return Expr::unary(unary_ops[rng.below(std::size(unary_ops))], random_expr(rng, arity, depth - 1));
  const Op op = binary_ops[rng.below(std::size(binary_ops))];
  return Expr::binary(op, random_expr(rng, arity, depth - 1), random_expr(rng, arity, depth - 1));
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b) || (std::isnan(a) && std::isnan(b));
}

}  // namespace

TEST(Parse, MotivatingExample) {
  const FunctionDef f = parse("func f(x in [0, 3], eps in [-0.001, 0.001]) = sin(x + eps) - sin(x)");
  EXPECT_EQ(f.name(), "f");
  ASSERT_EQ(f.arity(), 2u);
  EXPECT_EQ(f.params()[1].name, "eps");
  EXPECT_EQ(f.params()[1].domain, Interval::closed(-0.001, 0.001));
  const std::vector<double> p{2.13, 1e-6};
  EXPECT_TRUE(same_bits(evaluate(f, p), std::sin(2.13 + 1e-6) - std::sin(2.13)));
}

TEST(Parse, PrecedenceAndAssociativity) {
  const std::vector<double> p{2.0};
  EXPECT_EQ(evaluate(parse("func f(x) = -x^2"), p), -4.0);
  EXPECT_EQ(evaluate(parse("func f(x) = 2^3^2"), p), 512.0);
  EXPECT_EQ(evaluate(parse("func f(x) = 8 / x / 2"), p), 2.0);
  EXPECT_EQ(evaluate(parse("func f(x) = 1 - x - 3"), p), -4.0);
  EXPECT_EQ(evaluate(parse("func f(x) = 1 + x * 3"), p), 7.0);
}

TEST(Parse, IntervalsAndComments) {
  const auto defs = parse_file("# header\nfunc a(x in (0, inf)) = log(x)\n\n# second\nfunc b(y) = y\n");
  ASSERT_EQ(defs.size(), 2u);
  const Interval& d = defs[0].params()[0].domain;
  EXPECT_FALSE(d.contains(0.0));
  EXPECT_TRUE(d.contains(1e300));
  EXPECT_FALSE(d.bounded());
  EXPECT_EQ(defs[1].params()[0].domain, Interval::unbounded());
}

TEST(Parse, ErrorsCarryPosition) {
  struct Case {
    const char* src;
    std::size_t line;
    std::size_t column;
  };
  const Case cases[] = {
      {"func f(x) = x +", 1, 15},
      {"func f(x) =\n  foo(x)", 2, 3},
      {"func f(x) = sin(x, x)", 1, 13},
      {"func f(x in [2, 1]) = x", 1, 13},
      {"func f(x, x) = x", 1, 11},
      {"func f(x) = y", 1, 13},
      {"func f(x) = 1e999", 1, 13},
  };
  for (const Case& c : cases) {
    SCOPED_TRACE(c.src);
    try {
      (void)parse(c.src);
      FAIL() << "expected a ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line);
      EXPECT_EQ(e.column(), c.column);
    }
  }
}

TEST(Parse, SingleDeclarationRequired) {
  EXPECT_THROW((void)parse("func a(x) = x func b(x) = x"), ParseError);
  EXPECT_THROW((void)parse("# nothing"), ParseError);
}

TEST(Print, RoundTripCorpus) {
  for (const CorpusEntry& e : builtin_corpus()) {
    SCOPED_TRACE(e.id);
    const std::string text = pretty_print(e.function);
    const FunctionDef back = parse(text);
    EXPECT_TRUE(structurally_equal(back, e.function));
    EXPECT_EQ(pretty_print(back), text);
  }
}

TEST(Print, FormatNumberIsShortestRoundTrip) {
  for (double v : {0.1, 1e-6, 3.39e-215, 2.13, 1e300, 2.2250738585072014e-308, 123456789.0, 0.3}) {
    const std::string s = format_number(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Property, RandomTreesRoundTripThroughText) {
  Rng rng(7);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int i = 0; i < 500; ++i) {
    const Expr e = random_expr(rng, 3, 5);
    const std::string src = "func g(x, y, z) = " + to_source(e, names);
    SCOPED_TRACE(src);
    const FunctionDef f = parse(src);
    EXPECT_TRUE(structurally_equal(f.body(), e));
    const std::vector<double> p{rng.uniform(), 1.0 + rng.uniform(), -rng.uniform()};
    EXPECT_TRUE(same_bits(evaluate(f.body(), p), evaluate(e, p)));
  }
}

TEST(Evaluate, CancellationIsBitExact) {
  const FunctionDef f = parse("func d(x, y) = x - y");
  const std::vector<double> p{3.14159265358973, 3.14159265358972};
  const Evaluation r = eval_working(f, p);
  EXPECT_EQ(std::bit_cast<std::uint64_t>(r.value), std::bit_cast<std::uint64_t>(1.021405182655144e-14));
  ASSERT_EQ(r.trace.records.size(), 1u);
  EXPECT_EQ(r.trace.records[0].op, Op::Sub);
}

TEST(Evaluate, TraceHasOneRecordPerOperation) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Expr e = random_expr(rng, 2, 4);
    const std::vector<double> p{0.25, 0.75};
    const EvalTrace t = trace_expr(e, p);
    EXPECT_EQ(t.records.size(), operation_count(e));
    EXPECT_TRUE(same_bits(t.result, evaluate(e, p)));
  }
}

TEST(Evaluate, DomainViolationIsFlaggedNotThrown) {
  const FunctionDef f = parse("func f(x) = log(x) + 1");
  const std::vector<double> p{-1.0};
  const Evaluation r = eval_working(f, p);
  EXPECT_TRUE(std::isnan(r.value));
  EXPECT_TRUE(r.trace.flagged);
  EXPECT_TRUE(r.trace.records.front().flagged);
}

TEST(Evaluate, RejectsMalformedPoints) {
  const FunctionDef f = parse("func f(x, y) = x * y");
  const std::vector<double> short_point{1.0};
  const std::vector<double> nan_point{1.0, NAN};
  EXPECT_THROW((void)eval_working(f, short_point), Error);
  EXPECT_THROW((void)eval_working(f, nan_point), Error);
}

TEST(Evaluate, Deterministic) {
  const FunctionDef f = builtin_corpus().front().function;
  const std::vector<double> p{2.13, 1e-6};
  const double a = evaluate(f, p);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(same_bits(evaluate(f, p), a));
}

TEST(Structure, SubstituteAndConstants) {
  const FunctionDef f = parse("func f(x, y) = (x + 1) * y - 2");
  const Expr s = substitute(f.body(), 0, Expr::number(3.0));
  EXPECT_FALSE(depends_on(s, 0));
  EXPECT_TRUE(depends_on(s, 1));
  const std::vector<double> p{0.0, 5.0};
  EXPECT_EQ(evaluate(s, p), 18.0);
  const auto constants = constants_preorder(f.body());
  ASSERT_EQ(constants.size(), 2u);
  EXPECT_EQ(*as_number(constants[0]), 1.0);
  EXPECT_EQ(*as_number(constants[1]), 2.0);
  const Expr r = replace_constant(f.body(), 1, Expr::param(0));
  const std::vector<double> q{4.0, 1.0};
  EXPECT_EQ(evaluate(r, q), 1.0);
}

TEST(FunctionDefTest, RejectsUndeclaredParameter) {
  EXPECT_THROW(FunctionDef("f", {{"x", Interval::unbounded()}}, Expr::param(1)), Error);
}
