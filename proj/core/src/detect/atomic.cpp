#include <algorithm>
#include <cmath>
#include <limits>

#include "atomic_formulas.hpp"
#include "ofp/detect.hpp"

namespace ofp {
namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |num / den| with the conventions of the condition formulas: a zero numerator
// means nothing is amplified, a zero denominator with a nonzero numerator is
// an exact cancellation, and anything NaN flags.
double ratio(double num, double den) noexcept {
  if (std::isnan(num) || std::isnan(den)) return kInf;
  if (num == 0.0) return 0.0;
  if (den == 0.0) return kInf;
  const double r = std::fabs(num / den);
  return std::isnan(r) ? kInf : r;
}

}  // namespace

std::array<double, 2> operand_conditions(const TraceRecord& r) noexcept {
  const double u = r.operands[0];
  const double v = r.operands[1];
  const double g = r.result;
  switch (r.op) {
    case Op::Add:
    case Op::Sub:
      return {ratio(u, g), ratio(v, g)};
    case Op::Mul:
    case Op::Div:
      return {1.0, 1.0};
    case Op::Neg:
      return {1.0, 0.0};
    case Op::Sin:
      if (u == 0.0) return {1.0, 0.0};
      return {ratio(u * std::cos(u), g), 0.0};
    case Op::Cos:
      return {ratio(u * std::sin(u), g), 0.0};
    case Op::Tan:
      if (u == 0.0) return {1.0, 0.0};
      return {ratio(u, std::sin(u) * std::cos(u)), 0.0};
    case Op::Exp:
      return {std::isnan(u) ? kInf : std::fabs(u), 0.0};
    case Op::Log:
      return {ratio(1.0, g), 0.0};
    case Op::Sqrt:
      return {0.5, 0.0};
    case Op::Pow: {
      const double by_base = std::isnan(v) ? kInf : std::fabs(v);
      const double by_exp = v == 0.0 ? 0.0 : ratio(v * std::log(u), 1.0);
      return {by_base, by_exp};
    }
    case Op::Asin:
      if (u == 0.0) return {1.0, 0.0};
      return {ratio(u, std::sqrt(1.0 - u * u) * g), 0.0};
    case Op::Acos:
      return {ratio(u, std::sqrt(1.0 - u * u) * g), 0.0};
    case Op::Atan:
      if (u == 0.0) return {1.0, 0.0};
      return {ratio(u, (1.0 + u * u) * g), 0.0};
  }
  return {kInf, kInf};
}

}  // namespace detail

double AtomicConditionRecord::max() const noexcept {
  double m = 0.0;
  for (double c : conditions) m = std::max(m, c);
  return m;
}

std::vector<AtomicConditionRecord> atomic_conditions(const EvalTrace& trace) {
  std::vector<AtomicConditionRecord> out;
  out.reserve(trace.records.size());
  for (const TraceRecord& r : trace.records) {
    auto c = detail::operand_conditions(r);
    out.push_back({r.node, r.op, std::vector<double>(c.begin(), c.begin() + r.operand_count())});
  }
  return out;
}

AtomicPeak max_atomic_condition(const EvalTrace& trace, bool cancellation_only) {
  AtomicPeak peak;
  for (const TraceRecord& r : trace.records) {
    if (cancellation_only && r.op != Op::Add && r.op != Op::Sub) continue;
    auto c = detail::operand_conditions(r);
    double m = c[0];
    if (r.operand_count() == 2) m = std::max(m, c[1]);
    if (!peak.node || m > peak.value) {
      peak.value = m;
      peak.node = r.node;
      peak.op = r.op;
    }
  }
  return peak;
}

}  // namespace ofp
