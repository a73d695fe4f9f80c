#include <cmath>
#include <optional>

#include "ofp/repair.hpp"
#include "patch_internal.hpp"

namespace ofp {
namespace detail {
namespace {

// -c when c is a negation, possibly as the leading factor of a product or
// quotient. Sign symmetry of IEEE rounding makes the rewrite bitwise exact.
std::optional<Expr> negated(const Expr& c) {
  if (c.kind() == NodeKind::Unary && c.op() == Op::Neg) return c.child(0);
  if (c.kind() == NodeKind::Binary && (c.op() == Op::Mul || c.op() == Op::Div)) {
    if (auto inner = negated(c.child(0))) return Expr::binary(c.op(), std::move(*inner), c.child(1));
  }
  return std::nullopt;
}

Expr accumulate(Expr acc, const Expr& c) {
  if (auto positive = negated(c)) return Expr::binary(Op::Sub, std::move(acc), std::move(*positive));
  return Expr::binary(Op::Add, std::move(acc), c);
}

// acc·δ; a literal one factor is exact and left out.
Expr scale(Expr acc, const Expr& delta) {
  if (is_one(delta)) return acc;
  if (is_one(acc)) return delta;
  return Expr::binary(Op::Mul, std::move(acc), delta);
}

}  // namespace

Expr horner(const std::vector<Coefficient>& coefficients, const Expr& delta, ConstantMode mode) {
  auto skipped = [&](std::size_t k) {
    return is_zero(coefficients[k].expr) || (k == 0 && mode == ConstantMode::AnalyticallyCancelled);
  };
  std::size_t top = coefficients.size();
  while (top > 0 && skipped(top - 1)) --top;
  if (top == 0) return Expr::number(0.0);
  --top;
  Expr acc = coefficients[top].expr;
  for (std::size_t k = top; k-- > 0;) {
    acc = scale(std::move(acc), delta);
    if (!skipped(k)) acc = accumulate(std::move(acc), coefficients[k].expr);
  }
  return acc;
}

}  // namespace detail

double eval_patch(const TaylorPatch& p, std::span<const double> point) {
  if (point.size() != p.params.size()) throw Error("point has the wrong number of coordinates for the patch");
  const double offset = std::fabs(point[p.var] - p.expansion_point[p.var]);
  if (!(offset <= p.radius)) {
    throw PatchDomainExceeded("patch domain exceeded: |" + p.params[p.var].name + " - " +
                              format_number(p.expansion_point[p.var]) + "| = " + format_number(offset) +
                              " > " + format_number(p.radius));
  }
  return evaluate(p.horner, point);
}

std::string emit_patch_source(const TaylorPatch& p) {
  FunctionDef patched(p.source_name + "_patched", p.params, p.horner);
  return pretty_print(patched) + "\n";
}

}  // namespace ofp
