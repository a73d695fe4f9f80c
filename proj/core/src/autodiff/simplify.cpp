#include <cfloat>
#include <cmath>
#include <unordered_map>

#include "ofp/autodiff.hpp"
#include "rewrite.hpp"

namespace ofp {
namespace detail {
namespace {

bool representable_exactly(double r) noexcept { return r == 0.0 || std::fabs(r) >= DBL_MIN; }

std::optional<double> exact_product(double a, double b) noexcept {
  const double r = a * b;
  if (!std::isfinite(r)) return std::nullopt;
  if (r == 0.0) {
    if (a == 0.0 || b == 0.0) return r;
    return std::nullopt;
  }
  if (!representable_exactly(r) || std::fma(a, b, -r) != 0.0) return std::nullopt;
  return r;
}

std::optional<double> exact_power(double base, double exponent) noexcept {
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  if (base == 1.0) return 1.0;
  if (base == 0.0 && exponent > 0.0) return 0.0;
  if (exponent != std::trunc(exponent) || std::fabs(exponent) > 64.0) return std::nullopt;
  double acc = 1.0;
  for (int i = 0; i < static_cast<int>(std::fabs(exponent)); ++i) {
    auto next = exact_product(acc, base);
    if (!next) return std::nullopt;
    acc = *next;
  }
  if (exponent > 0.0) return acc;
  const double q = 1.0 / acc;
  if (!std::isfinite(q) || !representable_exactly(q) || std::fma(q, acc, -1.0) != 0.0) return std::nullopt;
  return q;
}

}  // namespace

std::optional<double> fold_exact(Op op, double a, double b) noexcept {
  switch (op) {
    case Op::Neg:
      return -a;
    case Op::Add:
    case Op::Sub: {
      const double bb = op == Op::Add ? b : -b;
      const double s = a + bb;
      if (!std::isfinite(s)) return std::nullopt;
      const double t = s - a;
      const double err = (a - (s - t)) + (bb - t);
      if (err != 0.0) return std::nullopt;
      return s;
    }
    case Op::Mul:
      return exact_product(a, b);
    case Op::Div: {
      if (b == 0.0) return std::nullopt;
      const double q = a / b;
      if (!std::isfinite(q)) return std::nullopt;
      if (q == 0.0) {
        if (a == 0.0) return q;
        return std::nullopt;
      }
      if (!representable_exactly(q) || std::fma(q, b, -a) != 0.0) return std::nullopt;
      return q;
    }
    case Op::Pow:
      return exact_power(a, b);
    case Op::Sqrt: {
      if (a < 0.0) return std::nullopt;
      const double r = std::sqrt(a);
      if (r == 0.0) return r;
      if (!representable_exactly(a) || std::fma(r, r, -a) != 0.0) return std::nullopt;
      return r;
    }
    case Op::Sin:
    case Op::Tan:
    case Op::Asin:
    case Op::Atan:
      if (a == 0.0) return a;
      return std::nullopt;
    case Op::Cos:
    case Op::Exp:
      if (a == 0.0) return 1.0;
      return std::nullopt;
    case Op::Log:
    case Op::Acos:
      if (a == 1.0) return 0.0;
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// One rewrite step on a node whose children are already simplified.
// Returns the same handle when no rule applies.
Expr rewrite_once(const Expr& e) {
  if (e.kind() == NodeKind::Unary) {
    const Expr& c = e.child(0);
    if (e.op() == Op::Neg) {
      if (c.kind() == NodeKind::Unary && c.op() == Op::Neg) return c.child(0);
      if (c.kind() == NodeKind::Binary && c.op() == Op::Mul) {
        if (auto k = as_number(c.child(0))) return Expr::binary(Op::Mul, Expr::number(-*k), c.child(1));
      }
      return e;
    }
    if (auto v = as_number(c)) {
      if (auto r = fold_exact(e.op(), *v)) return Expr::number(*r);
    }
    return e;
  }
  if (e.kind() != NodeKind::Binary) return e;

  const Expr& l = e.child(0);
  const Expr& r = e.child(1);
  auto lv = as_number(l);
  auto rv = as_number(r);
  if (lv && rv) {
    if (auto folded = fold_exact(e.op(), *lv, *rv)) return Expr::number(*folded);
  }
  switch (e.op()) {
    case Op::Add:
      if (is_zero(r)) return l;
      if (is_zero(l)) return r;
      break;
    case Op::Sub:
      if (is_zero(r)) return l;
      if (is_zero(l)) return Expr::unary(Op::Neg, r);
      if (structurally_equal(l, r)) return Expr::number(0.0);
      break;
    case Op::Mul:
      if (is_zero(l) || is_zero(r)) return Expr::number(0.0);
      if (is_one(r)) return l;
      if (is_one(l)) return r;
      if (lv && r.kind() == NodeKind::Binary && r.op() == Op::Mul) {
        if (auto inner = as_number(r.child(0))) {
          if (auto k = fold_exact(Op::Mul, *lv, *inner)) return Expr::binary(Op::Mul, Expr::number(*k), r.child(1));
        }
      }
      break;
    case Op::Div:
      if (is_zero(l) && !is_zero(r)) return Expr::number(0.0);
      if (is_one(r)) return l;
      break;
    case Op::Pow:
      if (is_one(r)) return l;
      if (is_zero(r)) return Expr::number(1.0);
      break;
    default:
      break;
  }
  return e;
}

Expr rewrite(Expr e) {
  for (;;) {
    Expr next = rewrite_once(e);
    if (next.get() == e.get()) return e;
    e = std::move(next);
  }
}

class Simplifier {
 public:
  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr out;
    switch (e.kind()) {
      case NodeKind::Constant:
      case NodeKind::Param:
        out = e;
        break;
      case NodeKind::Unary: {
        Expr c = run(e.child(0));
        out = rewrite(c.get() == e.child(0).get() ? e : Expr::unary(e.op(), std::move(c)));
        break;
      }
      case NodeKind::Binary: {
        Expr l = run(e.child(0));
        Expr r = run(e.child(1));
        const bool same = l.get() == e.child(0).get() && r.get() == e.child(1).get();
        out = rewrite(same ? e : Expr::binary(e.op(), std::move(l), std::move(r)));
        break;
      }
    }
    memo_.emplace(e.get(), out);
    return out;
  }

 private:
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr make_unary(Op op, Expr child) { return rewrite(Expr::unary(op, std::move(child))); }

Expr make_binary(Op op, Expr lhs, Expr rhs) { return rewrite(Expr::binary(op, std::move(lhs), std::move(rhs))); }

}  // namespace detail

Expr simplify(const Expr& e) { return detail::Simplifier().run(e); }

}  // namespace ofp
