#include <cmath>
#include <unordered_map>

#include "ofp/autodiff.hpp"
#include "rewrite.hpp"

namespace ofp {
namespace {

using detail::make_binary;
using detail::make_unary;

Expr num(double v) { return Expr::number(v); }
Expr add(Expr a, Expr b) { return make_binary(Op::Add, std::move(a), std::move(b)); }
Expr sub(Expr a, Expr b) { return make_binary(Op::Sub, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return make_binary(Op::Mul, std::move(a), std::move(b)); }
Expr div(Expr a, Expr b) { return make_binary(Op::Div, std::move(a), std::move(b)); }
Expr pow(Expr a, Expr b) { return make_binary(Op::Pow, std::move(a), std::move(b)); }
Expr neg(Expr a) { return make_unary(Op::Neg, std::move(a)); }
Expr call(Op op, Expr a) { return make_unary(op, std::move(a)); }
Expr square(const Expr& a) { return pow(a, num(2.0)); }

class Differentiator {
 public:
  explicit Differentiator(std::size_t var) : var_(var) {}

  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.get(), d);
    return d;
  }

 private:
  bool depends(const Expr& e) {
    if (auto it = deps_.find(e.get()); it != deps_.end()) return it->second;
    bool d = false;
    switch (e.kind()) {
      case NodeKind::Constant: d = false; break;
      case NodeKind::Param: d = e.index() == var_; break;
      case NodeKind::Unary: d = depends(e.child(0)); break;
      case NodeKind::Binary: d = depends(e.child(0)) || depends(e.child(1)); break;
    }
    deps_.emplace(e.get(), d);
    return d;
  }

  Expr compute(const Expr& e) {
    if (!depends(e)) return num(0.0);
    if (e.is_param()) return num(1.0);

    const Expr& u = e.child(0);
    if (e.kind() == NodeKind::Unary) {
      Expr du = run(u);
      switch (e.op()) {
        case Op::Neg: return neg(du);
        case Op::Sin: return mul(call(Op::Cos, u), du);
        case Op::Cos: return mul(neg(call(Op::Sin, u)), du);
        case Op::Tan: return div(du, square(call(Op::Cos, u)));
        case Op::Asin: return div(du, call(Op::Sqrt, sub(num(1.0), square(u))));
        case Op::Acos: return neg(div(du, call(Op::Sqrt, sub(num(1.0), square(u)))));
        case Op::Atan: return div(du, add(num(1.0), square(u)));
        case Op::Exp: return mul(e, du);
        case Op::Log: return div(du, u);
        case Op::Sqrt: return mul(mul(num(0.5), pow(u, num(-0.5))), du);
        default: break;
      }
      throw Error("unsupported unary op in derivative");
    }

    const Expr& v = e.child(1);
    const bool du_live = depends(u);
    const bool dv_live = depends(v);
    switch (e.op()) {
      case Op::Add: return add(run(u), run(v));
      case Op::Sub: return sub(run(u), run(v));
      case Op::Mul:
        if (!du_live) return mul(u, run(v));
        if (!dv_live) return mul(run(u), v);
        return add(mul(run(u), v), mul(u, run(v)));
      case Op::Div:
        if (!dv_live) return div(run(u), v);
        if (!du_live) return neg(mul(mul(u, run(v)), pow(v, num(-2.0))));
        return div(sub(mul(run(u), v), mul(u, run(v))), square(v));
      case Op::Pow:
        if (!dv_live) return mul(mul(v, pow(u, sub(v, num(1.0)))), run(u));
        // d(u^v) = u^v · (v'·log u + v·u'/u)
        return mul(e, add(mul(run(v), call(Op::Log, u)), div(mul(v, run(u)), u)));
      default:
        break;
    }
    throw Error("unsupported binary op in derivative");
  }

  std::size_t var_;
  std::unordered_map<const Node*, Expr> memo_;
  std::unordered_map<const Node*, bool> deps_;
};

}  // namespace

Expr derivative(const Expr& e, std::size_t var) { return simplify(Differentiator(var).run(simplify(e))); }

FunctionDef differentiate(const FunctionDef& f, std::size_t var) {
  if (var >= f.arity()) throw Error("differentiation variable out of range");
  return FunctionDef(f.name() + "_d" + f.params()[var].name, f.params(), derivative(f.body(), var));
}

FunctionDef nth_derivative(const FunctionDef& f, std::size_t var, int n, std::size_t node_cap) {
  if (n < 1) throw Error("derivative order must be at least 1");
  if (var >= f.arity()) throw Error("differentiation variable out of range");
  Expr body = simplify(f.body());
  for (int k = 1; k <= n; ++k) {
    body = derivative(body, var);
    if (std::size_t nodes = tree_size(body); nodes > node_cap) throw NodeCapExceeded(k, nodes);
  }
  std::string name = f.name() + "_d" + f.params()[var].name;
  if (n > 1) name += std::to_string(n);
  return FunctionDef(std::move(name), f.params(), std::move(body));
}

FunctionDef nth_derivative(const DerivativeRequest& request, std::size_t node_cap) {
  return nth_derivative(request.f, request.var, request.order, node_cap);
}

double default_step(double x) noexcept { return std::fmax(1e-5, 1e-6 * std::fabs(x)); }

double finite_diff(const FunctionDef& f, std::span<const double> point, std::size_t var, double h) {
  if (h == 0.0 || !std::isfinite(h)) throw Error("finite-difference step must be finite and nonzero");
  if (var >= f.arity()) throw Error("finite-difference variable out of range");
  std::vector<double> shifted(point.begin(), point.end());
  shifted[var] += h;
  const double f0 = evaluate(f, point);
  const double f1 = evaluate(f, shifted);
  if (!std::isfinite(f0) || !std::isfinite(f1)) {
    throw DerivativeUnavailable("derivative unavailable at point: function value is not finite");
  }
  return (f1 - f0) / h;
}

}  // namespace ofp
