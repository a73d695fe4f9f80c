#pragma once

#include <cstddef>
#include <span>

#include "ofp/expr.hpp"

namespace ofp {

inline constexpr std::size_t kDefaultNodeCap = 50'000;

/// Request for the `order`-th partial derivative of `f` in parameter `var`.
struct DerivativeRequest {
  const FunctionDef& f;
  std::size_t var;
  int order;
};

/// Raised when a symbolic derivative grows past the node cap.
class NodeCapExceeded : public Error {
 public:
  NodeCapExceeded(int order, std::size_t nodes)
      : Error("derivative of order " + std::to_string(order) + " has " + std::to_string(nodes) +
              " nodes, over the cap"),
        order_(order),
        nodes_(nodes) {}

  int order() const noexcept { return order_; }
  std::size_t nodes() const noexcept { return nodes_; }

 private:
  int order_;
  std::size_t nodes_;
};

/// Raised when a finite-difference evaluation produces NaN or infinity.
class DerivativeUnavailable : public Error {
 public:
  using Error::Error;
};

/// Conservative, terminating rewrite to a fixed point:
///   exact constant folding, x+0, 0+x, x-0, 0-x, x*1, 1*x, x*0, 0*x, 0/x, x/1,
///   x^1, x^0, -(-x), x-x for structurally identical operands, -(a*x) → (-a)*x
///   and a*(b*x) → (a*b)*x for numbers a, b with an exact product.
/// Preserves real-valued semantics. Binary64 rounding of the original is not
/// preserved (x*0 with infinite x, for one).
Expr simplify(const Expr& e);

/// Simplified symbolic partial derivative of `e` in parameter `var`.
Expr derivative(const Expr& e, std::size_t var);

FunctionDef differentiate(const FunctionDef& f, std::size_t var);

/// `n`-fold differentiate with simplification after each step. Throws
/// NodeCapExceeded when an intermediate derivative exceeds `node_cap` nodes.
FunctionDef nth_derivative(const FunctionDef& f, std::size_t var, int n, std::size_t node_cap = kDefaultNodeCap);
FunctionDef nth_derivative(const DerivativeRequest& request, std::size_t node_cap = kDefaultNodeCap);

/// Default forward-difference step: max(1e-5, 1e-6·|x|).
double default_step(double x) noexcept;

/// Forward difference (f(p + h·e_var) − f(p)) / h in binary64.
/// Throws DerivativeUnavailable if either evaluation is not finite.
double finite_diff(const FunctionDef& f, std::span<const double> point, std::size_t var, double h);

}  // namespace ofp
