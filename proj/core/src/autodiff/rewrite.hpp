#pragma once

#include <optional>

#include "ofp/expr.hpp"

namespace ofp::detail {

/// Folds `op` on numbers when the binary64 result is exact and finite.
std::optional<double> fold_exact(Op op, double lhs, double rhs = 0.0) noexcept;

/// Builds a node from already simplified children and rewrites it locally to a fixed point.
Expr make_unary(Op op, Expr child);
Expr make_binary(Op op, Expr lhs, Expr rhs);

}  // namespace ofp::detail
