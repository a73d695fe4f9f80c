#pragma once

#include <vector>

#include "ofp/repair.hpp"

namespace ofp::detail {

/// Σ cₖ δᵏ in Horner order, highest degree first. Structurally zero
/// coefficients are skipped and so is c₀ in analytically-cancelled mode.
Expr horner(const std::vector<Coefficient>& coefficients, const Expr& delta, ConstantMode mode);

}  // namespace ofp::detail
