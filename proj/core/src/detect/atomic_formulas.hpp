#pragma once

#include <array>

#include "ofp/expr.hpp"

namespace ofp::detail {

/// Condition per operand slot; the second slot is 0 for unary records.
std::array<double, 2> operand_conditions(const TraceRecord& r) noexcept;

}  // namespace ofp::detail
