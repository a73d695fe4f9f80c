#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "ofp/detect.hpp"
#include "ofp/repair.hpp"

namespace ofp {

int term_cap(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("radius must be positive and finite");
  double power = radius;
  for (int n = 1; n < 10; ++n) {
    if (radius + power == radius) return n;
    power *= radius;
  }
  return 10;
}

std::string_view constant_mode_name(ConstantMode mode) noexcept {
  return mode == ConstantMode::Kept ? "kept" : "analytically-cancelled";
}

std::string_view route_name(ExpansionRoute route) noexcept {
  switch (route) {
    case ExpansionRoute::Direct: return "direct";
    case ExpansionRoute::SeriesDivision: return "series-division";
    case ExpansionRoute::PerturbationLift: return "perturbation-lift";
  }
  return "?";
}

std::string_view failure_name(FailureReason reason) noexcept {
  return reason == FailureReason::Divergence ? "divergence" : "irreducible-constant";
}

double project_nice(double x, double tolerance) {
  if (!std::isfinite(x)) throw Error("cannot project a non-finite coordinate");
  if (!(tolerance >= 0.0)) throw Error("projection tolerance must be nonnegative");
  std::array<char, 64> buf{};
  for (int digits = 1; digits <= 17; ++digits) {
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, digits - 1);
    if (ec != std::errc()) break;
    double candidate = 0.0;
    std::from_chars(buf.data(), end, candidate);
    if (std::fabs(candidate - x) <= tolerance) return candidate;
  }
  return x;
}

namespace {

const Expr* node_at_preorder(const Expr& e, std::size_t target, std::size_t& next) {
  if (next++ == target) return &e;
  const int n = e.kind() == NodeKind::Binary ? 2 : e.kind() == NodeKind::Unary ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    if (const Expr* hit = node_at_preorder(e.child(static_cast<std::size_t>(i)), target, next)) return hit;
  }
  return nullptr;
}

std::set<std::size_t> params_of(const Expr& e, std::size_t arity) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < arity; ++i) {
    if (depends_on(e, i)) out.insert(i);
  }
  return out;
}

// Parameters occurring in exactly one operand of the worst cancellation node.
std::vector<std::size_t> separating_params(const FunctionDef& f, std::span<const double> point) {
  EvalTrace trace = trace_expr(f.body(), point);
  AtomicPeak peak = max_atomic_condition(trace, true);
  if (!peak.node) return {};
  std::size_t next = 0;
  const Expr* node = node_at_preorder(f.body(), *peak.node, next);
  if (node == nullptr || node->kind() != NodeKind::Binary) return {};
  auto lhs = params_of(node->child(0), f.arity());
  auto rhs = params_of(node->child(1), f.arity());
  std::vector<std::size_t> out;
  std::set_symmetric_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ExpansionChoice choose_expansion(const FunctionDef& f, std::span<const double> flagged, double radius,
                                 std::span<const double> gamma) {
  if (flagged.size() != f.arity()) throw Error("flagged point has the wrong number of coordinates");
  if (f.arity() == 0) throw Error("function has no parameters to expand in");
  if (!(radius > 0.0)) throw Error("radius must be positive");

  std::vector<std::size_t> candidates = separating_params(f, flagged);
  std::size_t var = 0;
  if (!candidates.empty()) {
    var = *std::min_element(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(flagged[a]) < std::fabs(flagged[b]);
    });
  } else {
    double best = -1.0;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      double g = std::numeric_limits<double>::quiet_NaN();
      if (i < gamma.size()) {
        g = gamma[i];
      } else {
        try {
          g = function_condition(f, flagged, i);
        } catch (const Error&) {
        }
      }
      if (!std::isnan(g) && g > best) {
        best = g;
        var = i;
      }
    }
  }

  ExpansionChoice out{var, std::vector<double>(flagged.begin(), flagged.end())};
  double& a = out.point[var];
  const bool zero_ok = f.params()[var].domain.contains(0.0);
  a = std::fabs(a) <= radius && zero_ok ? 0.0 : project_nice(a, radius / 2.0);
  return out;
}

}  // namespace ofp
