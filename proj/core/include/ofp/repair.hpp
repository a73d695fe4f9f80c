#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ofp/autodiff.hpp"
#include "ofp/expr.hpp"

namespace ofp {

/// Number of retained Taylor terms at `radius`: the smallest n with
/// radius + radiusⁿ == radius in binary64, clamped to [1, 10].
int term_cap(double radius);

enum class ConstantMode { Kept, AnalyticallyCancelled };

std::string_view constant_mode_name(ConstantMode mode) noexcept;

/// How the series was obtained.
enum class ExpansionRoute {
  /// Derivatives of f in the expansion variable.
  Direct,
  /// Power-series division of numerator by denominator at a removable singularity.
  SeriesDivision,
  /// A literal offset lifted to a variable and expanded around zero.
  PerturbationLift,
};

std::string_view route_name(ExpansionRoute route) noexcept;

/// Coefficient of δᵏ: f⁽ᵏ⁾(a)/k! symbolically and in binary64.
struct Coefficient {
  int order;
  Expr expr;
  double value;
};

/// The literal lifted by ExpansionRoute::PerturbationLift.
struct LiftedLiteral {
  /// Pre-order position among the body's Constant nodes.
  std::size_t occurrence;
  double value;
};

struct TaylorPatch {
  std::string source_name;
  std::vector<ParamDecl> params;
  /// Parameter whose neighbourhood the patch covers.
  std::size_t var = 0;
  std::vector<double> expansion_point;
  double radius = 0.0;
  ExpansionRoute route = ExpansionRoute::Direct;
  std::optional<LiftedLiteral> lifted;
  /// Series offset: x_var − a_var, or the lifted literal.
  Expr delta;
  /// Degrees 0..terms-1, in order. Dropped or structurally zero terms keep their slot.
  std::vector<Coefficient> coefficients;
  int terms = 0;
  ConstantMode mode = ConstantMode::Kept;
  /// |c_j|·ρ^(j−i) ≤ |c_i| for consecutive nonzero coefficients, ρ = |δ| at the boundary.
  bool magnitude_ok = true;
  /// Fewer terms than the cap because a derivative exceeded the node cap.
  bool degraded = false;
  /// Horner form over `params`, highest degree first.
  Expr horner;
};

enum class FailureReason { Divergence, IrreducibleConstant };

std::string_view failure_name(FailureReason reason) noexcept;

struct RepairFailure {
  FailureReason reason;
  std::string message;
};

struct RepairOptions {
  double theta_atomic = 1e5;
  std::size_t node_cap = kDefaultNodeCap;
  /// Replaces term_cap(radius) when set.
  std::optional<int> terms;
  bool allow_series_division = true;
  bool allow_lift = true;
};

class SynthesisResult {
 public:
  SynthesisResult(TaylorPatch patch) : value_(std::move(patch)) {}
  SynthesisResult(RepairFailure failure) : value_(std::move(failure)) {}

  bool ok() const noexcept { return std::holds_alternative<TaylorPatch>(value_); }
  explicit operator bool() const noexcept { return ok(); }
  const TaylorPatch& patch() const { return std::get<TaylorPatch>(value_); }
  const RepairFailure& failure() const { return std::get<RepairFailure>(value_); }

 private:
  std::variant<TaylorPatch, RepairFailure> value_;
};

/// Taylor patch of f in parameter `var` around `point`, valid for
/// |x_var − point[var]| ≤ radius. Tries the direct expansion, then series
/// division at a removable singularity, then a perturbation lift of a literal.
/// Throws ofp::Error on violated preconditions (radius, domain, arity).
SynthesisResult synthesize_patch(const FunctionDef& f, std::span<const double> point, std::size_t var, double radius,
                                 const RepairOptions& options = {});

struct ExpansionChoice {
  std::size_t var;
  std::vector<double> point;
};

/// Expansion variable and point for a flagged input. The variable is the one
/// separating the operands of the worst add/sub node; ties go to the smallest
/// |coordinate| and, failing that, to the largest entry of `gamma`. Its
/// coordinate is projected to 0 within `radius`, else to the shortest decimal
/// within radius/2.
ExpansionChoice choose_expansion(const FunctionDef& f, std::span<const double> flagged, double radius,
                                 std::span<const double> gamma = {});

/// Shortest decimal within `tolerance` of `x`.
double project_nice(double x, double tolerance);

/// Raised by eval_patch outside the validity radius.
class PatchDomainExceeded : public Error {
 public:
  using Error::Error;
};

/// Binary64 Horner evaluation of the patch at `point`.
double eval_patch(const TaylorPatch& p, std::span<const double> point);

/// `func <name>_patched(...) = <horner>`; re-parses to an expression that
/// evaluates bit-identically to eval_patch.
std::string emit_patch_source(const TaylorPatch& p);

}  // namespace ofp
