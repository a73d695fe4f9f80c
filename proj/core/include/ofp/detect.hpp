#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ofp/expr.hpp"

namespace ofp {

/// Condition numbers of one traced operation, one per operand (may be +inf).
struct AtomicConditionRecord {
  std::size_t node;
  Op op;
  std::vector<double> conditions;

  double max() const noexcept;
};

/// |u·∂g/∂u / g| for every operand u of every record. Exact cancellation and
/// NaN intermediate values yield +inf.
std::vector<AtomicConditionRecord> atomic_conditions(const EvalTrace& trace);

struct AtomicPeak {
  double value = 0.0;
  std::optional<std::size_t> node;
  std::optional<Op> op;
};

/// Largest atomic condition over the trace. With `cancellation_only`, only
/// add/sub records count.
AtomicPeak max_atomic_condition(const EvalTrace& trace, bool cancellation_only = false);

/// Raised when Γ is requested at a root of f.
class ConditionUndefined : public Error {
 public:
  using Error::Error;
};

/// Γ_var = |x_var · ∂f/∂x_var / f(x)| with a forward difference of step `h`.
double function_condition(const FunctionDef& f, std::span<const double> point, std::size_t var, double h);
/// Same with the default step for x_var.
double function_condition(const FunctionDef& f, std::span<const double> point, std::size_t var);

struct ConditionProfile {
  std::vector<double> point;
  /// Γ per parameter; NaN where the probe was inconclusive.
  std::vector<double> gamma;
  double max_atomic = 0.0;
  std::optional<double> observed_relative_error;
};

enum class Label { NoSignificantError, OriginalPrecisionRepairable, RequiresHighPrecision };

std::string_view label_name(Label label) noexcept;

struct Thresholds {
  double atomic = 1e5;
  double function = 1e5;
  /// Distance of the Γ probes from the classified point.
  double probe_offset = 1e-5;
};

struct Classification {
  Label label;
  Thresholds thresholds;
  ConditionProfile profile;
  AtomicPeak peak;
  /// Probe point used for each Γᵢ (empty when Γ was not needed).
  std::vector<std::vector<double>> probes;
};

/// Raised when f vanishes at every probe point.
class ClassificationInconclusive : public Error {
 public:
  using Error::Error;
};

/// max atomic < Θ_atomic → NoSignificantError; else maxᵢ Γᵢ ≤ Θ_func →
/// OriginalPrecisionRepairable; else RequiresHighPrecision.
Classification classify(const FunctionDef& f, std::span<const double> point, const Thresholds& thresholds = {});

struct SearchOptions {
  std::size_t budget = 4096;
  std::uint64_t seed = 0x5eed;
  double theta_atomic = 1e5;
  /// Search box per parameter; defaults to the declared domains, which must then be bounded.
  std::optional<std::vector<Interval>> box;
  /// Worker threads for sample evaluation; 0 picks the hardware concurrency.
  unsigned threads = 0;
  std::size_t max_clusters = 8;
  int refine_iterations = 64;
};

struct Finding {
  std::vector<double> point;
  double max_atomic;
  std::optional<std::size_t> node;
  std::optional<Op> op;
};

/// Stratified log/uniform sampling of the box, thresholding on the max atomic
/// condition, greedy clustering, then coordinate-wise golden-section ascent per
/// cluster. Sorted by descending max atomic condition; deterministic for a seed
/// regardless of thread count.
std::vector<Finding> search_error_inputs(const FunctionDef& f, const SearchOptions& options);

}  // namespace ofp
