#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ofp/expr.hpp"
#include "ofp/oracle.hpp"
#include "ofp/repair.hpp"

namespace ofp {

/// Neighbourhood of `center` along parameter `var`; other coordinates stay fixed.
struct Region {
  std::vector<double> center;
  std::size_t var = 0;
  double radius = 0.01;
};

using Point = std::vector<double>;

/// n points uniform over [mid − r, mid + r]; the midpoint comes first.
std::vector<Point> sample_stable(const Region& region, std::size_t n, std::uint64_t seed);

/// n points mid ± r·10^s, s uniform in [−12, −2], random sign.
std::vector<Point> sample_decayed(const Region& region, std::size_t n, std::uint64_t seed);

enum class Variant { Naive, Patched };
std::string_view variant_name(Variant v) noexcept;

struct Offender {
  Point point;
  double error = 0.0;
};

struct AreaMetrics {
  std::size_t samples = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;
  Offender worst_abs;
  Offender worst_rel;
  /// Points whose truth is zero: absolute error only, left out of max_rel.
  std::vector<Offender> zero_truth;
};

struct ExcludedPoint {
  Point point;
  std::string area;
  std::string reason;
};

struct EvaluationReport {
  std::string function;
  Variant variant = Variant::Naive;
  AreaMetrics stable;
  AreaMetrics decayed;
  /// Points dropped because the oracle failed there.
  std::vector<ExcludedPoint> excluded;
};

struct MeasureOptions {
  std::size_t n_stable = 1000;
  std::size_t n_decayed = 1000;
  long precision_bits = kDefaultOracleBits;
  std::uint64_t seed = 42;
  unsigned threads = 0;
};

struct Measurement {
  EvaluationReport naive;
  std::optional<EvaluationReport> patched;
};

/// Errors of f and of the patch (when given) against the oracle on the same
/// stable and decayed samples of the region.
Measurement measure(const FunctionDef& f, const TaylorPatch* patch, const Region& region,
                    const MeasureOptions& options = {});

struct Improvement {
  double stable_abs;
  double stable_rel;
  double decayed_abs;
  double decayed_rel;
};

/// log10(naive / patched); +inf when patched is 0, 0 when both are.
double improvement_order(double naive, double patched) noexcept;
Improvement improvement_orders(const EvaluationReport& naive, const EvaluationReport& patched);

}  // namespace ofp
