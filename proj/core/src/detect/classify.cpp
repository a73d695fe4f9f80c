#include <algorithm>
#include <cmath>
#include <limits>

#include "ofp/autodiff.hpp"
#include "ofp/detect.hpp"

namespace ofp {

double function_condition(const FunctionDef& f, std::span<const double> point, std::size_t var, double h) {
  if (var >= f.arity()) throw Error("parameter index out of range");
  const double value = evaluate(f, point);
  if (!std::isfinite(value)) throw ConditionUndefined("f is not finite at the point");
  if (value == 0.0) throw ConditionUndefined("condition undefined at a root of f; probe a nearby point");
  const double slope = finite_diff(f, point, var, h);
  return std::fabs(point[var] * slope / value);
}

double function_condition(const FunctionDef& f, std::span<const double> point, std::size_t var) {
  if (var >= f.arity()) throw Error("parameter index out of range");
  double h = default_step(point[var]);
  if (!f.params()[var].domain.contains(point[var] + h)) h = -h;
  return function_condition(f, point, var, h);
}

std::string_view label_name(Label label) noexcept {
  switch (label) {
    case Label::NoSignificantError: return "NoSignificantError";
    case Label::OriginalPrecisionRepairable: return "OriginalPrecisionRepairable";
    case Label::RequiresHighPrecision: return "RequiresHighPrecision";
  }
  return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool usable_probe(const FunctionDef& f, const std::vector<double>& probe, std::size_t var) {
  if (!f.params()[var].domain.contains(probe[var])) return false;
  const double v = evaluate(f, probe);
  return std::isfinite(v) && v != 0.0;
}

// Γ at p ± offset·e_var; NaN (and an empty probe) when neither side is usable.
double probe_gamma(const FunctionDef& f, std::span<const double> point, std::size_t var, double offset,
                   std::vector<double>& probe) {
  for (double sign : {1.0, -1.0}) {
    probe.assign(point.begin(), point.end());
    probe[var] += sign * offset;
    if (!usable_probe(f, probe, var)) continue;
    try {
      return function_condition(f, probe, var);
    } catch (const DerivativeUnavailable&) {
    } catch (const ConditionUndefined&) {
    }
  }
  probe.clear();
  return kNaN;
}

}  // namespace

Classification classify(const FunctionDef& f, std::span<const double> point, const Thresholds& thresholds) {
  if (!(thresholds.atomic > 0.0) || !(thresholds.function > 0.0) || !(thresholds.probe_offset > 0.0)) {
    throw Error("thresholds and probe offset must be positive");
  }
  Evaluation ev = eval_working(f, point);
  Classification out;
  out.thresholds = thresholds;
  out.peak = max_atomic_condition(ev.trace);
  out.profile.point.assign(point.begin(), point.end());
  out.profile.max_atomic = out.peak.value;
  out.profile.gamma.assign(f.arity(), kNaN);

  if (out.peak.value < thresholds.atomic) {
    out.label = Label::NoSignificantError;
    return out;
  }

  out.probes.resize(f.arity());
  double worst = -1.0;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    const double g = probe_gamma(f, point, i, thresholds.probe_offset, out.probes[i]);
    out.profile.gamma[i] = g;
    if (!std::isnan(g)) worst = std::max(worst, g);
  }
  if (worst < 0.0) {
    throw ClassificationInconclusive("classification inconclusive: f vanishes or is undefined at every probe point");
  }
  out.label = worst <= thresholds.function ? Label::OriginalPrecisionRepairable : Label::RequiresHighPrecision;
  return out;
}

}  // namespace ofp
