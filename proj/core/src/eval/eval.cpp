#include <cmath>
#include <limits>

#include "ofp/eval.hpp"
#include "ofp/parallel.hpp"
#include "ofp/random.hpp"

namespace ofp {
namespace {

void check_region(const Region& region, std::size_t n) {
  if (n == 0) throw Error("sample count must be at least 1");
  if (region.var >= region.center.size()) throw Error("region variable out of range");
  if (!(region.radius > 0.0) || !std::isfinite(region.radius)) throw Error("region radius must be positive");
}

// mid + offset, pulled back toward mid if rounding lands outside the radius.
Point at_offset(const Region& region, double offset) {
  Point p = region.center;
  const double mid = region.center[region.var];
  double x = mid + offset;
  while (std::fabs(x - mid) > region.radius) x = std::nextafter(x, mid);
  p[region.var] = x;
  return p;
}

}  // namespace

std::vector<Point> sample_stable(const Region& region, std::size_t n, std::uint64_t seed) {
  check_region(region, n);
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  out.push_back(region.center);
  for (std::size_t i = 1; i < n; ++i) out.push_back(at_offset(region, region.radius * (2.0 * rng.uniform() - 1.0)));
  return out;
}

std::vector<Point> sample_decayed(const Region& region, std::size_t n, std::uint64_t seed) {
  check_region(region, n);
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double magnitude = region.radius * std::pow(10.0, -12.0 + 10.0 * rng.uniform());
    const double sign = (rng.next() & 1U) != 0 ? -1.0 : 1.0;
    out.push_back(at_offset(region, sign * magnitude));
  }
  return out;
}

std::string_view variant_name(Variant v) noexcept { return v == Variant::Naive ? "naive" : "patched"; }

namespace {

struct PointResult {
  std::optional<BigFloat> truth;
  std::string failure;
};

struct Area {
  const char* name;
  std::vector<Point> points;
  std::vector<PointResult> truths;
};

void oracle_pass(const FunctionDef& f, Area& area, const MeasureOptions& options) {
  area.truths.resize(area.points.size());
  parallel_for(area.points.size(), options.threads, [&](std::size_t i) {
    try {
      area.truths[i].truth = eval_extended(f, area.points[i], options.precision_bits);
    } catch (const Error& e) {
      area.truths[i].failure = e.what();
    }
  });
}

template <typename Approx>
AreaMetrics score(const Area& area, Approx&& approx, const MeasureOptions& options) {
  const std::size_t n = area.points.size();
  std::vector<double> abs_err(n), rel_err(n);
  std::vector<char> zero(n, 0);
  parallel_for(n, options.threads, [&](std::size_t i) {
    if (!area.truths[i].truth) return;
    const BigFloat& truth = *area.truths[i].truth;
    const double v = approx(area.points[i]);
    abs_err[i] = std::isfinite(v) ? absolute_error(v, truth) : std::numeric_limits<double>::infinity();
    ErrorMeasure m = relative_error(v, truth);
    rel_err[i] = m.value;
    zero[i] = m.absolute ? 1 : 0;
  });

  AreaMetrics out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!area.truths[i].truth) continue;
    ++out.samples;
    if (abs_err[i] > out.max_abs || out.samples == 1) {
      out.max_abs = abs_err[i];
      out.worst_abs = {area.points[i], abs_err[i]};
    }
    if (zero[i]) {
      out.zero_truth.push_back({area.points[i], abs_err[i]});
      continue;
    }
    if (rel_err[i] > out.max_rel || out.worst_rel.point.empty()) {
      out.max_rel = rel_err[i];
      out.worst_rel = {area.points[i], rel_err[i]};
    }
  }
  return out;
}

}  // namespace

Measurement measure(const FunctionDef& f, const TaylorPatch* patch, const Region& region,
                    const MeasureOptions& options) {
  if (region.center.size() != f.arity()) throw Error("region center has the wrong number of coordinates");
  const Interval& domain = f.params()[region.var].domain;
  const double mid = region.center[region.var];
  if (!domain.contains(mid - region.radius) || !domain.contains(mid + region.radius)) {
    throw Error("region leaves the domain of " + f.params()[region.var].name);
  }
  if (patch != nullptr) {
    if (patch->params.size() != f.arity() || patch->var != region.var) throw Error("patch does not match the region");
    if (std::fabs(patch->expansion_point[patch->var] - mid) + region.radius > patch->radius) {
      throw Error("patch validity radius does not cover the region");
    }
  }

  Area areas[2] = {{"stable", sample_stable(region, options.n_stable, options.seed), {}},
                   {"decayed", sample_decayed(region, options.n_decayed, options.seed ^ 0x9e3779b97f4a7c15ULL), {}}};
  for (Area& a : areas) oracle_pass(f, a, options);

  auto report = [&](Variant variant, auto&& approx) {
    EvaluationReport r;
    r.function = f.name();
    r.variant = variant;
    r.stable = score(areas[0], approx, options);
    r.decayed = score(areas[1], approx, options);
    for (const Area& a : areas) {
      for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (!a.truths[i].truth) r.excluded.push_back({a.points[i], a.name, a.truths[i].failure});
      }
    }
    return r;
  };

  Measurement m;
  m.naive = report(Variant::Naive, [&](const Point& p) { return evaluate(f, p); });
  if (patch != nullptr) m.patched = report(Variant::Patched, [&](const Point& p) { return eval_patch(*patch, p); });
  return m;
}

double improvement_order(double naive, double patched) noexcept {
  if (patched == 0.0) return naive == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::log10(naive / patched);
}

Improvement improvement_orders(const EvaluationReport& naive, const EvaluationReport& patched) {
  return {improvement_order(naive.stable.max_abs, patched.stable.max_abs),
          improvement_order(naive.stable.max_rel, patched.stable.max_rel),
          improvement_order(naive.decayed.max_abs, patched.decayed.max_abs),
          improvement_order(naive.decayed.max_rel, patched.decayed.max_rel)};
}

}  // namespace ofp
