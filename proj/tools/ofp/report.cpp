#include "report.hpp"

#include <cmath>
#include <sstream>

namespace ofp::cli {

Json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

Json reals(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(real(v));
  return out;
}

Json finding_json(const Finding& f) {
  Json j;
  j["point"] = reals(f.point);
  j["maxAtomic"] = real(f.max_atomic);
  j["node"] = f.node ? Json(*f.node) : Json(nullptr);
  j["op"] = f.op ? Json(std::string(op_name(*f.op))) : Json(nullptr);
  return j;
}

Json classification_json(const Classification& c) {
  Json j;
  j["point"] = reals(c.profile.point);
  j["label"] = label_name(c.label);
  j["gamma"] = reals(c.profile.gamma);
  j["maxAtomic"] = real(c.peak.value);
  j["peakNode"] = c.peak.node ? Json(*c.peak.node) : Json(nullptr);
  j["peakOp"] = c.peak.op ? Json(std::string(op_name(*c.peak.op))) : Json(nullptr);
  j["thresholds"] = {{"atomic", real(c.thresholds.atomic)},
                     {"function", real(c.thresholds.function)},
                     {"probeOffset", real(c.thresholds.probe_offset)}};
  Json probes = Json::array();
  for (const auto& p : c.probes) probes.push_back(reals(p));
  j["probes"] = std::move(probes);
  return j;
}

Json patch_json(const TaylorPatch& p) {
  Json j;
  j["name"] = p.source_name + "_patched";
  j["var"] = p.params[p.var].name;
  j["expansionPoint"] = reals(p.expansion_point);
  j["radius"] = real(p.radius);
  j["terms"] = p.terms;
  j["mode"] = constant_mode_name(p.mode);
  j["route"] = route_name(p.route);
  j["magnitudeOk"] = p.magnitude_ok;
  j["degraded"] = p.degraded;
  Json coeffs = Json::array();
  const auto names = [&] {
    std::vector<std::string> n;
    for (const auto& d : p.params) n.push_back(d.name);
    return n;
  }();
  for (const auto& c : p.coefficients) {
    coeffs.push_back({{"order", c.order}, {"expr", to_source(c.expr, names)}, {"value", real(c.value)}});
  }
  j["coeffs"] = std::move(coeffs);
  j["source"] = emit_patch_source(p);
  return j;
}

Json offender_json(const Offender& o) { return {{"point", reals(o.point)}, {"error", real(o.error)}}; }

Json area_json(const AreaMetrics& m) {
  Json j;
  j["samples"] = m.samples;
  j["maxAbs"] = real(m.max_abs);
  j["maxRel"] = real(m.max_rel);
  j["worstAbs"] = offender_json(m.worst_abs);
  j["worstRel"] = offender_json(m.worst_rel);
  Json zeros = Json::array();
  for (const auto& z : m.zero_truth) zeros.push_back(offender_json(z));
  j["zeroTruth"] = std::move(zeros);
  return j;
}

Json report_json_one(const EvaluationReport& r) {
  Json j;
  j["variant"] = variant_name(r.variant);
  j["stable"] = area_json(r.stable);
  j["decayed"] = area_json(r.decayed);
  Json excluded = Json::array();
  for (const auto& e : r.excluded) {
    excluded.push_back({{"point", reals(e.point)}, {"area", e.area}, {"reason", e.reason}});
  }
  j["excluded"] = std::move(excluded);
  return j;
}

Json metrics_json(const Analysis& a) {
  const Measurement& m = *a.measurement;
  Json j;
  j["region"] = {{"center", reals(a.region->center)},
                 {"var", a.target->function.params()[a.region->var].name},
                 {"radius", real(a.region->radius)}};
  j["naive"] = report_json_one(m.naive);
  j["patched"] = m.patched ? report_json_one(*m.patched) : Json(nullptr);
  if (m.patched) {
    Improvement im = improvement_orders(m.naive, *m.patched);
    j["improvement"] = {{"stableAbs", real(im.stable_abs)},
                        {"stableRel", real(im.stable_rel)},
                        {"decayedAbs", real(im.decayed_abs)},
                        {"decayedRel", real(im.decayed_rel)}};
  } else {
    j["improvement"] = nullptr;
  }
  return j;
}

template <typename T, typename Fn>
Json optional_json(const std::optional<T>& v, Fn&& fn) {
  return v ? fn(*v) : Json(nullptr);
}

}  // namespace

Json config_json(const RunConfig& c) {
  Json j;
  j["thetaAtomic"] = real(c.theta_atomic);
  j["thetaFunc"] = real(c.theta_func);
  j["probeOffset"] = real(c.probe_offset);
  j["radius"] = c.radius ? real(*c.radius) : Json(nullptr);
  j["samples"] = c.samples;
  j["budget"] = c.budget;
  j["nodeCap"] = c.node_cap;
  j["precisionBits"] = c.precision_bits;
  j["seed"] = c.seed;
  j["ceiling"] = c.ceiling ? real(*c.ceiling) : Json(nullptr);
  return j;
}

Json analysis_json(const Analysis& a) {
  Json j;
  j["function"] = a.target->function.name();
  j["origin"] = a.target->origin;
  j["expected"] = a.target->expected ? Json(std::string(label_name(*a.target->expected))) : Json(nullptr);
  if (a.detected) {
    Json points = Json::array();
    for (const auto& f : a.findings) points.push_back(finding_json(f));
    j["points"] = std::move(points);
  } else {
    j["points"] = nullptr;
  }
  j["detectError"] = optional_json(a.detect_error, [](const std::string& s) { return Json(s); });
  j["label"] = a.classification ? Json(std::string(label_name(a.classification->label))) : Json(nullptr);
  j["gamma"] = a.classification ? reals(a.classification->profile.gamma) : Json(nullptr);
  j["classification"] = optional_json(a.classification, classification_json);
  j["classifyError"] = optional_json(a.classify_error, [](const std::string& s) { return Json(s); });
  j["patch"] = optional_json(a.patch, patch_json);
  j["failure"] = optional_json(a.failure, [](const RepairFailure& f) {
    return Json{{"reason", std::string(failure_name(f.reason))}, {"message", f.message}};
  });
  j["repairSkipped"] = optional_json(a.repair_skipped, [](const std::string& s) { return Json(s); });
  j["metrics"] = a.measurement ? metrics_json(a) : Json(nullptr);
  j["evalError"] = optional_json(a.eval_error, [](const std::string& s) { return Json(s); });
  return j;
}

Json report_json(const RunConfig& config, const std::vector<Analysis>& analyses, const Json& summary) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = config.command;
  j["config"] = config_json(config);
  Json functions = Json::array();
  for (const auto& a : analyses) functions.push_back(analysis_json(a));
  j["functions"] = std::move(functions);
  j["summary"] = summary;
  return j;
}

std::string metrics_csv(const std::vector<Analysis>& analyses) {
  std::ostringstream out;
  out.precision(17);
  out << "function,variant,metric,value\n";
  auto rows = [&](const std::string& fn, const EvaluationReport& r) {
    const std::string v(variant_name(r.variant));
    const std::pair<const char*, double> metrics[] = {{"max_abs_stable", r.stable.max_abs},
                                                      {"max_rel_stable", r.stable.max_rel},
                                                      {"max_abs_decayed", r.decayed.max_abs},
                                                      {"max_rel_decayed", r.decayed.max_rel}};
    for (const auto& [name, value] : metrics) out << fn << ',' << v << ',' << name << ',' << value << '\n';
  };
  for (const auto& a : analyses) {
    if (!a.measurement) continue;
    rows(a.target->function.name(), a.measurement->naive);
    if (a.measurement->patched) rows(a.target->function.name(), *a.measurement->patched);
  }
  return out.str();
}

}  // namespace ofp::cli
