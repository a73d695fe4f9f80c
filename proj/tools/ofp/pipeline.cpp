#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ofp::cli {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<FunctionDef> parse_path(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_file(text);
  } catch (const ParseError& e) {
    throw Error(path.string() + ":" + e.what());
  }
}

std::optional<Label> label_from(std::string_view name) {
  for (Label l : {Label::NoSignificantError, Label::OriginalPrecisionRepairable, Label::RequiresHighPrecision}) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

std::vector<Target> from_builtin() {
  std::vector<Target> out;
  for (const CorpusEntry& e : builtin_corpus()) {
    out.push_back({e.function, "builtin:" + e.id, e.peak, e.region, e.expected, e.twin});
  }
  return out;
}

std::vector<Target> from_manifest(const std::filesystem::path& manifest) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw Error(manifest.string() + ": invalid manifest: " + e.what());
  }
  std::vector<Target> out;
  try {
    for (const auto& entry : root.at("entries")) {
      const auto file = manifest.parent_path() / entry.at("file").get<std::string>();
      const auto defs = parse_path(file);
      const std::string name = entry.at("function").get<std::string>();
      auto find = [&](const std::string& wanted) -> const FunctionDef& {
        for (const auto& d : defs) {
          if (d.name() == wanted) return d;
        }
        throw Error(file.string() + ": no function named " + wanted);
      };
      Target t{find(name), file.string(), std::nullopt, std::nullopt, std::nullopt, std::nullopt};
      if (entry.contains("peak")) t.peak = entry["peak"].get<std::vector<double>>();
      if (entry.contains("region")) {
        const auto& r = entry["region"];
        auto var = t.function.param_index(r.at("var").get<std::string>());
        if (!var) throw Error(file.string() + ": region variable is not a parameter");
        t.region = Region{r.at("center").get<std::vector<double>>(), *var, r.at("radius").get<double>()};
      }
      if (entry.contains("expected")) t.expected = label_from(entry["expected"].get<std::string>());
      if (entry.contains("twin") && entry["twin"].is_string()) t.twin = find(entry["twin"].get<std::string>());
      out.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(manifest.string() + ": malformed manifest: " + e.what());
  }
  return out;
}

}  // namespace

std::vector<Target> load_targets(const RunConfig& config) {
  std::vector<Target> out;
  if (config.builtin_corpus) out = from_builtin();
  if (config.manifest) {
    auto more = from_manifest(*config.manifest);
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  for (const auto& path : config.inputs) {
    for (auto& f : parse_path(path)) out.push_back({std::move(f), path, {}, {}, {}, {}});
  }
  return out;
}

double Pipeline::radius_for(const Target& t) const {
  if (config_.radius) return *config_.radius;
  if (t.region) return t.region->radius;
  return 0.01;
}

void Pipeline::detect(Analysis& a) const {
  a.detected = true;
  SearchOptions options;
  options.budget = config_.budget;
  options.seed = config_.seed;
  options.theta_atomic = config_.theta_atomic;
  options.threads = config_.threads;
  try {
    a.findings = search_error_inputs(a.target->function, options);
  } catch (const Error& e) {
    a.detect_error = e.what();
  }
}

void Pipeline::classify(Analysis& a) const {
  const Target& t = *a.target;
  if (config_.at) {
    a.classified_point = *config_.at;
  } else if (t.peak) {
    a.classified_point = *t.peak;
  } else {
    if (!a.detected) detect(a);
    if (!a.findings.empty()) a.classified_point = a.findings.front().point;
  }
  if (!a.classified_point) return;
  Thresholds th{config_.theta_atomic, config_.theta_func, config_.probe_offset};
  try {
    a.classification = ofp::classify(t.function, *a.classified_point, th);
  } catch (const Error& e) {
    a.classify_error = e.what();
  }
}

void Pipeline::repair(Analysis& a) const {
  const Target& t = *a.target;
  const FunctionDef& f = t.function;
  const double radius = radius_for(t);
  const bool forced = config_.at && config_.var;
  if (forced) {
    auto var = f.param_index(*config_.var);
    if (!var) throw Error("--var " + *config_.var + " is not a parameter of " + f.name());
    a.expansion = ExpansionChoice{*var, *config_.at};
  } else {
    if (!a.classification && !a.classify_error) classify(a);
    if (!a.classification) {
      a.repair_skipped = a.classify_error ? "classification failed: " + *a.classify_error : "no flagged input";
      return;
    }
    if (a.classification->label != Label::OriginalPrecisionRepairable) {
      a.repair_skipped = "not repairable: " + std::string(label_name(a.classification->label));
      return;
    }
    if (t.region) {
      a.expansion = ExpansionChoice{t.region->var, t.region->center};
    } else {
      a.expansion = choose_expansion(f, *a.classified_point, radius, a.classification->profile.gamma);
    }
  }
  RepairOptions options;
  options.theta_atomic = config_.theta_atomic;
  options.node_cap = config_.node_cap;
  SynthesisResult result = synthesize_patch(f, a.expansion->point, a.expansion->var, radius, options);
  if (result) {
    a.patch = result.patch();
  } else {
    a.failure = result.failure();
  }
}

void Pipeline::evaluate(Analysis& a) const {
  const Target& t = *a.target;
  if (t.region && !config_.radius) {
    a.region = t.region;
  } else if (a.expansion) {
    a.region = Region{a.expansion->point, a.expansion->var, radius_for(t)};
  } else if (t.region) {
    a.region = Region{t.region->center, t.region->var, radius_for(t)};
  } else {
    a.eval_error = "no region: the function was neither repaired nor given a documented region";
    return;
  }
  MeasureOptions options;
  options.n_stable = config_.samples;
  options.n_decayed = config_.samples;
  options.precision_bits = config_.precision_bits;
  options.seed = config_.seed;
  options.threads = config_.threads;
  try {
    a.measurement = measure(t.function, a.patch ? &*a.patch : nullptr, *a.region, options);
  } catch (const Error& e) {
    a.eval_error = e.what();
  }
}

}  // namespace ofp::cli
