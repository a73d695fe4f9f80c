#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pipeline.hpp"
#include "report.hpp"

namespace ofp::cli {
namespace {

// Values given on the command line; unset ones fall back to the config file,
// then to OFP_SEED for the seed, then to the RunConfig defaults.
struct Flags {
  std::vector<std::string> inputs;
  std::optional<std::string> manifest;
  bool corpus = false;
  std::optional<std::string> config;
  std::optional<double> theta_atomic;
  std::optional<double> theta_func;
  std::optional<double> probe_offset;
  std::optional<double> radius;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> node_cap;
  std::optional<long> precision_bits;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> ceiling;
  std::optional<std::string> var;
  std::optional<std::string> at;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::optional<std::string> patch_dir;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::uint64_t parse_seed(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string(what) + " is not an unsigned 64-bit integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) throw UsageError("--at: empty coordinate");
    item = item.substr(first, last - first + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw UsageError("--at: malformed coordinate '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--at: no coordinates");
  return out;
}

void apply_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError(path + ": config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "theta_atomic") c.theta_atomic = value.get<double>();
      else if (key == "theta_func") c.theta_func = value.get<double>();
      else if (key == "probe_offset") c.probe_offset = value.get<double>();
      else if (key == "radius") c.radius = value.get<double>();
      else if (key == "samples") c.samples = value.get<std::size_t>();
      else if (key == "budget") c.budget = value.get<std::size_t>();
      else if (key == "node_cap") c.node_cap = value.get<std::size_t>();
      else if (key == "precision_bits") c.precision_bits = value.get<long>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (key == "ceiling") c.ceiling = value.get<double>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "csv") c.csv = value.get<std::string>();
      else if (key == "patch_dir") c.patch_dir = value.get<std::string>();
      else throw UsageError(path + ": unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

template <typename T>
void overlay(std::optional<T> flag, T& target) {
  if (flag) target = *flag;
}

template <typename T>
void overlay(std::optional<T> flag, std::optional<T>& target) {
  if (flag) target = *flag;
}

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig c;
  c.command = command;
  if (const char* env = std::getenv("OFP_SEED"); env != nullptr && *env != '\0') c.seed = parse_seed(env, "OFP_SEED");
  if (f.config) apply_config_file(*f.config, c);
  c.inputs = f.inputs;
  c.manifest = f.manifest;
  c.builtin_corpus = f.corpus || (f.inputs.empty() && !f.manifest);
  overlay(f.theta_atomic, c.theta_atomic);
  overlay(f.theta_func, c.theta_func);
  overlay(f.probe_offset, c.probe_offset);
  overlay(f.radius, c.radius);
  overlay(f.samples, c.samples);
  overlay(f.budget, c.budget);
  overlay(f.node_cap, c.node_cap);
  overlay(f.precision_bits, c.precision_bits);
  overlay(f.seed, c.seed);
  overlay(f.threads, c.threads);
  overlay(f.ceiling, c.ceiling);
  overlay(f.var, c.var);
  overlay(f.out, c.out);
  overlay(f.csv, c.csv);
  overlay(f.patch_dir, c.patch_dir);
  if (f.at) c.at = parse_point(*f.at);

  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive");
  };
  positive(c.theta_atomic, "--theta-atomic");
  positive(c.theta_func, "--theta-func");
  positive(c.probe_offset, "--probe-offset");
  if (c.radius) positive(*c.radius, "--radius");
  if (c.ceiling) positive(*c.ceiling, "--ceiling");
  if (c.samples == 0) throw UsageError("--samples must be positive");
  if (c.budget == 0) throw UsageError("--budget must be positive");
  if (c.node_cap == 0) throw UsageError("--node-cap must be positive");
  if (c.precision_bits < 128) throw UsageError("--precision-bits must be at least 128");
  if (c.var && !c.at) throw UsageError("--var requires --at");
  return c;
}

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("inputs", f.inputs, ".fpdsl files to analyse (default: the builtin corpus)");
  sub.add_option("--manifest", f.manifest, "corpus manifest.json binding files to regions");
  sub.add_flag("--corpus", f.corpus, "include the builtin corpus");
  sub.add_option("--config", f.config, "JSON config file; flags take precedence");
  sub.add_option("--theta-atomic", f.theta_atomic, "atomic condition threshold (default 1e5)");
  sub.add_option("--theta-func", f.theta_func, "function condition threshold (default 1e5)");
  sub.add_option("--probe-offset", f.probe_offset, "classification probe distance (default 1e-5)");
  sub.add_option("--radius", f.radius, "patch and region radius (default: per target, else 0.01)");
  sub.add_option("--samples", f.samples, "samples per area for eval (default 1000)");
  sub.add_option("--budget", f.budget, "detection sample budget (default 4096)");
  sub.add_option("--node-cap", f.node_cap, "largest derivative tree before a patch is degraded (default 50000)");
  sub.add_option("--precision-bits", f.precision_bits, "oracle precision (default 256)");
  sub.add_option("--seed", f.seed, "RNG seed (default 42, or OFP_SEED)");
  sub.add_option("--threads", f.threads, "worker threads (default: hardware concurrency)");
  sub.add_option("--ceiling", f.ceiling, "fail (exit 1) when a patched relative metric exceeds this");
  sub.add_option("--var", f.var, "expansion variable for a forced repair (with --at)");
  sub.add_option("--at", f.at, "point as comma-separated coordinates");
  sub.add_option("--out", f.out, "write the JSON report here instead of stdout");
  sub.add_option("--csv", f.csv, "write eval metrics as CSV");
  sub.add_option("--patch-dir", f.patch_dir, "directory for emitted patches (default ./patches)");
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

struct Stages {
  bool detect = false;
  bool classify = false;
  bool repair = false;
  bool eval = false;
};

Stages stages_for(const std::string& command) {
  if (command == "detect") return {true, false, false, false};
  if (command == "classify") return {false, true, false, false};
  if (command == "repair") return {false, true, true, false};
  if (command == "eval") return {false, true, true, true};
  return {true, true, true, true};
}

Json summarize(const RunConfig& config, const std::vector<Analysis>& analyses, const Stages& s, bool& gate_ok) {
  Json j;
  j["functions"] = analyses.size();
  if (s.detect) {
    std::size_t flagged = 0;
    for (const auto& a : analyses) flagged += a.findings.empty() ? 0 : 1;
    j["flagged"] = flagged;
  }
  if (s.classify) {
    Json labels = Json::object();
    for (const auto& a : analyses) {
      const std::string key = a.classification ? std::string(label_name(a.classification->label)) : "unclassified";
      labels[key] = labels.value(key, 0) + 1;
    }
    j["labels"] = std::move(labels);
  }
  if (s.repair) {
    Json patches = Json::array(), failures = Json::array(), degraded = Json::array(), skipped = Json::array();
    for (const auto& a : analyses) {
      const std::string name = a.target->function.name();
      if (a.patch) {
        patches.push_back(name + "_patched");
        if (a.patch->degraded) degraded.push_back(name + "_patched");
      }
      if (a.failure) {
        failures.push_back({{"function", name}, {"reason", std::string(failure_name(a.failure->reason))},
                            {"message", a.failure->message}});
      }
      if (a.repair_skipped) skipped.push_back({{"function", name}, {"reason", *a.repair_skipped}});
    }
    j["patches"] = std::move(patches);
    j["failures"] = std::move(failures);
    j["degraded"] = std::move(degraded);
    j["skipped"] = std::move(skipped);
  }
  if (s.eval) {
    Json violations = Json::array();
    double sum_stable = 0.0, sum_decayed = 0.0;
    std::size_t pairs = 0;
    for (const auto& a : analyses) {
      if (!a.measurement || !a.measurement->patched) continue;
      const auto& p = *a.measurement->patched;
      Improvement im = improvement_orders(a.measurement->naive, p);
      sum_stable += im.stable_rel;
      sum_decayed += im.decayed_rel;
      ++pairs;
      if (!config.ceiling) continue;
      const std::pair<const char*, double> metrics[] = {{"max_rel_stable", p.stable.max_rel},
                                                        {"max_rel_decayed", p.decayed.max_rel}};
      for (const auto& [metric, value] : metrics) {
        if (!(value <= *config.ceiling)) {
          violations.push_back({{"function", a.target->function.name()}, {"metric", metric}, {"value", real(value)}});
        }
      }
    }
    j["evaluatedPairs"] = pairs;
    j["meanImprovement"] = {{"stableRel", pairs ? real(sum_stable / static_cast<double>(pairs)) : Json(nullptr)},
                            {"decayedRel", pairs ? real(sum_decayed / static_cast<double>(pairs)) : Json(nullptr)}};
    gate_ok = violations.empty();
    j["gate"] = {{"ceiling", config.ceiling ? real(*config.ceiling) : Json(nullptr)},
                 {"passed", gate_ok},
                 {"violations", std::move(violations)}};
  }
  return j;
}

int analyse(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<Target> targets = load_targets(config);
  if (targets.empty()) throw UsageError("no functions to analyse");
  const Stages stages = stages_for(config.command);
  const Pipeline pipeline(config);

  std::vector<Analysis> analyses(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    Analysis& a = analyses[i];
    a.target = &targets[i];
    if (stages.detect) pipeline.detect(a);
    if (stages.classify) pipeline.classify(a);
    if (stages.repair) pipeline.repair(a);
    if (stages.eval) pipeline.evaluate(a);
  }

  if (stages.repair) {
    for (const auto& a : analyses) {
      if (!a.patch) continue;
      const auto path = std::filesystem::path(config.patch_dir) / (a.target->function.name() + "_patched.fpdsl");
      write_text(path.string(), emit_patch_source(*a.patch));
      if (a.patch->degraded) err << "ofp: warning: " << a.target->function.name() << " patch is degraded\n";
    }
  }
  for (const auto& a : analyses) {
    if (a.measurement && !a.measurement->naive.excluded.empty()) {
      err << "ofp: " << a.target->function.name() << ": " << a.measurement->naive.excluded.size()
          << " sample(s) excluded where the oracle failed\n";
    }
  }

  bool gate_ok = true;
  const Json report = report_json(config, analyses, summarize(config, analyses, stages, gate_ok));
  const std::string text = report.dump(2) + "\n";
  if (config.out) {
    write_text(*config.out, text);
  } else {
    out << text;
  }
  if (config.csv) write_text(*config.csv, metrics_csv(analyses));
  return gate_ok ? kOk : kGateFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detect, classify and repair floating-point errors in working precision", "ofp"};
  app.require_subcommand(1);
  Flags flags;
  const char* commands[][2] = {
      {"detect", "search each function for inputs with large atomic condition numbers"},
      {"classify", "classify flagged inputs by whole-function condition numbers"},
      {"repair", "synthesize Taylor patches for repairable functions"},
      {"eval", "measure naive and patched errors against the oracle"},
      {"run-all", "detect, classify, repair and evaluate"},
  };
  for (const auto& [name, help] : commands) add_common(*app.add_subcommand(name, help), flags);

  std::string export_dir;
  CLI::App* corpus = app.add_subcommand("corpus", "builtin corpus utilities");
  corpus->require_subcommand(1);
  CLI::App* exporter = corpus->add_subcommand("export", "write the builtin corpus as .fpdsl files and a manifest");
  exporter->add_option("dir", export_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (exporter->parsed()) {
      export_corpus(export_dir);
      return kOk;
    }
    for (const auto& [name, help] : commands) {
      if (app.got_subcommand(name)) return analyse(resolve(name, flags), out, err);
    }
    return kUsage;
  } catch (const UsageError& e) {
    err << "ofp: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "ofp: error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace ofp::cli
