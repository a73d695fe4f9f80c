#include <fstream>

#include "json.hpp"

#include "ofp/corpus.hpp"

namespace ofp {
namespace {

struct Spec {
  const char* id;
  const char* source;
  std::vector<double> peak;
  std::vector<double> center;
  const char* var;
  double radius;
  Label expected;
  bool repairable;
  const char* twin;
  const char* notes;
};

const Spec kSpecs[] = {
    {"sin_shift", "func sin_shift(x in [0, 3], eps in [-0.001, 0.001]) = sin(x + eps) - sin(x)", {2.13, 1e-6},
     {2.13, 0.0}, "eps", 1e-3, Label::OriginalPrecisionRepairable, true, nullptr,
     "difference of sines at a small shift; cancels as eps approaches 0"},
    {"sqrt_gap", "func sqrt_gap(x in [1e8, 1e10]) = sqrt(x + 1) - sqrt(x)", {1e9}, {1e9}, "x", 0.01,
     Label::OriginalPrecisionRepairable, true, "func sqrt_gap_twin(x in [1e8, 1e10]) = 1 / (sqrt(x + 1) + sqrt(x))",
     "large-argument cancellation; the twin rationalizes the numerator"},
    {"one_minus_cos", "func one_minus_cos(x in [-1, 1]) = (1 - cos(x)) / x^2", {1e-4}, {0.0}, "x", 0.01,
     Label::OriginalPrecisionRepairable, true, nullptr, "removable singularity at 0 with cancellation in 1 - cos(x)"},
    {"expm1_ratio", "func expm1_ratio(x in [-1, 1]) = (exp(x) - 1) / x", {1e-9}, {0.0}, "x", 0.01,
     Label::OriginalPrecisionRepairable, true, nullptr, "removable singularity at 0 with cancellation in exp(x) - 1"},
    {"log1p_ratio", "func log1p_ratio(x in [-1, 1]) = log(1 + x) / x", {1e-9}, {0.0}, "x", 0.01,
     Label::OriginalPrecisionRepairable, true, nullptr, "removable singularity at 0; 1 + x rounds away low bits of x"},
    {"hyperg_series",
     "func hyperg_series(c in (0, 10], x in [-1, 1]) = 1 + x / c + x^2 / (c * (c + 1) * 2)"
     " + x^3 / (c * (c + 1) * (c + 2) * 6) + x^4 / (c * (c + 1) * (c + 2) * (c + 3) * 24)"
     " + x^5 / (c * (c + 1) * (c + 2) * (c + 3) * (c + 4) * 120)"
     " + x^6 / (c * (c + 1) * (c + 2) * (c + 3) * (c + 4) * (c + 5) * 720)",
     {3.39e-215, 3.95e-242}, {3.39e-215, 0.0}, "x", 1e-216, Label::NoSignificantError, false, nullptr,
     "truncated 0F1(c; x) series at a tiny c; series reference, accurate as written"},
    {"plus_one", "func plus_one(x in [0, 1]) = x + 1", {0.5}, {0.5}, "x", 0.01, Label::NoSignificantError, false,
     nullptr, "negative control: well conditioned everywhere"},
    {"cubic_root_gap", "func cubic_root_gap(x in [99, 101]) = x * x * x - 999999", {99.99996666666}, {99.99996666666},
     "x", 0.01, Label::RequiresHighPrecision, false, nullptr,
     "negative control: near an irrational root the function itself is ill conditioned"},
    {"x_minus_sin", "func x_minus_sin(x in [-1, 1]) = x - sin(x)", {1e-3}, {0.0}, "x", 0.01,
     Label::OriginalPrecisionRepairable, true, nullptr, "cancellation of x against sin(x) near 0"},
    {"cos_shift", "func cos_shift(x in [0, 3], eps in [-0.001, 0.001]) = cos(x + eps) - cos(x)", {1.2, 1e-6},
     {1.2, 0.0}, "eps", 1e-3, Label::OriginalPrecisionRepairable, true, nullptr,
     "difference of cosines at a small shift"},
};

CorpusEntry build(const Spec& s) {
  FunctionDef f = parse(s.source);
  auto var = f.param_index(s.var);
  if (!var) throw Error(std::string("corpus entry ") + s.id + ": unknown region variable");
  std::optional<FunctionDef> twin;
  if (s.twin != nullptr) twin = parse(s.twin);
  return {s.id, std::move(f), s.peak, Region{s.center, *var, s.radius}, s.expected, s.repairable, std::move(twin),
          s.notes};
}

}  // namespace

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> out;
    for (const Spec& s : kSpecs) out.push_back(build(s));
    return out;
  }();
  return corpus;
}

const CorpusEntry* find_entry(std::string_view id) {
  for (const auto& e : builtin_corpus()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string entry_source(const CorpusEntry& entry) {
  std::string out = "# " + entry.notes + "\n" + pretty_print(entry.function) + "\n";
  if (entry.twin) out += pretty_print(*entry.twin) + "\n";
  return out;
}

std::string corpus_manifest() {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& e : builtin_corpus()) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["file"] = e.id + ".fpdsl";
    j["function"] = e.function.name();
    j["peak"] = e.peak;
    j["region"] = {{"center", e.region.center},
                   {"var", e.function.params()[e.region.var].name},
                   {"radius", e.region.radius}};
    j["expected"] = label_name(e.expected);
    j["repairable"] = e.repairable;
    j["twin"] = e.twin ? nlohmann::ordered_json(e.twin->name()) : nlohmann::ordered_json(nullptr);
    j["notes"] = e.notes;
    entries.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["schema"] = "ofp-corpus/1";
  root["entries"] = std::move(entries);
  return root.dump(2) + "\n";
}

void export_corpus(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
  };
  for (const auto& e : builtin_corpus()) write(e.id + ".fpdsl", entry_source(e));
  write("manifest.json", corpus_manifest());
}

}  // namespace ofp
