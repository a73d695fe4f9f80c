#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ofp/detect.hpp"
#include "ofp/eval.hpp"
#include "ofp/expr.hpp"

namespace ofp {

struct CorpusEntry {
  /// File stem and manifest key.
  std::string id;
  FunctionDef function;
  /// Documented peak-error input, used for classification.
  std::vector<double> peak;
  /// Neighbourhood the patch is built for and measured on.
  Region region;
  Label expected;
  /// Member of the repairable set (excludes controls and reference entries).
  bool repairable;
  /// Reference-accurate algebraic rewrite, when one is known.
  std::optional<FunctionDef> twin;
  std::string notes;
};

/// Builtin benchmark functions, in a fixed order.
const std::vector<CorpusEntry>& builtin_corpus();

const CorpusEntry* find_entry(std::string_view id);

/// `.fpdsl` text of one entry: a comment line with the notes, the function,
/// and the twin when present.
std::string entry_source(const CorpusEntry& entry);

/// Manifest binding each file to its peak, region and expected label.
std::string corpus_manifest();

/// Writes `<id>.fpdsl` per entry plus `manifest.json` into `dir`.
void export_corpus(const std::filesystem::path& dir);

}  // namespace ofp
