#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ofp/corpus.hpp"
#include "ofp/detect.hpp"
#include "ofp/eval.hpp"
#include "ofp/repair.hpp"

namespace ofp::cli {

/// One function to analyse, with whatever the input source documents about it.
struct Target {
  FunctionDef function;
  std::string origin;
  std::optional<std::vector<double>> peak;
  std::optional<Region> region;
  std::optional<Label> expected;
  std::optional<FunctionDef> twin;
};

/// Builtin corpus, a manifest, or plain `.fpdsl` files. Throws ofp::Error
/// (ParseError for syntax) when an input cannot be read.
std::vector<Target> load_targets(const RunConfig& config);

struct Analysis {
  const Target* target = nullptr;
  std::optional<std::string> detect_error;
  std::vector<Finding> findings;
  bool detected = false;

  std::optional<std::vector<double>> classified_point;
  std::optional<Classification> classification;
  std::optional<std::string> classify_error;

  std::optional<ExpansionChoice> expansion;
  std::optional<TaylorPatch> patch;
  std::optional<RepairFailure> failure;
  std::optional<std::string> repair_skipped;

  std::optional<Region> region;
  std::optional<Measurement> measurement;
  std::optional<std::string> eval_error;
};

class Pipeline {
 public:
  explicit Pipeline(const RunConfig& config) : config_(config) {}

  void detect(Analysis& a) const;
  void classify(Analysis& a) const;
  void repair(Analysis& a) const;
  void evaluate(Analysis& a) const;

 private:
  double radius_for(const Target& t) const;
  const RunConfig& config_;
};

}  // namespace ofp::cli
