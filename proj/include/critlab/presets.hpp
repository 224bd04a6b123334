#pragma once

#include "critlab/io.hpp"

#include <map>

namespace critlab {

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0;      // measured
  double threshold = 0;  // limit it was held against
};

struct Finding {
  std::string name;
  std::string verdict;
  json data;  // free-form numbers backing the verdict
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct PresetResult {
  std::string name;
  std::vector<Assertion> assertions;
  std::vector<Finding> findings;
  std::vector<std::string> operations;  // operations the preset exercised
  std::map<std::string, CsvTable> tables;
  double elapsed_ms = 0;

  bool passed() const;
  json to_json() const;  // deterministic (no timestamps, sorted keys)
};

struct RunOptions {
  unsigned long seed = 1;
};

/// Built-in scenario names, in a stable order.
const std::vector<std::string>& preset_names();

/// The canonical operation list used by the coverage check.
const std::vector<std::string>& all_operation_names();

/// Runs one named scenario. Throws ConfigError for unknown names.
PresetResult run_preset(const std::string& name, const RunOptions& opts = {});

}  // namespace critlab
