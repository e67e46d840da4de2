#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rotsym/io.hpp"
#include "rotsym/svg.hpp"

namespace rotsym {

using Json = nlohmann::ordered_json;

struct AssertionResult {
  std::string name;
  double measured = 0;
  std::string relation;  // "<=", ">=", "<", "==", "finite", "true"
  double bound = 0;
  bool pass = false;
  std::string source;  // csv file and column holding `measured`
};

struct ExperimentOutput {
  std::vector<Table> tables;
  std::vector<AssertionResult> assertions;
  std::vector<Plot> plots;

  void check(const std::string& name, double measured, const std::string& relation, double bound,
             const std::string& source);
};

struct ExperimentDef {
  std::string name;
  std::string description;
  double budget_s = 0;
  std::function<Json()> defaults;
  std::function<ExperimentOutput(const Json& params, std::uint64_t seed)> run;
};

const std::vector<ExperimentDef>& experiment_registry();
const ExperimentDef* find_experiment(const std::string& name);

// defaults overlaid with a flat config or a manifest; throws ConfigError
Json resolve_params(const ExperimentDef& def, const Json& config);

struct RunOptions {
  std::string config_path;
  std::string out_base = "runs";
  std::string out_dir;  // exact directory; overrides the timestamped one
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int code = 1;  // 0 pass, 2 assertion failure, 1 configuration error
  std::string dir;
  std::string message;
  double seconds = 0;
};

RunResult run_experiment(const std::string& name, const RunOptions& opt);

struct ReportResult {
  int code = 1;
  std::string text;
  Json summary;
};

ReportResult report(const std::string& dir);

std::string tool_version();

}  // namespace rotsym
