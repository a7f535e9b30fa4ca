#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "qae/classify.hpp"
#include "qae/expressibility.hpp"
#include "qae/optimize.hpp"

namespace qae::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitData = 3,
  kExitInternal = 4,
};

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand. Never throws; failures map to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CensusRow {
  int circuit = 0;
  ArbitraryGate gate = ArbitraryGate::None;
  int repetitions = 0;
  std::size_t params = 0;
  GateCensus census;
};

/// The eleven published configurations with their expected counts.
std::span<const CensusRow> census_expectations();

struct CensusOutcome {
  std::vector<CensusRow> measured;
  std::size_t mismatches = 0;
  std::string table;
};

CensusOutcome run_census();

struct TrainOutputs {
  TrainResult result;
  std::filesystem::path model_path;
  std::filesystem::path manifest_path;
};

struct EvalOutputs {
  EvalReport report;
  std::filesystem::path report_path;
  std::filesystem::path records_path;
};

struct ExpressibilityOutputs {
  std::vector<ExpressibilityReport> runs;
  double mean_d_kl = 0.0;
  std::filesystem::path report_path;
};

struct PcaOutputs {
  std::size_t rows = 0;
  std::filesystem::path csv_path;
  std::filesystem::path svg_path;
};

TrainOutputs cmd_train(const RunConfig& config);
EvalOutputs cmd_eval(const RunConfig& config, const std::filesystem::path& model_path);
ExpressibilityOutputs cmd_expressibility(const RunConfig& config, bool dump_fidelities = false);
PcaOutputs cmd_pca(const RunConfig& config, const std::filesystem::path& model_path);

/// Loads and validates a model file against the configured ansatz/layout.
TrainResult load_model(const RunConfig& config, const std::filesystem::path& model_path);

}  // namespace qae::cli
